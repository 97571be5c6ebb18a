#pragma once

// Phase groups of measurements, well-defined-energy faces, stationarity,
// branch locality, energies from periods and discrete-time aliasing.

#include <optional>
#include <string>
#include <vector>

#include "gpt/dynamics.hpp"
#include "gpt/group.hpp"
#include "gpt/statespace.hpp"

namespace gpt::phase {

struct PhaseGroupResult {
  /// Reversible transformations T with w_b^T T = w_b^T for every effect.
  FiniteGroup finite;
  /// Antisymmetric generators G with w_b^T G = 0, restricted to the body's
  /// continuous axes. Orthonormal in the Frobenius sense.
  std::vector<Mat3> continuous;
};

/// Throws Unsupported when the space carries no transformation data.
PhaseGroupResult phase_group(const StateSpace& space, const Measurement& m,
                             bool allow_reflections = false);

/// max_b |w_b^T T - w_b^T|.
double statistics_defect(const Measurement& m, const Mat3& t);

struct FaceDescriptor {
  enum class Kind { Point, Segment, Disk, Sampled, Whole };
  Kind kind = Kind::Point;
  Vec3 center = Vec3::Zero();   // point, disk centre, segment midpoint
  Vec3 axis = Vec3::UnitZ();    // disk normal or segment direction
  double radius = 0.0;          // disk radius or segment half-length
};

const char* to_string(FaceDescriptor::Kind k);

struct Face {
  Effect effect;
  double level = 1.0;
  /// Vertices (polytopes) or 64 boundary samples plus the centre (disks).
  std::vector<Vec3> extreme_points;
  std::optional<FaceDescriptor> descriptor;

  bool empty() const { return extreme_points.empty(); }
};

/// {rho : effect(rho) = level} for level 0 or 1, where that set is a face.
Face face_of(const StateSpace& space, const Effect& effect, double level);

/// States with probability 1 for outcome `outcome` of m.
Face well_defined_states(const StateSpace& space, const Measurement& m, size_t outcome);

struct StationarityReport {
  bool all_stationary = true;
  std::optional<Vec3> moving_witness;
  std::optional<Vec3> witness_image;  // the witness after one step (discrete) or A rho
};

/// Throws InadmissibleDynamics when H admits no evolution.
StationarityReport stationary_under(const StateSpace& space, const Vec3& h, const Face& face);

struct LocalizationResult {
  bool localized = true;
  bool vacuous = false;  // the zero-support face is empty
  std::optional<Vec3> witness;
};

/// T fixes every state that gives zero probability to the outcomes in S.
LocalizationResult is_branch_localized(const Mat3& t, const StateSpace& space,
                                       const Measurement& m, const std::vector<size_t>& subset);

struct PeriodPair {
  int i = 0;
  int j = 0;
  double value = 0.0;  // period tau_ij, or gap Delta_ij for the _from_gaps form
};

struct EnergyAssignment {
  std::vector<int> labels;       // sorted
  std::vector<double> energies;  // energies[k] belongs to labels[k]; first is 0
  double residual = 0.0;         // max |E_j - E_i - Delta_ij|

  double energy(int label) const;
};

/// Delta_ij = 2 pi / tau_ij, then E_j - E_i = Delta_ij in least squares with
/// the smallest label fixed at 0. Throws NonpositivePeriod, DisconnectedGraph,
/// InconsistentCycle (residual > 1e-9 max|Delta|).
EnergyAssignment assign_energies(const std::vector<PeriodPair>& periods);
EnergyAssignment assign_energies_from_gaps(const std::vector<PeriodPair>& gaps);

struct AliasReport {
  std::vector<double> angles;    // distinct angles about the axis
  std::vector<double> energies;  // one representative per class, in [0, 2 pi / tau)
  size_t count() const { return energies.size(); }
};

AliasReport alias_classes(double tau_step, const FiniteGroup& group, const Vec3& axis);

struct InvStarReport {
  bool inv_holds = false;
  bool inv_star_holds = false;
  /// False only when m has two outcomes and INV holds without INV*.
  bool two_outcome_consistent = true;
  double expectation_drift = 0.0;
  double statistics_defect = 0.0;
};

/// INV: the observable built from `values` on m keeps its expectation under
/// T on sampled states. INV*: T preserves the body and every outcome
/// probability.
InvStarReport check_inv_star(const StateSpace& space, const Measurement& m,
                             const std::vector<double>& values, const Mat3& t,
                             int samples = 200, std::uint64_t seed = 0);

}  // namespace gpt::phase
