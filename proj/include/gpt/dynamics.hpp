#pragma once

// The 3D Hamiltonian recipe: the Hamiltonian vector is the coefficient
// vector of the generator in the (Lx, Ly, Lz) basis, so A rho = H x rho.
// Continuous or discrete evolution, allowed times, and the OBS/GEN/INV/QUAN
// verifier.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpt/statespace.hpp"

namespace gpt::dynamics {

struct HamiltonianObservable {
  Vec3 vector = Vec3::Zero();  // (H1, H2, H3), rotation rate |H|
  double offset = 0.0;         // H0; never enters the dynamics
  std::optional<Observable> decomposition;

  /// The conserved quantity tracked along trajectories: H.rho + H0.
  double energy(const StateVector& rho) const { return vector.dot(rho) + offset; }
};

/// Two-outcome decomposition along H/|H| with the canonical effects and
/// values H0 +- |H|/2, so that W = H/2, C = H0 and the level gap is |H|.
/// A zero vector gives the constant observable along z.
Observable canonical_decomposition(const Vec3& h, double offset);

/// Lx, Ly, Lz.
const std::array<Mat3, 3>& so3_basis();

struct Generator {
  Mat3 matrix = Mat3::Zero();
  Vec3 source = Vec3::Zero();
};

Generator recipe_generator(const Vec3& h);
Generator recipe_generator(const HamiltonianObservable& h);

/// Inverse of the recipe. Throws NotAntisymmetric beyond 1e-12.
HamiltonianObservable hamiltonian_from_generator(const Mat3& a);

/// exp(A t) via the Rodrigues formula about H/|H| with angle |H| t.
OrthogonalMap evolve_map(const Generator& a, double t);

enum class Mode { Continuous, Discrete, None };
const char* to_string(Mode m);

struct EvolutionSpec {
  Mode mode = Mode::None;
  bool trivial = false;        // zero Hamiltonian
  Vec3 axis = Vec3::UnitZ();   // H/|H|
  double min_angle = 0.0;      // discrete only
  double min_time = 0.0;       // discrete only: tau* = theta* / |H|

  std::string allowed_times() const;
};

EvolutionSpec allowed_times(const StateSpace& space, const HamiltonianObservable& h);

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<double> energies;
};

/// Throws StateOutsideSpace, InvalidTime (off-lattice in discrete mode,
/// message names tau*) and InadmissibleDynamics (mode none with t != 0).
Trajectory trajectory(const StateSpace& space, const HamiltonianObservable& h,
                      const StateVector& rho0, const std::vector<double>& grid);

/// Reflections of the theory's finite group with M^T H = H. Only used when
/// reflections are explicitly admitted.
std::vector<Mat3> energy_preserving_reflections(const StateSpace& space, const Vec3& h);

enum class Status { Pass, Fail, NotApplicable };
const char* to_string(Status s);

struct DesiderataEntry {
  std::string name;
  Status status = Status::NotApplicable;
  double worst = 0.0;  // the worst-case number the verdict rests on
  std::string detail;
  std::optional<Vec3> witness;
};

struct DesiderataReport {
  std::array<DesiderataEntry, 4> entries;  // OBS, GEN, INV, QUAN

  const DesiderataEntry& get(const std::string& name) const;
  /// Not-applicable entries do not count as failures.
  bool all_pass(const std::vector<std::string>& names) const;
};

struct VerifyOptions {
  int samples = 100;
  std::uint64_t seed = 0;
  double t_max = 10.0;
  int time_points = 101;
  /// Replaces the recipe generator (used to exhibit INV failures).
  std::optional<Mat3> generator_override;
  bool allow_reflections = false;
};

DesiderataReport verify_desiderata(const StateSpace& space, const HamiltonianObservable& h,
                                   const VerifyOptions& options = {});

struct DofReport {
  int generator_dof = 0;
  int observable_dof = 0;
  int mismatch = 0;
};

DofReport generator_dof_report(int n);

}  // namespace gpt::dynamics
