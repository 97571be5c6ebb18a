#include "gpt/phase.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include <Eigen/LU>
#include <Eigen/QR>

#include "gpt/error.hpp"
#include "gpt/symmetry.hpp"

namespace gpt::phase {

namespace {

constexpr double kFiniteTol = 1e-10;
constexpr double kGeneratorTol = 1e-12;
constexpr double kFaceTol = 1e-10;
constexpr double kSampledFaceTol = 1e-6;
constexpr int kCircleSamples = 64;

std::vector<Vec3> circle_samples(const Vec3& center, const Vec3& normal, double radius) {
  Vec3 u = normal.unitOrthogonal();
  Vec3 v = normal.normalized().cross(u);
  std::vector<Vec3> pts;
  pts.reserve(kCircleSamples + 1);
  pts.push_back(center);
  for (int k = 0; k < kCircleSamples; ++k) {
    const double a = 2.0 * kPi * k / kCircleSamples;
    pts.push_back(center + radius * (std::cos(a) * u + std::sin(a) * v));
  }
  return pts;
}

FaceDescriptor point(const Vec3& p) {
  FaceDescriptor d;
  d.kind = FaceDescriptor::Kind::Point;
  d.center = p;
  return d;
}

struct Argmax {
  double value = 0.0;
  std::vector<Vec3> points;
  std::optional<FaceDescriptor> descriptor;
};

// Maximizer set of d.rho over the body.
Argmax support(const StateSpace& space, const Vec3& d) {
  Argmax out;
  if (std::holds_alternative<BallBody>(space.body)) {
    const Vec3 n = d.normalized();
    out.value = d.norm();
    out.points = {n};
    out.descriptor = point(n);
    return out;
  }
  if (std::holds_alternative<CylinderBody>(space.body)) {
    const Eigen::Vector2d perp = d.head<2>();
    const double s = perp.norm();
    const double cz = d.z();
    out.value = s + std::abs(cz);
    if (s <= kGeneratorTol) {
      const Vec3 c(0, 0, cz > 0 ? 1.0 : -1.0);
      FaceDescriptor disk{FaceDescriptor::Kind::Disk, c, Vec3::UnitZ(), 1.0};
      out.points = circle_samples(c, Vec3::UnitZ(), 1.0);
      out.descriptor = disk;
    } else if (std::abs(cz) <= kGeneratorTol) {
      const Vec3 u(perp.x() / s, perp.y() / s, 0.0);
      out.points = {u + Vec3::UnitZ(), u - Vec3::UnitZ()};
      out.descriptor = FaceDescriptor{FaceDescriptor::Kind::Segment, u, Vec3::UnitZ(), 1.0};
    } else {
      const Vec3 p(perp.x() / s, perp.y() / s, cz > 0 ? 1.0 : -1.0);
      out.points = {p};
      out.descriptor = point(p);
    }
    return out;
  }
  if (std::holds_alternative<ConeBody>(space.body)) {
    // Along the rim direction u the section radius is r = sqrt((1 + z)/2);
    // maximize s r + cz (2 r^2 - 1) over r in [0, 1].
    const Eigen::Vector2d perp = d.head<2>();
    const double s = perp.norm();
    const double cz = d.z();
    if (s <= kGeneratorTol) {
      if (cz > 0) {
        const Vec3 c(0, 0, 1);
        out.value = cz;
        out.points = circle_samples(c, Vec3::UnitZ(), 1.0);
        out.descriptor = FaceDescriptor{FaceDescriptor::Kind::Disk, c, Vec3::UnitZ(), 1.0};
      } else {
        const Vec3 apex(0, 0, -1);
        out.value = -cz;
        out.points = {apex};
        out.descriptor = point(apex);
      }
      return out;
    }
    double r = 1.0;
    if (cz < 0) r = std::min(1.0, s / (-4.0 * cz));
    const Vec3 u(perp.x() / s, perp.y() / s, 0.0);
    const Vec3 p = r * u + Vec3(0, 0, 2.0 * r * r - 1.0);
    out.value = d.dot(p);
    out.points = {p};
    out.descriptor = point(p);
    return out;
  }
  if (const auto* poly = space.polytope()) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : poly->vertices) best = std::max(best, d.dot(v));
    out.value = best;
    for (const auto& v : poly->vertices) {
      if (d.dot(v) >= best - kFaceTol) out.points.push_back(v);
    }
    if (out.points.size() == 1) out.descriptor = point(out.points.front());
    return out;
  }
  const auto samples = boundary_samples(space, 20000);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : samples) best = std::max(best, d.dot(p));
  out.value = best;
  for (const auto& p : samples) {
    if (d.dot(p) >= best - kSampledFaceTol) out.points.push_back(p);
  }
  out.descriptor = FaceDescriptor{FaceDescriptor::Kind::Sampled, Vec3::Zero(), d.normalized(), 0.0};
  return out;
}

bool sampled_body(const StateSpace& space) {
  return std::holds_alternative<ConstraintProgram>(space.body);
}

// Candidate one-parameter subgroups: the generators of rotations about the
// body's continuous axes.
std::vector<Mat3> candidate_generators(const StateSpace& space) {
  const ContinuousAxes axes = symmetry::continuous_axes(space);
  std::vector<Mat3> gens;
  if (axes.all) {
    for (const auto& e : {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()}) gens.push_back(cross_matrix(e));
  } else {
    for (const auto& a : axes.axes) gens.push_back(cross_matrix(a.normalized()));
  }
  return gens;
}

// Half-turns about axes perpendicular to `normal` that could fix the
// measurement's weights: the coordinate axes and the in-plane projections of
// each weight together with their perpendiculars.
std::vector<Mat3> half_turn_candidates(const Vec3& normal, const Measurement& m) {
  const Vec3 n = normal.normalized();
  std::vector<Vec3> dirs = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  for (const auto& e : m.effects) {
    const Vec3 p = e.weight - n.dot(e.weight) * n;
    if (p.norm() > kGeneratorTol) {
      dirs.push_back(p.normalized());
      dirs.push_back(n.cross(p).normalized());
    }
  }
  std::vector<Mat3> out;
  for (const auto& a : dirs) {
    const Vec3 q = a - n.dot(a) * n;
    if (q.norm() > kGeneratorTol) out.push_back(rotation_about(q.normalized(), kPi));
  }
  return out;
}

std::vector<Mat3> mirror_candidates(const Measurement& m) {
  std::vector<Vec3> normals = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  for (const auto& e : m.effects) {
    for (const Vec3& k : {Vec3(Vec3::UnitX()), Vec3(Vec3::UnitY()), Vec3(Vec3::UnitZ())}) {
      const Vec3 n = e.weight.cross(k);
      if (n.norm() > kGeneratorTol) normals.push_back(n.normalized());
    }
  }
  std::vector<Mat3> out;
  for (const auto& n : normals) out.push_back(Mat3::Identity() - 2.0 * n * n.transpose());
  return out;
}

Effect combined_effect(const Measurement& m, const std::vector<size_t>& subset) {
  Effect sum{Vec3::Zero(), 0.0};
  for (size_t i : subset) {
    if (i >= m.size()) throw Error(ErrorKind::DimensionMismatch, "outcome index out of range");
    sum.weight += m.effects[i].weight;
    sum.bias += m.effects[i].bias;
  }
  return sum;
}

}  // namespace

double statistics_defect(const Measurement& m, const Mat3& t) {
  double worst = 0.0;
  for (const auto& e : m.effects) {
    worst = std::max(worst, (t.transpose() * e.weight - e.weight).cwiseAbs().maxCoeff());
  }
  return worst;
}

PhaseGroupResult phase_group(const StateSpace& space, const Measurement& m,
                             bool allow_reflections) {
  if (!space.symmetry && !space.restriction) {
    throw Error(ErrorKind::Unsupported,
                "space '" + space.name + "' has no transformation-group data");
  }
  std::vector<Mat3> candidates;
  FiniteGroup base = symmetry::finite_transformations(space);
  if (!allow_reflections) base = symmetry::rotation_subgroup(base);
  candidates = base.elements();
  if (space.symmetry && space.symmetry->perpendicular_half_turns && !space.restriction) {
    for (const auto& h : half_turn_candidates(*space.symmetry->perpendicular_half_turns, m)) {
      candidates.push_back(h);
    }
  }
  std::vector<Mat3> kept;
  for (const auto& t : candidates) {
    if (statistics_defect(m, t) <= kFiniteTol) kept.push_back(t);
  }
  if (allow_reflections && !space.restriction && base.order() == 1) {
    // Smooth bodies carry no finite group; one mirror represents the improper coset.
    for (const auto& mirror : mirror_candidates(m)) {
      if (statistics_defect(m, mirror) <= kFiniteTol && maps_into(space, mirror)) {
        const size_t n = kept.size();
        for (size_t i = 0; i < n; ++i) kept.push_back(mirror * kept[i]);
        break;
      }
    }
  }
  PhaseGroupResult result;
  result.finite = FiniteGroup(std::move(kept));

  // Null space of c -> (w_b^T sum_k c_k G_k)_b.
  const std::vector<Mat3> gens = space.restriction ? std::vector<Mat3>{} : candidate_generators(space);
  if (!gens.empty()) {
    Eigen::MatrixXd map(3 * static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(gens.size()));
    for (size_t b = 0; b < m.size(); ++b) {
      for (size_t k = 0; k < gens.size(); ++k) {
        map.block(3 * static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(k), 3, 1) =
            gens[k].transpose() * m.effects[b].weight;
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(map);
    lu.setThreshold(1e-12);
    const Eigen::MatrixXd kernel = lu.kernel();
    if (lu.dimensionOfKernel() > 0) {
      // Orthonormalize the kernel so the basis does not depend on pivoting.
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
      const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(kernel.rows(), kernel.cols());
      for (Eigen::Index c = 0; c < q.cols(); ++c) {
        Mat3 g = Mat3::Zero();
        for (size_t k = 0; k < gens.size(); ++k) g += q(static_cast<Eigen::Index>(k), c) * gens[k];
        g /= g.norm() / std::sqrt(2.0);
        for (Eigen::Index i = 0; i < 9; ++i) {
          if (std::abs(g.data()[i]) < 1e-15) g.data()[i] = 0.0;
        }
        result.continuous.push_back(g);
      }
    }
  }

  for (const auto& t : result.finite.elements()) {
    if (statistics_defect(m, t) > kFiniteTol) {
      throw Error(ErrorKind::InvalidBasis, "phase group element fails statistics check");
    }
  }
  for (const auto& g : result.continuous) {
    if (statistics_defect(m, g + Mat3::Identity()) > kGeneratorTol) {
      throw Error(ErrorKind::InvalidBasis, "phase group generator fails w^T G = 0");
    }
  }
  return result;
}

const char* to_string(FaceDescriptor::Kind k) {
  switch (k) {
    case FaceDescriptor::Kind::Point: return "point";
    case FaceDescriptor::Kind::Segment: return "segment";
    case FaceDescriptor::Kind::Disk: return "disk";
    case FaceDescriptor::Kind::Sampled: return "sampled";
    case FaceDescriptor::Kind::Whole: return "whole";
  }
  return "?";
}

Face face_of(const StateSpace& space, const Effect& effect, double level) {
  Face face;
  face.effect = effect;
  face.level = level;
  const bool sampled = sampled_body(space);
  const double tol = sampled ? kSampledFaceTol : kFaceTol;
  if (effect.weight.norm() <= kGeneratorTol) {
    if (std::abs(effect.bias - level) <= tol) {
      face.extreme_points = reference_points(space, 2000);
      face.descriptor = FaceDescriptor{FaceDescriptor::Kind::Whole, Vec3::Zero(), Vec3::UnitZ(), 0.0};
    }
    return face;
  }
  // level 1: maximize w.rho; level 0: minimize it.
  const double sign = level >= 0.5 ? 1.0 : -1.0;
  const Argmax am = support(space, sign * effect.weight);
  const double extreme = sign * am.value + effect.bias;
  if (std::abs(extreme - level) > tol) return face;
  for (const auto& p : am.points) {
    if (std::abs(effect.value(p) - level) <= tol && contains(space, p, 1e-9)) {
      face.extreme_points.push_back(p);
    }
  }
  if (!face.extreme_points.empty()) face.descriptor = am.descriptor;
  return face;
}

Face well_defined_states(const StateSpace& space, const Measurement& m, size_t outcome) {
  if (outcome >= m.size()) throw Error(ErrorKind::DimensionMismatch, "outcome index out of range");
  return face_of(space, m.effects[outcome], 1.0);
}

StationarityReport stationary_under(const StateSpace& space, const Vec3& h, const Face& face) {
  dynamics::HamiltonianObservable ham;
  ham.vector = h;
  const dynamics::EvolutionSpec spec = dynamics::allowed_times(space, ham);
  if (spec.mode == dynamics::Mode::None) {
    throw Error(ErrorKind::InadmissibleDynamics, "no admissible evolution for this Hamiltonian");
  }
  StationarityReport report;
  if (spec.trivial) return report;
  const Mat3 step = spec.mode == dynamics::Mode::Discrete ? rotation_about(spec.axis, spec.min_angle)
                                                          : cross_matrix(h);
  for (const auto& rho : face.extreme_points) {
    const Vec3 image = step * rho;
    const double moved = spec.mode == dynamics::Mode::Discrete ? (image - rho).norm() : image.norm();
    if (moved > kFaceTol) {
      report.all_stationary = false;
      report.moving_witness = rho;
      report.witness_image = image;
      break;
    }
  }
  return report;
}

LocalizationResult is_branch_localized(const Mat3& t, const StateSpace& space,
                                       const Measurement& m, const std::vector<size_t>& subset) {
  const Face zero_support = face_of(space, combined_effect(m, subset), 0.0);
  LocalizationResult result;
  if (zero_support.empty()) {
    result.vacuous = true;
    return result;
  }
  for (const auto& rho : zero_support.extreme_points) {
    if ((t * rho - rho).norm() > kFaceTol) {
      result.localized = false;
      result.witness = rho;
      break;
    }
  }
  return result;
}

double EnergyAssignment::energy(int label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw Error(ErrorKind::DimensionMismatch, "unknown level label");
  return energies[static_cast<size_t>(it - labels.begin())];
}

EnergyAssignment assign_energies_from_gaps(const std::vector<PeriodPair>& gaps) {
  if (gaps.empty()) throw Error(ErrorKind::DisconnectedGraph, "no level pairs supplied");
  std::set<int> label_set;
  for (const auto& g : gaps) {
    if (!std::isfinite(g.value)) throw Error(ErrorKind::NonFinite, "energy gap is not finite");
    if (g.i == g.j) throw Error(ErrorKind::InconsistentCycle, "pair relates a level to itself");
    label_set.insert(g.i);
    label_set.insert(g.j);
  }
  EnergyAssignment out;
  out.labels.assign(label_set.begin(), label_set.end());
  std::map<int, Eigen::Index> index;
  for (size_t k = 0; k < out.labels.size(); ++k) index[out.labels[k]] = static_cast<Eigen::Index>(k);

  // Connectivity of the level graph.
  std::vector<std::vector<Eigen::Index>> adj(out.labels.size());
  for (const auto& g : gaps) {
    adj[static_cast<size_t>(index[g.i])].push_back(index[g.j]);
    adj[static_cast<size_t>(index[g.j])].push_back(index[g.i]);
  }
  std::vector<bool> seen(out.labels.size(), false);
  std::queue<Eigen::Index> frontier;
  frontier.push(0);
  seen[0] = true;
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop();
    for (auto v : adj[static_cast<size_t>(u)]) {
      if (!seen[static_cast<size_t>(v)]) {
        seen[static_cast<size_t>(v)] = true;
        frontier.push(v);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error(ErrorKind::DisconnectedGraph, "level pairs do not connect every level");
  }

  const auto n = static_cast<Eigen::Index>(out.labels.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(gaps.size()), n - 1);
  Eigen::VectorXd b(static_cast<Eigen::Index>(gaps.size()));
  double max_gap = 0.0;
  for (size_t r = 0; r < gaps.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    const auto i = index[gaps[r].i];
    const auto j = index[gaps[r].j];
    if (j > 0) a(row, j - 1) += 1.0;
    if (i > 0) a(row, i - 1) -= 1.0;
    b(row) = gaps[r].value;
    max_gap = std::max(max_gap, std::abs(gaps[r].value));
  }
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  if (n > 1) e.tail(n - 1) = a.colPivHouseholderQr().solve(b);
  out.energies.assign(e.data(), e.data() + n);
  for (const auto& g : gaps) {
    const double r = e(index[g.j]) - e(index[g.i]) - g.value;
    out.residual = std::max(out.residual, std::abs(r));
  }
  if (out.residual > 1e-9 * max_gap) {
    throw Error(ErrorKind::InconsistentCycle,
                "energy differences are inconsistent around a cycle (residual " +
                    std::to_string(out.residual) + ")");
  }
  return out;
}

EnergyAssignment assign_energies(const std::vector<PeriodPair>& periods) {
  std::vector<PeriodPair> gaps = periods;
  for (auto& p : gaps) {
    if (!std::isfinite(p.value)) throw Error(ErrorKind::NonFinite, "period is not finite");
    if (p.value <= 0.0) throw Error(ErrorKind::NonpositivePeriod, "periods must be positive");
    p.value = 2.0 * kPi / p.value;
  }
  return assign_energies_from_gaps(gaps);
}

AliasReport alias_classes(double tau_step, const FiniteGroup& group, const Vec3& axis) {
  if (!(tau_step > 0.0) || !std::isfinite(tau_step)) {
    throw Error(ErrorKind::NonpositivePeriod, "time step must be positive");
  }
  AliasReport report;
  report.angles = symmetry::rotation_angles_about(group, axis.normalized());
  if (report.angles.empty()) report.angles.push_back(0.0);
  const size_t k = report.angles.size();
  const double quantum = 2.0 * kPi / (static_cast<double>(k) * tau_step);
  for (size_t m = 0; m < k; ++m) report.energies.push_back(static_cast<double>(m) * quantum);
  return report;
}

InvStarReport check_inv_star(const StateSpace& space, const Measurement& m,
                             const std::vector<double>& values, const Mat3& t, int samples,
                             std::uint64_t seed) {
  const Observable obs = observable_from_values(values, m);
  std::vector<Vec3> states = reference_points(space, 500);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) states.push_back(random_member(space, rng));

  InvStarReport report;
  for (const auto& rho : states) {
    report.expectation_drift =
        std::max(report.expectation_drift, std::abs(obs.weight.dot(t * rho - rho)));
  }
  report.inv_holds = report.expectation_drift <= 1e-9;
  report.statistics_defect = statistics_defect(m, t);
  report.inv_star_holds = report.statistics_defect <= kFiniteTol && maps_into(space, t);
  report.two_outcome_consistent = m.size() != 2 || !report.inv_holds || report.inv_star_holds;
  return report;
}

}  // namespace gpt::phase
