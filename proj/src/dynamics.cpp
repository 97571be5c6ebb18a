#include "gpt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "gpt/error.hpp"
#include "gpt/kernels.hpp"
#include "gpt/realrep.hpp"
#include "gpt/symmetry.hpp"

namespace gpt::dynamics {

namespace {

constexpr double kAlgebraicTol = 1e-12;
constexpr double kSampledTol = 1e-9;
constexpr double kQuanTol = 1e-8;
constexpr double kAgreementTol = 1e-10;
constexpr double kLatticeTol = 1e-9;

std::string vec_string(const Vec3& v) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << v.x() << ", " << v.y() << ", " << v.z() << ")";
  return os.str();
}

std::vector<Vec3> sample_members(const StateSpace& space, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec3> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(random_member(space, rng));
  return out;
}

std::vector<double> uniform_grid(double t_max, int points) {
  std::vector<double> grid(static_cast<size_t>(std::max(points, 2)));
  for (size_t i = 0; i < grid.size(); ++i) {
    grid[i] = t_max * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
  }
  return grid;
}

// Evolution maps sampled over the admissible times of `spec`.
std::vector<Mat3> admissible_maps(const EvolutionSpec& spec, const Mat3& a, bool recipe,
                                  const VerifyOptions& options) {
  std::vector<Mat3> maps;
  if (spec.mode == Mode::Discrete) {
    const int period = std::max(1, static_cast<int>(std::lround(2.0 * kPi / spec.min_angle)));
    for (int k = 0; k <= period; ++k) maps.push_back(rotation_about(spec.axis, k * spec.min_angle));
    return maps;
  }
  if (spec.mode == Mode::None) return {Mat3::Identity()};
  for (double t : uniform_grid(options.t_max, options.time_points)) {
    if (recipe) {
      Generator g;
      g.matrix = a;
      g.source = hamiltonian_from_generator(a).vector;
      maps.push_back(evolve_map(g, t).matrix);
    } else {
      maps.push_back((a * t).exp());
    }
  }
  return maps;
}

DesiderataEntry check_obs(const StateSpace& space, const HamiltonianObservable& h,
                          const std::vector<Vec3>& members) {
  DesiderataEntry e;
  e.name = "OBS";
  const Observable obs = h.decomposition ? *h.decomposition
                                         : canonical_decomposition(h.vector, h.offset);
  const MeasurementReport mr = validate_measurement(obs.measurement, space);
  double worst = 0.0;
  for (const auto& rho : members) {
    const double vector_form = obs.expectation(rho);
    const double expected = 0.5 * h.vector.dot(rho) + h.offset;
    const double d = std::max(std::abs(vector_form - expected),
                              std::abs(vector_form - obs.weighted_sum(rho)));
    if (d > worst) {
      worst = d;
      e.witness = rho;
    }
  }
  e.worst = std::max({worst, mr.worst_violation, mr.weight_sum_defect, mr.bias_sum_defect});
  const bool ok = mr.pass && worst <= kAgreementTol;
  e.status = ok ? Status::Pass : Status::Fail;
  std::ostringstream os;
  os << "decomposition W=" << vec_string(obs.weight) << " C=" << obs.bias
     << "; measurement " << (mr.pass ? "valid" : "invalid")
     << "; expectation agreement " << worst;
  e.detail = os.str();
  if (!mr.pass && mr.witness) e.witness = mr.witness;
  return e;
}

DesiderataEntry check_gen(const StateSpace& space, const HamiltonianObservable& h,
                          const EvolutionSpec& spec, const VerifyOptions& options) {
  DesiderataEntry e;
  e.name = "GEN";
  const Generator g = recipe_generator(h);
  const Vec3 back = hamiltonian_from_generator(g.matrix).vector;
  double worst = (back - h.vector).cwiseAbs().maxCoeff();
  bool ok = worst == 0.0;
  std::ostringstream os;
  if (options.generator_override) {
    const double dev = (*options.generator_override - g.matrix).cwiseAbs().maxCoeff();
    worst = std::max(worst, dev);
    if (dev > kAlgebraicTol) {
      ok = false;
      os << "generator differs from the recipe by " << dev << "; ";
    }
  }
  if (spec.trivial) {
    os << "trivial dynamics";
  } else if (spec.mode == Mode::None) {
    ok = false;
    os << "no admissible evolution about " << vec_string(spec.axis);
  } else if (spec.mode == Mode::Continuous) {
    const double period = 2.0 * kPi / h.vector.norm();
    for (int k = 1; k < 16; ++k) {
      const Mat3 m = evolve_map(g, k * period / 16.0).matrix;
      if (!maps_into(space, m, kSampledTol)) {
        ok = false;
        os << "exp(A t) leaves the body at t=" << k * period / 16.0 << "; ";
        break;
      }
    }
    os << "continuous evolution about " << vec_string(spec.axis);
  } else {
    const int period = std::max(1, static_cast<int>(std::lround(2.0 * kPi / spec.min_angle)));
    for (int k = 1; k <= period; ++k) {
      if (!maps_into(space, evolve_map(g, k * spec.min_time).matrix, kSampledTol)) {
        ok = false;
        os << "exp(A k tau*) leaves the body at k=" << k << "; ";
      }
    }
    // No finer lattice tau*/m is admissible.
    bool minimal = true;
    for (int m = 2; m <= 6; ++m) {
      if (maps_into(space, evolve_map(g, spec.min_time / m).matrix, kSampledTol)) minimal = false;
    }
    if (!minimal) {
      ok = false;
      os << "a refinement of tau* is also admissible; ";
    }
    os << "discrete evolution, tau*=" << spec.min_time;
  }
  e.worst = worst;
  e.status = ok ? Status::Pass : Status::Fail;
  e.detail = os.str();
  return e;
}

DesiderataEntry check_inv(const StateSpace& space, const HamiltonianObservable& h,
                          const EvolutionSpec& spec, const std::vector<Vec3>& members,
                          const VerifyOptions& options) {
  DesiderataEntry e;
  e.name = "INV";
  const bool recipe = !options.generator_override.has_value();
  const Mat3 a = recipe ? recipe_generator(h).matrix : *options.generator_override;
  const Eigen::RowVector3d hta = h.vector.transpose() * a;
  const double algebraic = hta.cwiseAbs().maxCoeff();

  EvolutionSpec effective = spec;
  if (!recipe && spec.mode != Mode::Continuous) {
    // A foreign generator has no lattice; sample it on the continuous grid.
    effective.mode = Mode::Continuous;
  }
  std::vector<Mat3> maps;
  if (recipe || effective.mode == Mode::Continuous) {
    maps = admissible_maps(effective, a, recipe, options);
  }
  if (options.allow_reflections) {
    for (const auto& r : energy_preserving_reflections(space, h.vector)) maps.push_back(r);
  }
  const double sampled = kernels::max_energy_drift(h.vector, maps, members);

  e.worst = std::max(algebraic, sampled);
  e.status = algebraic <= kAlgebraicTol && sampled <= kSampledTol ? Status::Pass : Status::Fail;
  e.witness = Vec3(hta.transpose());
  std::ostringstream os;
  os << "max|H^T A|=" << algebraic << "; max energy drift " << sampled << " over "
     << members.size() << " states x " << maps.size() << " maps";
  e.detail = os.str();
  return e;
}

DesiderataEntry check_quan(const StateSpace& space, const HamiltonianObservable& h,
                           const VerifyOptions& options) {
  DesiderataEntry e;
  e.name = "QUAN";
  if (!space.is_ball()) {
    e.status = Status::NotApplicable;
    e.detail = "only the ball is a quantum state space";
    return e;
  }
  const auto basis = realrep::gellmann_basis(2);
  const Eigen::VectorXd v = h.vector;
  const realrep::CMatrix hm = realrep::hamiltonian_matrix(h.offset, v, basis);
  const Mat3 a = options.generator_override ? *options.generator_override
                                            : recipe_generator(h).matrix;
  const auto grid = uniform_grid(options.t_max, options.time_points);
  std::vector<Mat3> maps;
  maps.reserve(grid.size());
  for (double t : grid) maps.push_back((a * t).exp());
  if (!options.generator_override) {
    const Generator g = recipe_generator(h);
    for (size_t i = 0; i < grid.size(); ++i) maps[i] = evolve_map(g, grid[i]).matrix;
  }

  const auto members = sample_members(space, options.samples, options.seed + 3);
  const auto n = static_cast<long>(members.size());
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(dynamic)
  for (long s = 0; s < n; ++s) {
    const Eigen::VectorXd u0 = members[static_cast<size_t>(s)];
    const realrep::CMatrix rho0 = realrep::density_from_bloch(u0, basis);
    for (size_t i = 0; i < grid.size(); ++i) {
      const Vec3 recipe_state = maps[i] * members[static_cast<size_t>(s)];
      const Eigen::VectorXd quantum =
          realrep::bloch_from_density(realrep::von_neumann_evolve(rho0, hm, grid[i]), basis);
      worst = std::max(worst, (recipe_state - Vec3(quantum)).norm());
    }
  }
  e.worst = worst;
  e.status = worst <= kQuanTol ? Status::Pass : Status::Fail;
  std::ostringstream os;
  os << "sup |u_recipe - u_vonNeumann| = " << worst << " over t in [0, " << options.t_max << "]";
  e.detail = os.str();
  return e;
}

}  // namespace

Observable canonical_decomposition(const Vec3& h, double offset) {
  const double norm = h.norm();
  const Vec3 axis = norm > 0.0 ? Vec3(h / norm) : Vec3::UnitZ();
  return observable_from_values({offset + 0.5 * norm, offset - 0.5 * norm}, axis_measurement(axis));
}

const std::array<Mat3, 3>& so3_basis() {
  static const std::array<Mat3, 3> basis = [] {
    Mat3 lx, ly, lz;
    lx << 0, 0, 0,
          0, 0, -1,
          0, 1, 0;
    ly << 0, 0, 1,
          0, 0, 0,
          -1, 0, 0;
    lz << 0, -1, 0,
          1, 0, 0,
          0, 0, 0;
    return std::array<Mat3, 3>{lx, ly, lz};
  }();
  return basis;
}

Generator recipe_generator(const Vec3& h) {
  const auto& l = so3_basis();
  Generator g;
  g.matrix = h.x() * l[0] + h.y() * l[1] + h.z() * l[2];
  g.source = h;
  return g;
}

Generator recipe_generator(const HamiltonianObservable& h) { return recipe_generator(h.vector); }

HamiltonianObservable hamiltonian_from_generator(const Mat3& a) {
  if ((a + a.transpose()).cwiseAbs().maxCoeff() > kAlgebraicTol) {
    throw Error(ErrorKind::NotAntisymmetric, "generator is not antisymmetric");
  }
  HamiltonianObservable h;
  h.vector = Vec3(a(2, 1), a(0, 2), a(1, 0));
  return h;
}

OrthogonalMap evolve_map(const Generator& a, double t) {
  const double rate = a.source.norm();
  if (rate == 0.0) return OrthogonalMap{};
  OrthogonalMap m;
  m.matrix = rotation_about(a.source / rate, rate * t);
  m.det = 1.0;
  return m;
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Continuous: return "continuous";
    case Mode::Discrete: return "discrete";
    case Mode::None: return "none";
  }
  return "?";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::NotApplicable: return "not-applicable";
  }
  return "?";
}

std::string EvolutionSpec::allowed_times() const {
  switch (mode) {
    case Mode::Continuous: return "all t";
    case Mode::Discrete: {
      std::ostringstream os;
      os.precision(12);
      os << "n*" << min_time << ", n integer";
      return os.str();
    }
    case Mode::None: return "t = 0 only";
  }
  return "";
}

EvolutionSpec allowed_times(const StateSpace& space, const HamiltonianObservable& h) {
  EvolutionSpec spec;
  const double rate = h.vector.norm();
  if (rate == 0.0) {
    spec.mode = Mode::Continuous;
    spec.trivial = true;
    return spec;
  }
  spec.axis = h.vector / rate;
  if (symmetry::axis_is_continuous(space, spec.axis)) {
    spec.mode = Mode::Continuous;
    return spec;
  }
  if (const auto angle = symmetry::minimal_discrete_angle(space, spec.axis)) {
    spec.mode = Mode::Discrete;
    spec.min_angle = *angle;
    spec.min_time = *angle / rate;
    return spec;
  }
  spec.mode = Mode::None;
  return spec;
}

Trajectory trajectory(const StateSpace& space, const HamiltonianObservable& h,
                      const StateVector& rho0, const std::vector<double>& grid) {
  if (!contains(space, rho0, kSampledTol)) {
    throw Error(ErrorKind::StateOutsideSpace, "initial state " + vec_string(rho0) +
                                                  " is outside '" + space.name + "'");
  }
  for (size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] < grid[i - 1]) throw Error(ErrorKind::NonMonotoneGrid, "time grid must be increasing");
  }
  const EvolutionSpec spec = allowed_times(space, h);
  const Generator g = recipe_generator(h);
  Trajectory traj;
  traj.times = grid;
  traj.states.reserve(grid.size());
  traj.energies.reserve(grid.size());
  for (double t : grid) {
    Mat3 m;
    if (spec.mode == Mode::None) {
      if (std::abs(t) > 1e-12) {
        throw Error(ErrorKind::InadmissibleDynamics,
                    "no admissible evolution about " + vec_string(spec.axis) + " in '" +
                        space.name + "'");
      }
      m = Mat3::Identity();
    } else if (spec.mode == Mode::Discrete) {
      const double k = std::round(t / spec.min_time);
      if (std::abs(t - k * spec.min_time) > kLatticeTol * std::max(1.0, std::abs(t))) {
        std::ostringstream os;
        os.precision(12);
        os << "time " << t << " is not an integer multiple of tau*=" << spec.min_time;
        throw Error(ErrorKind::InvalidTime, os.str());
      }
      m = rotation_about(spec.axis, k * spec.min_angle);
    } else {
      m = evolve_map(g, t).matrix;
    }
    const Vec3 rho = m * rho0;
    traj.states.push_back(rho);
    traj.energies.push_back(h.energy(rho));
  }
  return traj;
}

std::vector<Mat3> energy_preserving_reflections(const StateSpace& space, const Vec3& h) {
  std::vector<Mat3> out;
  for (const auto& m : symmetry::finite_transformations(space).elements()) {
    if (m.determinant() < 0.0 && (m.transpose() * h - h).cwiseAbs().maxCoeff() <= kSampledTol) {
      out.push_back(m);
    }
  }
  return out;
}

const DesiderataEntry& DesiderataReport::get(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return e;
  }
  throw Error(ErrorKind::Parse, "unknown desideratum '" + name + "'");
}

bool DesiderataReport::all_pass(const std::vector<std::string>& names) const {
  return std::all_of(names.begin(), names.end(),
                     [&](const std::string& n) { return get(n).status != Status::Fail; });
}

DesiderataReport verify_desiderata(const StateSpace& space, const HamiltonianObservable& h,
                                   const VerifyOptions& options) {
  const auto members = sample_members(space, options.samples, options.seed);
  const EvolutionSpec spec = allowed_times(space, h);
  DesiderataReport report;
  report.entries[0] = check_obs(space, h, std::vector<Vec3>(members.begin(),
                                                            members.begin() + std::min<long>(100, static_cast<long>(members.size()))));
  report.entries[1] = check_gen(space, h, spec, options);
  report.entries[2] = check_inv(space, h, spec, members, options);
  report.entries[3] = check_quan(space, h, options);
  return report;
}

DofReport generator_dof_report(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidDimension, "state dimension must be >= 2");
  DofReport r;
  r.generator_dof = n * (n - 1) / 2;
  r.observable_dof = n;
  r.mismatch = r.generator_dof - r.observable_dof;
  return r;
}

}  // namespace gpt::dynamics
