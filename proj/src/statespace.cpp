#include "gpt/statespace.hpp"

#include <algorithm>
#include <cmath>

#include "gpt/error.hpp"
#include "gpt/symmetry.hpp"

namespace gpt {

namespace {

constexpr double kSumRuleTol = 1e-12;
constexpr double kScanTol = 1e-9;
constexpr int kValidationSamples = 10000;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool constraints_hold(const std::vector<Constraint>& cs, const StateVector& rho, double tol) {
  return std::all_of(cs.begin(), cs.end(),
                     [&](const Constraint& c) { return c.evaluate(rho) <= tol; });
}

std::vector<Measurement> canonical_measurements() {
  return {axis_measurement(Vec3::UnitX()), axis_measurement(Vec3::UnitY()),
          axis_measurement(Vec3::UnitZ())};
}

SymmetryMeta smooth_meta(ContinuousAxes axes) {
  SymmetryMeta meta;
  meta.continuous = std::move(axes);
  return meta;
}

// Distance from the origin to the boundary along unit direction d.
double radial_extent(const StateSpace& space, const Vec3& d, double r_max) {
  if (space.is_ball()) return 1.0;
  if (const auto* poly = space.polytope()) {
    double r = r_max;
    for (const auto& f : poly->facets) {
      const double nd = f.normal.dot(d);
      if (nd > 1e-15) r = std::min(r, f.offset / nd);
    }
    return r;
  }
  double lo = 0.0, hi = r_max;
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (contains(space, mid * d, 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

Vec3 fibonacci_direction(int i, int count) {
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  const double z = 1.0 - 2.0 * (i + 0.5) / count;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = golden * i;
  return {r * std::cos(phi), r * std::sin(phi), z};
}

bool is_cone_like(const StateSpace& space) {
  if (std::holds_alternative<ConeBody>(space.body)) return true;
  if (const auto* cp = std::get_if<ConstraintProgram>(&space.body)) {
    return std::any_of(cp->constraints.begin(), cp->constraints.end(), [](const Constraint& c) {
      return c.kind == Constraint::Kind::Paraboloid;
    });
  }
  return false;
}

}  // namespace

double effect_value(const Effect& e, const StateVector& rho) { return e.value(rho); }

Measurement axis_measurement(const Vec3& axis) {
  Measurement m;
  m.effects = {Effect{0.5 * axis, 0.5}, Effect{-0.5 * axis, 0.5}};
  m.labels = {"+", "-"};
  return m;
}

double Observable::weighted_sum(const StateVector& rho) const {
  double total = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    total += values[i] * measurement.effects[i].value(rho);
  }
  return total;
}

Observable observable_from_values(const std::vector<double>& values, const Measurement& m) {
  if (values.size() != m.effects.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one value per measurement outcome is required");
  }
  Observable obs;
  obs.values = values;
  obs.measurement = m;
  for (size_t i = 0; i < values.size(); ++i) {
    obs.weight += values[i] * m.effects[i].weight;
    obs.bias += values[i] * m.effects[i].bias;
  }
  return obs;
}

double Constraint::evaluate(const StateVector& rho) const {
  switch (kind) {
    case Kind::Ball:
      return rho.squaredNorm() - radius * radius;
    case Kind::Disk: {
      const Vec3 perp = rho - axis.dot(rho) * axis;
      return perp.squaredNorm() - radius * radius;
    }
    case Kind::Slab: {
      const double s = axis.dot(rho);
      return std::max(lower - s, s - upper);
    }
    case Kind::Paraboloid: {
      const double s = axis.dot(rho);
      const Vec3 perp = rho - s * axis;
      return perp.squaredNorm() - (offset + slope * s);
    }
    case Kind::Halfspace:
      return axis.dot(rho) - upper;
  }
  return 0.0;
}

std::vector<Facet> hull_facets(const std::vector<Vec3>& points) {
  const size_t n = points.size();
  if (n < 4) throw Error(ErrorKind::DegenerateVertices, "a 3D polytope needs at least 4 vertices");
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(n);
  Eigen::MatrixXd centered(3, n);
  for (size_t i = 0; i < n; ++i) centered.col(static_cast<Eigen::Index>(i)) = points[i] - centroid;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(centered);
  lu.setThreshold(1e-9);
  if (lu.rank() < 3) throw Error(ErrorKind::DegenerateVertices, "vertices do not span R^3");

  constexpr double eps = 1e-9;
  std::vector<Facet> facets;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        Vec3 normal = (points[j] - points[i]).cross(points[k] - points[i]);
        if (normal.norm() < 1e-12) continue;
        normal.normalize();
        const double offset = normal.dot(points[i]);
        bool below = true, above = true;
        for (const auto& p : points) {
          const double s = normal.dot(p) - offset;
          below = below && s <= eps;
          above = above && s >= -eps;
        }
        if (!below && !above) continue;
        const Facet f = below ? Facet{normal, offset} : Facet{-normal, -offset};
        const bool seen = std::any_of(facets.begin(), facets.end(), [&](const Facet& g) {
          return (g.normal - f.normal).norm() < 1e-9 && std::abs(g.offset - f.offset) < 1e-9;
        });
        if (!seen) facets.push_back(f);
      }
  return facets;
}

const std::vector<Theory>& all_theories() {
  static const std::vector<Theory> all = {Theory::Ball, Theory::Cylinder, Theory::Cone,
                                          Theory::Octahedron, Theory::Cube, Theory::Spekkens};
  return all;
}

const char* theory_name(Theory t) {
  switch (t) {
    case Theory::Ball: return "ball";
    case Theory::Cylinder: return "cylinder";
    case Theory::Cone: return "cone";
    case Theory::Octahedron: return "octahedron";
    case Theory::Cube: return "cube";
    case Theory::Spekkens: return "spekkens";
  }
  return "?";
}

std::optional<Theory> theory_from_name(const std::string& name) {
  for (Theory t : all_theories()) {
    if (name == theory_name(t)) return t;
  }
  return std::nullopt;
}

StateSpace polytope_space(std::string name, std::vector<Vec3> vertices) {
  StateSpace space;
  space.name = std::move(name);
  PolytopeBody body;
  body.facets = hull_facets(vertices);
  body.vertices = std::move(vertices);
  SymmetryMeta meta;
  meta.finite = std::make_shared<const FiniteGroup>(symmetry::polytope_symmetries(body.vertices));
  space.body = std::move(body);
  space.symmetry = std::move(meta);
  space.measurements = canonical_measurements();
  return space;
}

StateSpace constraint_space(std::string name, std::vector<Constraint> constraints,
                            std::optional<ContinuousAxes> axes) {
  StateSpace space;
  space.name = std::move(name);
  space.body = ConstraintProgram{std::move(constraints)};
  if (axes) space.symmetry = smooth_meta(std::move(*axes));
  space.measurements = canonical_measurements();
  if (!contains(space, Vec3::Zero(), 0.0)) {
    throw Error(ErrorKind::Unsupported, "constraint bodies must contain the origin");
  }
  return space;
}

StateSpace builtin_theory(Theory t) {
  switch (t) {
    case Theory::Ball: {
      StateSpace s;
      s.name = "ball";
      s.body = BallBody{};
      s.symmetry = smooth_meta(ContinuousAxes{true, {}});
      s.measurements = canonical_measurements();
      return s;
    }
    case Theory::Cylinder: {
      StateSpace s;
      s.name = "cylinder";
      s.body = CylinderBody{};
      s.symmetry = smooth_meta(ContinuousAxes{false, {Vec3::UnitZ()}});
      s.symmetry->perpendicular_half_turns = Vec3::UnitZ();
      s.measurements = canonical_measurements();
      return s;
    }
    case Theory::Cone: {
      StateSpace s;
      s.name = "cone";
      s.body = ConeBody{};
      s.symmetry = smooth_meta(ContinuousAxes{false, {Vec3::UnitZ()}});
      s.measurements = canonical_measurements();
      return s;
    }
    case Theory::Octahedron:
    case Theory::Spekkens: {
      std::vector<Vec3> v = {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0),
                             Vec3(0, -1, 0), Vec3(0, 0, 1), Vec3(0, 0, -1)};
      StateSpace s = polytope_space(theory_name(t), std::move(v));
      if (t == Theory::Spekkens) {
        s.restriction = std::make_shared<const FiniteGroup>(symmetry::spekkens_group());
      }
      return s;
    }
    case Theory::Cube: {
      std::vector<Vec3> v;
      for (double sx : {1.0, -1.0})
        for (double sy : {1.0, -1.0})
          for (double sz : {1.0, -1.0}) v.emplace_back(sx, sy, sz);
      return polytope_space("cube", std::move(v));
    }
  }
  throw Error(ErrorKind::UnknownTheory, "unknown theory");
}

StateSpace builtin_theory(const std::string& name) {
  const auto t = theory_from_name(name);
  if (!t) throw Error(ErrorKind::UnknownTheory, "unknown theory '" + name + "'");
  return builtin_theory(*t);
}

bool contains(const StateSpace& space, const StateVector& rho, double tol) {
  return std::visit(
      overloaded{
          [&](const BallBody&) { return rho.norm() <= 1.0 + tol; },
          [&](const CylinderBody&) {
            return rho.head<2>().squaredNorm() <= 1.0 + tol && std::abs(rho.z()) <= 1.0 + tol;
          },
          [&](const ConeBody&) {
            return rho.head<2>().squaredNorm() <= 0.5 * (1.0 + rho.z()) + tol &&
                   std::abs(rho.z()) <= 1.0 + tol;
          },
          [&](const PolytopeBody& p) {
            return std::all_of(p.facets.begin(), p.facets.end(), [&](const Facet& f) {
              return f.normal.dot(rho) <= f.offset + tol;
            });
          },
          [&](const ConstraintProgram& cp) { return constraints_hold(cp.constraints, rho, tol); },
      },
      space.body);
}

double bounding_radius(const StateSpace& space) {
  return std::visit(
      overloaded{
          [](const BallBody&) { return 1.0; },
          [](const CylinderBody&) { return std::sqrt(2.0); },
          [](const ConeBody&) { return std::sqrt(2.0); },
          [](const PolytopeBody& p) {
            double r = 0.0;
            for (const auto& v : p.vertices) r = std::max(r, v.norm());
            return r;
          },
          [&](const ConstraintProgram&) {
            double r_max = 1.0;
            while (r_max < 1e6) {
              bool escaped = true;
              for (int i = 0; i < 512 && escaped; ++i) {
                escaped = !contains(space, r_max * fibonacci_direction(i, 512), 0.0);
              }
              if (escaped) break;
              r_max *= 2.0;
            }
            if (r_max >= 1e6) throw Error(ErrorKind::Unsupported, "constraint body is unbounded");
            double r = 0.0;
            for (int i = 0; i < 2000; ++i) {
              r = std::max(r, radial_extent(space, fibonacci_direction(i, 2000), r_max));
            }
            return 1.05 * r;
          },
      },
      space.body);
}

std::vector<Vec3> boundary_samples(const StateSpace& space, int count) {
  const double r_max = 2.0 * bounding_radius(space);
  std::vector<Vec3> out;
  out.reserve(static_cast<size_t>(count) + 1);
  for (int i = 0; i < count; ++i) {
    const Vec3 d = fibonacci_direction(i, count);
    out.push_back(radial_extent(space, d, r_max) * d);
  }
  if (is_cone_like(space)) {
    // The apex is a single point that radial sampling only approaches.
    const Vec3 down = -Vec3::UnitZ();
    out.push_back(radial_extent(space, down, r_max) * down);
  }
  return out;
}

std::vector<Vec3> reference_points(const StateSpace& space, int sample_count) {
  if (const auto* poly = space.polytope()) return poly->vertices;
  return boundary_samples(space, sample_count);
}

StateVector random_member(const StateSpace& space, std::mt19937_64& rng) {
  const double r = bounding_radius(space);
  std::uniform_real_distribution<double> u(-r, r);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    const Vec3 p(u(rng), u(rng), u(rng));
    if (contains(space, p, 0.0)) return p;
  }
  throw Error(ErrorKind::Unsupported, "rejection sampling found no member state");
}

bool maps_into(const StateSpace& space, const Mat3& m, double tol) {
  const auto pts = reference_points(space);
  return std::all_of(pts.begin(), pts.end(),
                     [&](const Vec3& p) { return contains(space, m * p, tol); });
}

MeasurementReport validate_measurement(const Measurement& m, const StateSpace& space) {
  MeasurementReport report;
  Vec3 w_sum = Vec3::Zero();
  double c_sum = 0.0;
  for (const auto& e : m.effects) {
    w_sum += e.weight;
    c_sum += e.bias;
  }
  report.weight_sum_defect = w_sum.cwiseAbs().maxCoeff();
  report.bias_sum_defect = std::abs(c_sum - 1.0);

  const auto points = space.polytope() ? space.polytope()->vertices
                                       : boundary_samples(space, kValidationSamples);
  for (const auto& p : points) {
    for (const auto& e : m.effects) {
      const double v = e.value(p);
      const double violation = std::max(-v, v - 1.0);
      if (violation > report.worst_violation) {
        report.worst_violation = violation;
        report.witness = p;
      }
    }
  }
  report.pass = report.weight_sum_defect <= kSumRuleTol && report.bias_sum_defect <= kSumRuleTol &&
                report.worst_violation <= kScanTol;
  return report;
}

}  // namespace gpt
