#pragma once

// Real-vector GPT primitives on the normalized slice: states, affine
// effects, measurements, observables, and convex state-space bodies.

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "gpt/group.hpp"
#include "gpt/types.hpp"

namespace gpt {

using StateVector = Vec3;

/// Affine functional rho -> w.rho + c.
struct Effect {
  Vec3 weight = Vec3::Zero();
  double bias = 0.0;

  double value(const StateVector& rho) const { return weight.dot(rho) + bias; }
  static Effect unit() { return {Vec3::Zero(), 1.0}; }
};

double effect_value(const Effect& e, const StateVector& rho);

struct Measurement {
  std::vector<Effect> effects;
  std::vector<std::string> labels;

  size_t size() const { return effects.size(); }
};

/// Two-outcome measurement along `axis` with effects (+axis/2, 1/2) and
/// (-axis/2, 1/2), labelled "+" and "-".
Measurement axis_measurement(const Vec3& axis);

struct Observable {
  std::vector<double> values;
  Measurement measurement;
  Vec3 weight = Vec3::Zero();  // W = sum x_i w_i
  double bias = 0.0;           // C = sum x_i c_i

  double expectation(const StateVector& rho) const { return weight.dot(rho) + bias; }
  /// sum_i x_i p_i(rho), the route that does not use the vector form.
  double weighted_sum(const StateVector& rho) const;
};

Observable observable_from_values(const std::vector<double>& values, const Measurement& m);

// ---------------------------------------------------------------------------
// Bodies

struct Facet {
  Vec3 normal;    // unit outward normal
  double offset;  // normal . x <= offset
};

struct BallBody {};
struct CylinderBody {};  // x^2 + y^2 <= 1, |z| <= 1
struct ConeBody {};      // x^2 + y^2 <= (1 + z)/2, |z| <= 1

struct PolytopeBody {
  std::vector<Vec3> vertices;
  std::vector<Facet> facets;
};

struct Constraint {
  enum class Kind { Ball, Disk, Slab, Paraboloid, Halfspace };
  Kind kind = Kind::Ball;
  Vec3 axis = Vec3::UnitZ();  // disk/slab/paraboloid axis, halfspace normal
  double radius = 1.0;        // ball, disk
  double lower = -1.0;        // slab
  double upper = 1.0;         // slab; halfspace offset
  double offset = 0.5;        // paraboloid: |x_perp|^2 <= offset + slope * axis.x
  double slope = 0.5;

  /// <= 0 inside.
  double evaluate(const StateVector& rho) const;
  bool operator==(const Constraint&) const = default;
};

struct ConstraintProgram {
  std::vector<Constraint> constraints;
};

using Body = std::variant<BallBody, CylinderBody, ConeBody, PolytopeBody, ConstraintProgram>;

/// Continuous rotation axes of a body. `all` marks full SO(3) symmetry.
struct ContinuousAxes {
  bool all = false;
  std::vector<Vec3> axes;
};

struct SymmetryMeta {
  ContinuousAxes continuous;
  /// Half-turns about every axis perpendicular to this one are symmetries
  /// (the cylinder flips).
  std::optional<Vec3> perpendicular_half_turns;
  /// Exact finite group of a polytope body, or nullptr.
  std::shared_ptr<const FiniteGroup> finite;
};

struct StateSpace {
  std::string name;
  Body body;
  std::optional<SymmetryMeta> symmetry;
  /// Subgroup that reversible transformations must belong to (Spekkens).
  std::shared_ptr<const FiniteGroup> restriction;
  /// Canonical x, y, z measurements.
  std::vector<Measurement> measurements;

  int dimension() const { return 3; }
  bool is_ball() const { return std::holds_alternative<BallBody>(body); }
  const PolytopeBody* polytope() const { return std::get_if<PolytopeBody>(&body); }
};

enum class Theory { Ball, Cylinder, Cone, Octahedron, Cube, Spekkens };

std::optional<Theory> theory_from_name(const std::string& name);
const char* theory_name(Theory t);
const std::vector<Theory>& all_theories();

StateSpace builtin_theory(Theory t);
/// Throws UnknownTheory.
StateSpace builtin_theory(const std::string& name);

/// Polytope from a vertex list; facets and the symmetry group are computed.
StateSpace polytope_space(std::string name, std::vector<Vec3> vertices);
StateSpace constraint_space(std::string name, std::vector<Constraint> constraints,
                            std::optional<ContinuousAxes> axes);

/// Facets of the convex hull of a full-dimensional 3D point set.
std::vector<Facet> hull_facets(const std::vector<Vec3>& points);

bool contains(const StateSpace& space, const StateVector& rho, double tol = 1e-9);

/// Radius of a ball about the origin enclosing the body.
double bounding_radius(const StateSpace& space);

/// Deterministic boundary points: Fibonacci directions pushed radially onto
/// the boundary (plus the cone apex for cone-like bodies).
std::vector<Vec3> boundary_samples(const StateSpace& space, int count);

/// Vertices for polytopes, `sample_count` boundary samples otherwise. A linear
/// map preserves the body iff it maps these into it (exactly for polytopes).
std::vector<Vec3> reference_points(const StateSpace& space, int sample_count = 2000);

/// Uniform member state by rejection sampling.
StateVector random_member(const StateSpace& space, std::mt19937_64& rng);

/// True iff M maps every reference point into the body within tol.
bool maps_into(const StateSpace& space, const Mat3& m, double tol = 1e-9);

struct MeasurementReport {
  bool pass = false;
  double weight_sum_defect = 0.0;  // |sum w|
  double bias_sum_defect = 0.0;    // |sum c - 1|
  double worst_violation = 0.0;    // how far an effect leaves [0, 1]
  std::optional<Vec3> witness;     // state where the worst violation occurs
};

/// Sum rules exactly, then 0 <= e <= 1 on all vertices (polytopes) or on
/// 10^4 boundary samples (smooth bodies) with tolerance 1e-9.
MeasurementReport validate_measurement(const Measurement& m, const StateSpace& space);

}  // namespace gpt
