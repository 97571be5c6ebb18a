#pragma once

// Reversible-transformation machinery: exact symmetry groups of polytopes,
// continuous-axis metadata for smooth bodies and the Spekkens ontic
// permutation group.

#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "gpt/group.hpp"
#include "gpt/statespace.hpp"

namespace gpt::symmetry {

/// All orthogonal maps permuting the vertex set. Throws CentroidNotAtOrigin
/// when the vertex mean is off the origin and DegenerateVertices when the
/// vertices do not span R^3.
FiniteGroup polytope_symmetries(const std::vector<Vec3>& vertices);

/// Single-threaded reference for polytope_symmetries.
FiniteGroup polytope_symmetries_serial(const std::vector<Vec3>& vertices);

FiniteGroup rotation_subgroup(const FiniteGroup& g);

/// Epistemic pair {a,b} of the four ontic states, mapped to an octahedron vertex.
Vec3 spekkens_vertex(int a, int b);

/// Orthogonal map induced on the octahedron by a permutation of {1,2,3,4}
/// (perm[i] is the image of ontic state i + 1).
Mat3 spekkens_induced_map(const std::vector<int>& perm);

FiniteGroup spekkens_group();

struct RotationInfo {
  std::optional<Vec3> axis;  // none for the identity
  double angle = 0.0;        // [0, pi]
};

struct ReflectionInfo {
  Vec3 normal;                // eigenvector for eigenvalue -1
  double rotation_angle = 0;  // M = R(normal, angle) * (1 - 2 n n^T); 0 for a pure mirror
};

using AxisAngle = std::variant<RotationInfo, ReflectionInfo>;

AxisAngle axis_angle(const Mat3& m);

/// Signed rotation angle in [0, 2 pi) of m about `axis`, if m is a rotation
/// whose axis is parallel to `axis` (or m is the identity).
std::optional<double> angle_about(const Mat3& m, const Vec3& axis, double tol = 1e-9);

/// Continuous axes from the body's metadata. Throws Unsupported when a
/// custom body carries none.
ContinuousAxes continuous_axes(const StateSpace& space);

struct AxisCrossCheck {
  bool ok = true;
  int trials = 0;
  int failures = 0;
};

/// For each continuous axis (random axes when all are allowed), applies
/// `angles` random rotations to `states` random members and checks they stay
/// inside within 1e-9.
AxisCrossCheck cross_check_axes(const StateSpace& space, std::mt19937_64& rng,
                                int angles = 100, int states = 100);

/// The finite set of reversible transformations used for discrete dynamics:
/// the restriction group when present, else the body's exact finite group,
/// else the trivial group.
FiniteGroup finite_transformations(const StateSpace& space);

bool axis_is_continuous(const StateSpace& space, const Vec3& unit_axis, double tol = 1e-9);

/// Smallest positive rotation angle about `unit_axis` admitted by the
/// theory's finite transformations (half-turn families included); nullopt when
/// only the identity fixes that axis.
std::optional<double> minimal_discrete_angle(const StateSpace& space, const Vec3& unit_axis,
                                             double tol = 1e-9);

/// Distinct rotation angles in [0, 2 pi) about `unit_axis` found in `group`.
std::vector<double> rotation_angles_about(const FiniteGroup& group, const Vec3& unit_axis,
                                          double tol = 1e-9);

struct AxisCount {
  int fold = 0;  // cyclic order of the axis subgroup
  Vec3 axis;
};

/// Rotation axes of a group (up to sign) with their cyclic orders.
std::vector<AxisCount> rotation_axes(const FiniteGroup& g, double tol = 1e-9);

}  // namespace gpt::symmetry
