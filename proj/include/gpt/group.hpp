#pragma once

#include <optional>
#include <vector>

#include "gpt/types.hpp"

namespace gpt {

struct OrthogonalMap {
  Mat3 matrix = Mat3::Identity();
  double det = 1.0;

  OrthogonalMap() = default;
  /// Throws NotAntisymmetric-style InvalidBasis error if M^T M deviates
  /// from the identity by more than 1e-10.
  explicit OrthogonalMap(const Mat3& m);

  bool is_rotation() const { return det > 0.0; }
  Vec3 apply(const Vec3& v) const { return matrix * v; }
};

double orthogonality_defect(const Mat3& m);

struct GroupCheck {
  bool has_identity = false;
  bool closed = false;
  bool has_inverses = false;
  double worst_orthogonality = 0.0;
  bool ok() const { return has_identity && closed && has_inverses; }
};

/// A finite set of orthogonal 3x3 matrices, kept in canonical order
/// (lexicographic on the entries) so results do not depend on how the
/// elements were discovered.
class FiniteGroup {
 public:
  FiniteGroup() = default;
  explicit FiniteGroup(std::vector<Mat3> elements);

  static FiniteGroup trivial();

  size_t order() const { return elements_.size(); }
  const std::vector<Mat3>& elements() const { return elements_; }
  const Mat3& operator[](size_t i) const { return elements_[i]; }

  std::optional<size_t> find(const Mat3& m, double tol = 1e-9) const;
  bool contains(const Mat3& m, double tol = 1e-9) const { return find(m, tol).has_value(); }

  GroupCheck verify(double tol = 1e-9) const;

 private:
  std::vector<Mat3> elements_;
};

/// Lexicographic ordering on matrix entries with a tolerance; ties within
/// tol compare equal.
bool canonical_less(const Mat3& a, const Mat3& b, double tol = 1e-9);

/// Rodrigues rotation about a unit axis.
Mat3 rotation_about(const Vec3& axis, double angle);

/// Cross-product matrix [v]x so that [v]x w = v x w.
Mat3 cross_matrix(const Vec3& v);

}  // namespace gpt
