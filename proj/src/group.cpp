#include "gpt/group.hpp"

#include <algorithm>
#include <cmath>

#include "gpt/error.hpp"

namespace gpt {

double orthogonality_defect(const Mat3& m) {
  return (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
}

OrthogonalMap::OrthogonalMap(const Mat3& m) : matrix(m), det(m.determinant()) {
  if (orthogonality_defect(m) > 1e-10 || std::abs(std::abs(det) - 1.0) > 1e-10) {
    throw Error(ErrorKind::InvalidBasis, "matrix is not orthogonal");
  }
  det = det > 0.0 ? 1.0 : -1.0;
}

bool canonical_less(const Mat3& a, const Mat3& b, double tol) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double d = a(i, j) - b(i, j);
      if (d < -tol) return true;
      if (d > tol) return false;
    }
  return false;
}

FiniteGroup::FiniteGroup(std::vector<Mat3> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end(),
            [](const Mat3& a, const Mat3& b) { return canonical_less(a, b); });
  elements_.erase(std::unique(elements_.begin(), elements_.end(),
                              [](const Mat3& a, const Mat3& b) {
                                return (a - b).cwiseAbs().maxCoeff() <= 1e-9;
                              }),
                  elements_.end());
}

FiniteGroup FiniteGroup::trivial() { return FiniteGroup({Mat3::Identity()}); }

std::optional<size_t> FiniteGroup::find(const Mat3& m, double tol) const {
  for (size_t i = 0; i < elements_.size(); ++i) {
    if ((elements_[i] - m).cwiseAbs().maxCoeff() <= tol) return i;
  }
  return std::nullopt;
}

GroupCheck FiniteGroup::verify(double tol) const {
  GroupCheck check;
  check.has_identity = contains(Mat3::Identity(), tol);
  check.closed = true;
  check.has_inverses = true;
  for (const auto& a : elements_) {
    check.worst_orthogonality = std::max(check.worst_orthogonality, orthogonality_defect(a));
    if (!contains(a.transpose(), tol)) check.has_inverses = false;
    for (const auto& b : elements_) {
      if (!contains(a * b, tol)) {
        check.closed = false;
        break;
      }
    }
  }
  return check;
}

Mat3 cross_matrix(const Vec3& v) {
  Mat3 k;
  k << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return k;
}

Mat3 rotation_about(const Vec3& axis, double angle) {
  const Mat3 k = cross_matrix(axis.normalized());
  return Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
}

}  // namespace gpt
