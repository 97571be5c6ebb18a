#include "gpt/symmetry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "gpt/error.hpp"
#include "gpt/kernels.hpp"

namespace gpt::symmetry {

namespace {

constexpr double kMatchTol = 1e-9;

struct Anchor {
  std::array<size_t, 3> index{};
  Mat3 inverse;
};

Anchor choose_anchor(const std::vector<Vec3>& vertices) {
  Vec3 centroid = Vec3::Zero();
  for (const auto& v : vertices) centroid += v;
  if (vertices.empty()) throw Error(ErrorKind::DegenerateVertices, "empty vertex list");
  centroid /= static_cast<double>(vertices.size());
  if (centroid.norm() > kMatchTol) {
    throw Error(ErrorKind::CentroidNotAtOrigin,
                "vertex centroid is not at the origin; affine symmetries are unsupported");
  }
  const size_t n = vertices.size();
  double best = 0.0;
  Anchor anchor;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        Mat3 m;
        m << vertices[i], vertices[j], vertices[k];
        const double det = std::abs(m.determinant());
        if (det > best + 1e-12) {
          best = det;
          anchor.index = {i, j, k};
          anchor.inverse = m.inverse();
        }
      }
  if (best < kMatchTol) throw Error(ErrorKind::DegenerateVertices, "vertices do not span R^3");
  return anchor;
}

bool permutes_vertices(const Mat3& m, const std::vector<Vec3>& vertices) {
  for (const auto& v : vertices) {
    const Vec3 image = m * v;
    const bool hit = std::any_of(vertices.begin(), vertices.end(), [&](const Vec3& u) {
      return (image - u).cwiseAbs().maxCoeff() <= kMatchTol;
    });
    if (!hit) return false;
  }
  return true;
}

// Candidates whose first anchor image is vertices[p].
void search_from(size_t p, const std::vector<Vec3>& vertices, const Anchor& anchor,
                 std::vector<Mat3>& found) {
  const auto& a = vertices[anchor.index[0]];
  const auto& b = vertices[anchor.index[1]];
  const auto& c = vertices[anchor.index[2]];
  const auto close = [](double x, double y) { return std::abs(x - y) <= kMatchTol; };
  const Vec3& pa = vertices[p];
  if (!close(pa.squaredNorm(), a.squaredNorm())) return;
  const size_t n = vertices.size();
  for (size_t q = 0; q < n; ++q) {
    if (q == p) continue;
    const Vec3& qb = vertices[q];
    if (!close(qb.squaredNorm(), b.squaredNorm()) || !close(pa.dot(qb), a.dot(b))) continue;
    for (size_t r = 0; r < n; ++r) {
      if (r == p || r == q) continue;
      const Vec3& rc = vertices[r];
      if (!close(rc.squaredNorm(), c.squaredNorm()) || !close(pa.dot(rc), a.dot(c)) ||
          !close(qb.dot(rc), b.dot(c))) {
        continue;
      }
      Mat3 images;
      images << pa, qb, rc;
      const Mat3 m = images * anchor.inverse;
      if (orthogonality_defect(m) <= kMatchTol && permutes_vertices(m, vertices)) {
        found.push_back(m);
      }
    }
  }
}

Vec3 canonical_sign(Vec3 v) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v(i)) > 1e-9) return v(i) < 0.0 ? Vec3(-v) : v;
  }
  return v;
}

double wrap_angle(double a) {
  const double two_pi = 2.0 * kPi;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  if (two_pi - a < 1e-12) a = 0.0;
  return a;
}

}  // namespace

FiniteGroup polytope_symmetries(const std::vector<Vec3>& vertices) {
  const Anchor anchor = choose_anchor(vertices);
  const auto n = static_cast<long>(vertices.size());
  std::vector<Mat3> all;
#pragma omp parallel
  {
    std::vector<Mat3> local;
#pragma omp for schedule(dynamic)
    for (long p = 0; p < n; ++p) search_from(static_cast<size_t>(p), vertices, anchor, local);
#pragma omp critical
    all.insert(all.end(), local.begin(), local.end());
  }
  return FiniteGroup(std::move(all));
}

FiniteGroup polytope_symmetries_serial(const std::vector<Vec3>& vertices) {
  const Anchor anchor = choose_anchor(vertices);
  std::vector<Mat3> all;
  for (size_t p = 0; p < vertices.size(); ++p) search_from(p, vertices, anchor, all);
  return FiniteGroup(std::move(all));
}

FiniteGroup rotation_subgroup(const FiniteGroup& g) {
  std::vector<Mat3> rotations;
  for (const auto& m : g.elements()) {
    if (m.determinant() > 0.0) rotations.push_back(m);
  }
  return FiniteGroup(std::move(rotations));
}

Vec3 spekkens_vertex(int a, int b) {
  if (a > b) std::swap(a, b);
  const int key = 10 * a + b;
  switch (key) {
    case 12: return Vec3::UnitZ();
    case 34: return -Vec3::UnitZ();
    case 13: return Vec3::UnitX();
    case 24: return -Vec3::UnitX();
    case 14: return Vec3::UnitY();
    case 23: return -Vec3::UnitY();
    default: break;
  }
  throw Error(ErrorKind::InvalidDimension, "epistemic states are pairs of distinct ontic states 1..4");
}

Mat3 spekkens_induced_map(const std::vector<int>& perm) {
  if (perm.size() != 4) throw Error(ErrorKind::InvalidDimension, "need a permutation of 4 ontic states");
  const auto img = [&](int i) { return perm[static_cast<size_t>(i - 1)]; };
  Mat3 m;
  m.col(0) = spekkens_vertex(img(1), img(3));
  m.col(1) = spekkens_vertex(img(1), img(4));
  m.col(2) = spekkens_vertex(img(1), img(2));
  return m;
}

FiniteGroup spekkens_group() {
  std::vector<int> perm = {1, 2, 3, 4};
  std::vector<Mat3> elements;
  do {
    elements.push_back(spekkens_induced_map(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return FiniteGroup(std::move(elements));
}

AxisAngle axis_angle(const Mat3& m) {
  if (m.determinant() < 0.0) {
    Eigen::JacobiSVD<Mat3> svd(m + Mat3::Identity(), Eigen::ComputeFullV);
    const Vec3 normal = canonical_sign(svd.matrixV().col(2).normalized());
    const Mat3 r = m * (Mat3::Identity() - 2.0 * normal * normal.transpose());
    const double c = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
    return ReflectionInfo{normal, std::acos(c)};
  }
  const double c = std::clamp((m.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double angle = std::acos(c);
  RotationInfo info;
  info.angle = angle;
  if (angle < 1e-9) return info;
  const Vec3 skew(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
  const double s = std::sin(angle);
  if (s > 1e-6) {
    info.axis = skew / (2.0 * s);
    info.axis->normalize();
  } else {
    // Half turn: (M + 1)/2 = n n^T.
    const Mat3 b = 0.5 * (m + Mat3::Identity());
    Eigen::Index col = 0;
    b.diagonal().maxCoeff(&col);
    info.axis = canonical_sign(b.col(col).normalized());
  }
  return info;
}

std::optional<double> angle_about(const Mat3& m, const Vec3& axis, double tol) {
  if (m.determinant() < 0.0) return std::nullopt;
  const Vec3 n = axis.normalized();
  if ((m * n - n).norm() > tol) return std::nullopt;
  const Vec3 skew(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
  const double s = 0.5 * n.dot(skew);
  const double c = 0.5 * (m.trace() - 1.0);
  return wrap_angle(std::atan2(s, c));
}

std::vector<double> rotation_angles_about(const FiniteGroup& group, const Vec3& unit_axis,
                                          double tol) {
  std::vector<double> angles;
  for (const auto& m : group.elements()) {
    const auto a = angle_about(m, unit_axis, tol);
    if (!a) continue;
    const bool seen = std::any_of(angles.begin(), angles.end(),
                                  [&](double b) { return std::abs(b - *a) < 1e-7; });
    if (!seen) angles.push_back(*a);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

ContinuousAxes continuous_axes(const StateSpace& space) {
  if (!space.symmetry) {
    throw Error(ErrorKind::Unsupported,
                "space '" + space.name + "' has no symmetry metadata; supply continuous axes");
  }
  if (space.restriction) return {};
  return space.symmetry->continuous;
}

AxisCrossCheck cross_check_axes(const StateSpace& space, std::mt19937_64& rng, int angles,
                                int states) {
  const ContinuousAxes axes = continuous_axes(space);
  std::vector<Vec3> list = axes.axes;
  std::normal_distribution<double> gauss;
  if (axes.all) {
    for (int i = 0; i < 20; ++i) list.push_back(Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized());
  }
  std::vector<Vec3> members;
  members.reserve(static_cast<size_t>(states));
  for (int i = 0; i < states; ++i) members.push_back(random_member(space, rng));

  std::uniform_real_distribution<double> angle_dist(-kPi, kPi);
  AxisCrossCheck check;
  for (const auto& axis : list) {
    for (int a = 0; a < angles; ++a) {
      const Mat3 r = rotation_about(axis, angle_dist(rng));
      std::vector<Vec3> images(members.size());
      kernels::apply_map(r, members, images);
      for (const auto& p : images) {
        ++check.trials;
        if (!contains(space, p, 1e-9)) ++check.failures;
      }
    }
  }
  check.ok = check.failures == 0;
  return check;
}

FiniteGroup finite_transformations(const StateSpace& space) {
  if (space.restriction) return *space.restriction;
  if (space.symmetry && space.symmetry->finite) return *space.symmetry->finite;
  return FiniteGroup::trivial();
}

bool axis_is_continuous(const StateSpace& space, const Vec3& unit_axis, double tol) {
  const ContinuousAxes axes = continuous_axes(space);
  if (axes.all) return true;
  return std::any_of(axes.axes.begin(), axes.axes.end(), [&](const Vec3& a) {
    return a.normalized().cross(unit_axis).norm() <= tol;
  });
}

std::optional<double> minimal_discrete_angle(const StateSpace& space, const Vec3& unit_axis,
                                             double tol) {
  std::optional<double> best;
  const auto consider = [&](double a) {
    if (a > 1e-9 && (!best || a < *best)) best = a;
  };
  if (space.symmetry && space.symmetry->perpendicular_half_turns && !space.restriction) {
    if (std::abs(space.symmetry->perpendicular_half_turns->normalized().dot(unit_axis)) <= tol) {
      consider(kPi);
    }
  }
  const FiniteGroup group = finite_transformations(space);
  for (double a : rotation_angles_about(group, unit_axis, tol)) consider(a);
  return best;
}

std::vector<AxisCount> rotation_axes(const FiniteGroup& g, double tol) {
  std::vector<AxisCount> axes;
  for (const auto& m : g.elements()) {
    const auto info = axis_angle(m);
    const auto* rot = std::get_if<RotationInfo>(&info);
    if (!rot || !rot->axis) continue;
    const Vec3 axis = canonical_sign(*rot->axis);
    auto it = std::find_if(axes.begin(), axes.end(), [&](const AxisCount& c) {
      return c.axis.cross(axis).norm() <= tol;
    });
    if (it == axes.end()) {
      axes.push_back({0, axis});
      it = axes.end() - 1;
    }
    ++it->fold;
  }
  // The count so far excludes the identity.
  for (auto& a : axes) ++a.fold;
  return axes;
}

}  // namespace gpt::symmetry
