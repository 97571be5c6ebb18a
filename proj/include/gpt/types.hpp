#pragma once

#include <Eigen/Dense>

namespace gpt {

// All builtin theories (and the recipe) live in three real dimensions:
// (<X>, <Y>, <Z>) with the normalization component left implicit.
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace gpt
