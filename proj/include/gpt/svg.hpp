#pragma once

#include <string>

#include "gpt/dynamics.hpp"
#include "gpt/statespace.hpp"

namespace gpt::svg {

enum class Plane { XY, XZ, YZ };

/// Throws Parse for anything but "xy", "xz", "yz".
Plane plane_from_name(const std::string& name);

/// Static orthographic projection: outline of the body's projection and the
/// trajectory polyline.
std::string trajectory_svg(const StateSpace& space, const dynamics::Trajectory& traj, Plane plane);

}  // namespace gpt::svg
