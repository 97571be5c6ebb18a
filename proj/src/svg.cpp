#include "gpt/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

#include "gpt/error.hpp"

namespace gpt::svg {

namespace {

using P2 = Eigen::Vector2d;

P2 project(const Vec3& v, Plane plane) {
  switch (plane) {
    case Plane::XY: return {v.x(), v.y()};
    case Plane::XZ: return {v.x(), v.z()};
    case Plane::YZ: return {v.y(), v.z()};
  }
  return {0, 0};
}

double cross(const P2& o, const P2& a, const P2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Andrew's monotone chain.
std::vector<P2> hull(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end(), [](const P2& a, const P2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  std::vector<P2> h(2 * pts.size());
  size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace

Plane plane_from_name(const std::string& name) {
  if (name == "xy") return Plane::XY;
  if (name == "xz") return Plane::XZ;
  if (name == "yz") return Plane::YZ;
  throw Error(ErrorKind::Parse, "plane must be xy, xz or yz");
}

std::string trajectory_svg(const StateSpace& space, const dynamics::Trajectory& traj, Plane plane) {
  std::vector<P2> outline_pts;
  for (const auto& v : reference_points(space, 2000)) outline_pts.push_back(project(v, plane));
  const std::vector<P2> outline = hull(outline_pts);
  const double r = std::max(1.0, bounding_radius(space)) * 1.1;
  const double size = 400.0;
  auto sx = [&](double x) { return size * 0.5 * (1.0 + x / r); };
  auto sy = [&](double y) { return size * 0.5 * (1.0 - y / r); };

  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" viewBox=\"0 0 %g %g\">\n",
                size, size, size, size);
  out += buf;
  out += "<polygon fill=\"#eef\" stroke=\"#336\" stroke-width=\"1\" points=\"";
  for (const auto& p : outline) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f ", sx(p.x()), sy(p.y()));
    out += buf;
  }
  out += "\"/>\n<polyline fill=\"none\" stroke=\"#c30\" stroke-width=\"2\" points=\"";
  for (const auto& s : traj.states) {
    const P2 p = project(s, plane);
    std::snprintf(buf, sizeof buf, "%.3f,%.3f ", sx(p.x()), sy(p.y()));
    out += buf;
  }
  out += "\"/>\n";
  if (!traj.states.empty()) {
    const P2 p = project(traj.states.front(), plane);
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\" fill=\"#c30\"/>\n", sx(p.x()), sy(p.y()));
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace gpt::svg
