#include "lio/sim/scene.hpp"

#include <algorithm>
#include <cmath>

namespace lio::sim {

SceneSpec SceneSpec::box_room(double half_x, double half_y, double half_z) {
  SceneSpec scene;
  scene.boxes.push_back(AxisAlignedBox{Vec3(-half_x, -half_y, -half_z),
                                       Vec3(half_x, half_y, half_z)});
  return scene;
}

namespace {

constexpr double kRayEps = 1e-9;

std::optional<double> hit_plane(const AxisAlignedPlane& plane, const Vec3& o, const Vec3& d) {
  const double dn = d[plane.axis];
  if (std::abs(dn) < 1e-15) return std::nullopt;
  const double t = (plane.offset - o[plane.axis]) / dn;
  if (t <= kRayEps) return std::nullopt;
  const int ua = (plane.axis + 1) % 3;
  const int va = (plane.axis + 2) % 3;
  const double u = o[ua] + t * d[ua];
  const double v = o[va] + t * d[va];
  if (u < plane.u_min || u > plane.u_max || v < plane.v_min || v > plane.v_max) {
    return std::nullopt;
  }
  return t;
}

std::optional<double> hit_box(const AxisAlignedBox& box, const Vec3& o, const Vec3& d) {
  double t_enter = -std::numeric_limits<double>::infinity();
  double t_exit = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (std::abs(d[a]) < 1e-15) {
      if (o[a] < box.min[a] || o[a] > box.max[a]) return std::nullopt;
      continue;
    }
    double t0 = (box.min[a] - o[a]) / d[a];
    double t1 = (box.max[a] - o[a]) / d[a];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
  }
  if (t_exit < std::max(t_enter, kRayEps)) return std::nullopt;
  return t_enter > kRayEps ? t_enter : t_exit;
}

}  // namespace

std::optional<double> ray_hit(const SceneSpec& scene, const Vec3& origin, const Vec3& dir,
                              double max_range) {
  std::optional<double> best;
  const auto consider = [&](std::optional<double> t) {
    if (t && *t <= max_range && (!best || *t < *best)) best = t;
  };
  for (const auto& plane : scene.planes) consider(hit_plane(plane, origin, dir));
  for (const auto& box : scene.boxes) consider(hit_box(box, origin, dir));
  return best;
}

}  // namespace lio::sim
