#pragma once

#include <optional>
#include <vector>

#include "lio/geometry.hpp"

namespace lio::sim {

/// Finite rectangle perpendicular to a coordinate axis. The transverse axes
/// (u, v) are (axis+1)%3 and (axis+2)%3.
struct AxisAlignedPlane {
  int axis = 2;
  double offset = 0.0;
  double u_min = -1.0;
  double u_max = 1.0;
  double v_min = -1.0;
  double v_max = 1.0;
};

struct AxisAlignedBox {
  Vec3 min = Vec3::Constant(-1.0);
  Vec3 max = Vec3::Constant(1.0);
};

struct SceneSpec {
  std::vector<AxisAlignedPlane> planes;
  std::vector<AxisAlignedBox> boxes;

  bool empty() const { return planes.empty() && boxes.empty(); }

  /// A closed rectangular room centered at the origin; rays from inside hit
  /// the interior faces.
  static SceneSpec box_room(double half_x, double half_y, double half_z);
};

/// Ray parameter of the nearest intersection in (1e-9, max_range], or nullopt.
/// `dir` must be unit length. Rays starting inside a box hit its exit face.
std::optional<double> ray_hit(const SceneSpec& scene, const Vec3& origin, const Vec3& dir,
                              double max_range);

}  // namespace lio::sim
