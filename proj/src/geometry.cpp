#include "lio/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace lio {

Quat quat_mul_vec(const Quat& q, const Vec3& v) {
  return q * Quat(0.0, v.x(), v.y(), v.z());
}

Quat exp_so3(const Vec3& w) {
  const double angle = w.norm();
  if (angle < 1e-12) {
    // First-order expansion, normalized to stay on the unit sphere.
    Quat q(1.0, 0.5 * w.x(), 0.5 * w.y(), 0.5 * w.z());
    q.normalize();
    return q;
  }
  const double half = 0.5 * angle;
  const Vec3 axis = w / angle;
  const double s = std::sin(half);
  return Quat(std::cos(half), s * axis.x(), s * axis.y(), s * axis.z());
}

Vec3 log_so3(const Quat& q_in) {
  Quat q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const double vn = q.vec().norm();
  if (vn < 1e-12) return 2.0 * q.vec();
  const double angle = 2.0 * std::atan2(vn, q.w());
  return (angle / vn) * q.vec();
}

double angular_distance(const Quat& a, const Quat& b) {
  const double d = std::min(1.0, std::abs(a.normalized().dot(b.normalized())));
  return 2.0 * std::acos(d);
}

void TimedPointCloud::sort_by_time() {
  std::stable_sort(points.begin(), points.end(),
                   [](const TimedPoint& a, const TimedPoint& b) { return a.dt < b.dt; });
}

bool TimedPointCloud::is_sorted_by_time() const {
  return std::is_sorted(points.begin(), points.end(),
                        [](const TimedPoint& a, const TimedPoint& b) { return a.dt < b.dt; });
}

std::vector<Vec3> TimedPointCloud::positions() const {
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.xyz);
  return out;
}

}  // namespace lio
