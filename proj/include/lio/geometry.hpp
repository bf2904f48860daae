#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <vector>

namespace lio {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Quat = Eigen::Quaterniond;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// World frame is x-forward, y-left, z-up; gravity points along -z.
inline constexpr double kGravityMagnitude = 9.80665;

inline Vec3 gravity() { return {0.0, 0.0, -kGravityMagnitude}; }

/// Hamilton product a ⊗ b.
inline Quat quat_mul(const Quat& a, const Quat& b) { return a * b; }

/// Rotate v by the unit quaternion q.
inline Vec3 quat_rotate(const Quat& q, const Vec3& v) { return q * v; }

/// Product of a quaternion with a pure-imaginary quaternion built from v.
Quat quat_mul_vec(const Quat& q, const Vec3& v);

/// Exponential map: rotation vector (angle * unit axis) to unit quaternion.
Quat exp_so3(const Vec3& w);

/// Logarithm map: unit quaternion to rotation vector, angle in [0, pi].
Vec3 log_so3(const Quat& q);

/// Angle of the relative rotation between two unit quaternions, in [0, pi].
/// Insensitive to the sign of either quaternion.
double angular_distance(const Quat& a, const Quat& b);

struct Pose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();

  Vec3 apply(const Vec3& p) const { return orientation * p + position; }

  Pose inverse() const {
    const Quat qi = orientation.conjugate();
    return Pose{qi * (-position), qi};
  }

  Mat4 matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = orientation.toRotationMatrix();
    m.topRightCorner<3, 1>() = position;
    return m;
  }
};

/// SE(3) composition: (a ∘ b)(x) = a(b(x)).
inline Pose pose_compose(const Pose& a, const Pose& b) {
  return Pose{a.orientation * b.position + a.position,
              (a.orientation * b.orientation).normalized()};
}

struct RobotState {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();
  Vec3 velocity = Vec3::Zero();
  Vec3 accel_bias = Vec3::Zero();
  Vec3 gyro_bias = Vec3::Zero();
  double stamp = 0.0;

  Pose pose() const { return Pose{position, orientation}; }
};

struct ImuSample {
  double stamp = 0.0;
  Vec3 accel = Vec3::Zero();  // specific force, m/s^2
  Vec3 gyro = Vec3::Zero();   // rad/s

  bool finite() const { return accel.allFinite() && gyro.allFinite() && std::isfinite(stamp); }
};

struct TimedPoint {
  Vec3 xyz = Vec3::Zero();
  double dt = 0.0;  // seconds since the sweep start, in [0, sweep period)
};

struct TimedPointCloud {
  double stamp = 0.0;  // sweep start time
  std::vector<TimedPoint> points;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }

  /// Stable sort by per-point time; equal-dt points keep their relative order.
  void sort_by_time();
  bool is_sorted_by_time() const;

  std::vector<Vec3> positions() const;
};

}  // namespace lio
