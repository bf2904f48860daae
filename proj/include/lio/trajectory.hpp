#pragma once

#include <span>
#include <vector>

#include "lio/geometry.hpp"

namespace lio {

/// One node of the coarse dead-reckoned trajectory over a sweep. jerk and
/// ang_accel describe the interval that starts at this knot (the last knot
/// reuses the values of the interval ending at it).
struct TrajectoryKnot {
  double stamp = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Quat orientation = Quat::Identity();
  Vec3 world_accel = Vec3::Zero();  // gravity removed
  Vec3 jerk = Vec3::Zero();         // world frame
  Vec3 body_gyro = Vec3::Zero();    // bias corrected
  Vec3 ang_accel = Vec3::Zero();    // body frame
};

/// Position after tau seconds under the knot's constant-jerk model.
Vec3 knot_position_at(const TrajectoryKnot& k, double tau);

/// Orientation after tau seconds under the knot's constant-angular-acceleration
/// model (first-order rate term plus second-order acceleration term), renormalized.
Quat knot_orientation_at(const TrajectoryKnot& k, double tau);

class DiscreteTrajectory {
 public:
  DiscreteTrajectory() = default;
  /// Throws std::invalid_argument for fewer than two knots or unordered stamps.
  explicit DiscreteTrajectory(std::vector<TrajectoryKnot> knots);

  const std::vector<TrajectoryKnot>& knots() const { return knots_; }
  double start_time() const { return knots_.front().stamp; }
  double end_time() const { return knots_.back().stamp; }
  bool contains(double t) const { return t >= start_time() && t <= end_time(); }

  /// Index of the closest knot with stamp <= t. Throws std::out_of_range when
  /// t is outside [start_time, end_time].
  std::size_t segment_index(double t) const;

 private:
  std::vector<TrajectoryKnot> knots_;
};

/// Dead-reckon from `start` through time-ordered IMU samples with a constant
/// jerk and angular acceleration model; `start`'s biases are subtracted from
/// every sample first. The first knot sits at start.stamp; one knot is added
/// per sample after it. Throws std::invalid_argument when samples are unordered
/// or duplicated, fewer than two, or start.stamp lies after the first sample.
DiscreteTrajectory integrate_imu(const RobotState& start, std::span<const ImuSample> samples);

/// Closed-form pose at time t, evaluated from the closest preceding knot's
/// polynomial. At a knot stamp this returns that knot's pose exactly.
/// Throws std::out_of_range for t outside the trajectory span.
Pose query_pose(const DiscreteTrajectory& traj, double t);

}  // namespace lio
