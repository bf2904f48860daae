#include "lio/trajectory.hpp"

#include <stdexcept>

namespace lio {

Vec3 knot_position_at(const TrajectoryKnot& k, double tau) {
  return k.position + k.velocity * tau + 0.5 * k.world_accel * (tau * tau) +
         (1.0 / 6.0) * k.jerk * (tau * tau * tau);
}

Quat knot_orientation_at(const TrajectoryKnot& k, double tau) {
  Quat q = k.orientation;
  q.coeffs() += 0.5 * tau * quat_mul_vec(k.orientation, k.body_gyro).coeffs();
  q.coeffs() += 0.25 * tau * tau * quat_mul_vec(k.orientation, k.ang_accel).coeffs();
  q.normalize();
  return q;
}

DiscreteTrajectory::DiscreteTrajectory(std::vector<TrajectoryKnot> knots)
    : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw std::invalid_argument("trajectory needs at least two knots");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i - 1].stamp < knots_[i].stamp)) {
      throw std::invalid_argument("trajectory knots must be strictly time ordered");
    }
  }
}

std::size_t DiscreteTrajectory::segment_index(double t) const {
  if (!contains(t)) throw std::out_of_range("query time outside trajectory span");
  std::size_t lo = 0;
  std::size_t hi = knots_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (knots_[mid].stamp <= t) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

DiscreteTrajectory integrate_imu(const RobotState& start, std::span<const ImuSample> samples) {
  if (samples.size() < 2) throw std::invalid_argument("need at least two IMU samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i - 1].stamp < samples[i].stamp)) {
      throw std::invalid_argument("IMU samples must be strictly time ordered");
    }
  }
  if (start.stamp > samples.front().stamp) {
    throw std::invalid_argument("integration start lies after the first IMU sample");
  }

  const auto corrected_accel = [&](const ImuSample& s) -> Vec3 { return s.accel - start.accel_bias; };
  const auto corrected_gyro = [&](const ImuSample& s) -> Vec3 { return s.gyro - start.gyro_bias; };

  std::vector<TrajectoryKnot> knots;
  knots.reserve(samples.size() + 1);

  TrajectoryKnot first;
  first.stamp = start.stamp;
  first.position = start.position;
  first.velocity = start.velocity;
  first.orientation = start.orientation.normalized();
  first.body_gyro = corrected_gyro(samples[0]);
  first.world_accel = first.orientation * corrected_accel(samples[0]) + gravity();
  knots.push_back(first);

  // When the start state coincides with the first sample, that sample only
  // seeds the first knot's readings.
  std::size_t begin = samples.front().stamp == start.stamp ? 1 : 0;

  for (std::size_t i = begin; i < samples.size(); ++i) {
    TrajectoryKnot& prev = knots.back();
    const ImuSample& s = samples[i];
    const double dt = s.stamp - prev.stamp;

    prev.ang_accel = (corrected_gyro(s) - prev.body_gyro) / dt;

    TrajectoryKnot next;
    next.stamp = s.stamp;
    next.orientation = knot_orientation_at(prev, dt);
    next.body_gyro = corrected_gyro(s);
    next.world_accel = next.orientation * corrected_accel(s) + gravity();

    prev.jerk = (next.world_accel - prev.world_accel) / dt;

    next.position = knot_position_at(prev, dt);
    next.velocity = prev.velocity + prev.world_accel * dt;
    knots.push_back(next);
  }

  // The last knot has no forward interval; reuse the previous one's model.
  TrajectoryKnot& last = knots.back();
  const TrajectoryKnot& before = knots[knots.size() - 2];
  last.jerk = before.jerk;
  last.ang_accel = before.ang_accel;

  return DiscreteTrajectory(std::move(knots));
}

Pose query_pose(const DiscreteTrajectory& traj, double t) {
  const std::size_t idx = traj.segment_index(t);
  const TrajectoryKnot& k = traj.knots()[idx];
  const double tau = t - k.stamp;
  if (tau == 0.0) return Pose{k.position, k.orientation};
  return Pose{knot_position_at(k, tau), knot_orientation_at(k, tau)};
}

}  // namespace lio
