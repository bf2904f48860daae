#pragma once

#include <string>
#include <string_view>

#include "lio/geometry.hpp"

namespace lio::sim {

enum class TrajectoryKind {
  kStatic,
  kConstantVelocity,
  kConstantAccel,
  kSinusoid,
  kAggressiveSpin,
};

TrajectoryKind parse_trajectory_kind(std::string_view name);
std::string_view to_string(TrajectoryKind kind);

/// Analytic rigid-body motion, twice differentiable on [0, duration].
/// Translation: start + optional constant velocity/acceleration + per-axis
/// sinusoids (offset so the path starts at start_position). Rotation: a single
/// fixed axis carrying an optional smoothly ramped constant spin plus an
/// oscillation, composed onto the initial attitude.
struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::kStatic;
  double duration = 10.0;

  Vec3 start_position = Vec3::Zero();
  Vec3 start_rpy = Vec3::Zero();  // roll, pitch, yaw in radians

  Vec3 linear_velocity = Vec3::Zero();  // constant_velocity
  Vec3 linear_accel = Vec3::Zero();     // constant_accel

  Vec3 pos_amplitude = Vec3::Zero();  // sinusoid / aggressive_spin, meters
  Vec3 pos_frequency = Vec3::Zero();  // Hz
  Vec3 pos_phase = Vec3::Zero();      // radians

  Vec3 rot_axis = Vec3::UnitZ();
  double spin_rate = 0.0;      // rad/s, aggressive_spin
  double spin_ramp = 0.5;      // seconds of smooth spin-up
  double rot_amplitude = 0.0;  // radians of oscillation about rot_axis
  double rot_frequency = 0.0;  // Hz
  double rot_phase = 0.0;      // radians

  Quat start_orientation() const;
};

struct MotionSample {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();  // world frame
  Quat orientation = Quat::Identity();
  Vec3 angular_velocity = Vec3::Zero();  // body frame
  Vec3 angular_accel = Vec3::Zero();     // body frame
};

/// Evaluates a spec, optionally holding the initial pose (at rest) for
/// `preamble` seconds before the spec's own clock starts.
class MotionModel {
 public:
  explicit MotionModel(TrajectorySpec spec, double preamble = 0.0);

  /// Throws std::out_of_range outside [0, duration()].
  MotionSample sample(double t) const;
  Pose pose(double t) const;

  double duration() const { return preamble_ + spec_.duration; }
  double preamble() const { return preamble_; }
  const TrajectorySpec& spec() const { return spec_; }

 private:
  MotionSample evaluate(double t) const;  // spec clock, no preamble

  TrajectorySpec spec_;
  double preamble_ = 0.0;
  Quat start_orientation_;
};

/// Analytic pose on the spec's own clock; throws outside [0, spec.duration].
Pose ground_truth_pose(const TrajectorySpec& spec, double t);

/// Full kinematic state on the spec's own clock (test oracle convenience).
MotionSample ground_truth_state(const TrajectorySpec& spec, double t);

}  // namespace lio::sim
