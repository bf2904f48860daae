#pragma once

#include "lio/geometry.hpp"

namespace lio::observer {

/// Positive correction gains of the hierarchical state observer. The attitude
/// pair (kq, kgb) acts only on the rotation error; the translation triple
/// (kp, kv, kab) acts only on the position error.
struct ObserverGains {
  double kq = 4.0;    // attitude
  double kgb = 8.0;   // gyro bias
  double kp = 6.0;    // position
  double kv = 12.0;   // velocity
  double kab = 8.0;   // accelerometer bias

  bool valid() const { return kq > 0 && kgb > 0 && kp > 0 && kv > 0 && kab > 0; }
};

struct PoseError {
  Quat q_e = Quat::Identity();  // conj(propagated) ⊗ measured
  Vec3 p_e = Vec3::Zero();      // measured - propagated
};

/// Single-step dead reckoning at IMU rate: bias-corrected accelerometer rotated
/// to the world with gravity restored, first-order quaternion rate update.
/// Biases are left untouched. Requires dt > 0.
RobotState propagate(const RobotState& state, const ImuSample& sample, double dt);

PoseError compute_error(const Pose& propagated, const Pose& measured);

/// Hierarchical correction toward a registered pose. The attitude and gyro-bias
/// corrections depend only on the quaternion error; the position, velocity and
/// accel-bias corrections only on the position error (rotated by the propagated
/// attitude for the bias). Insensitive to the sign of the measured quaternion.
RobotState update(const RobotState& state, const Pose& measured, double dt_k,
                  const ObserverGains& gains);

}  // namespace lio::observer
