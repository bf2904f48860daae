#include "lio/observer.hpp"

#include <cmath>
#include <stdexcept>

namespace lio::observer {

RobotState propagate(const RobotState& state, const ImuSample& sample, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("propagate needs dt > 0");

  const Vec3 world_accel =
      state.orientation * (sample.accel - state.accel_bias) + gravity();
  const Vec3 gyro = sample.gyro - state.gyro_bias;

  RobotState out = state;
  out.position += state.velocity * dt + 0.5 * world_accel * (dt * dt);
  out.velocity += world_accel * dt;
  out.orientation.coeffs() += 0.5 * dt * quat_mul_vec(state.orientation, gyro).coeffs();
  out.orientation.normalize();
  out.stamp = state.stamp + dt;
  return out;
}

PoseError compute_error(const Pose& propagated, const Pose& measured) {
  PoseError e;
  e.q_e = propagated.orientation.conjugate() * measured.orientation;
  e.p_e = measured.position - propagated.position;
  return e;
}

RobotState update(const RobotState& state, const Pose& measured, double dt_k,
                  const ObserverGains& gains) {
  if (!(dt_k > 0.0)) throw std::invalid_argument("update needs dt_k > 0");
  if (!gains.valid()) throw std::invalid_argument("observer gains must be positive");

  const PoseError e = compute_error(state.pose(), measured);
  const double sgn = e.q_e.w() >= 0.0 ? 1.0 : -1.0;

  // [1 - |w|; sgn(w) * vec] carried into the estimate's frame.
  const Quat correction(1.0 - std::abs(e.q_e.w()), sgn * e.q_e.x(), sgn * e.q_e.y(),
                        sgn * e.q_e.z());
  const Quat steer = state.orientation * correction;

  RobotState out = state;
  out.orientation.coeffs() += dt_k * gains.kq * steer.coeffs();
  out.orientation.normalize();
  out.gyro_bias -= dt_k * gains.kgb * (e.q_e.w() * e.q_e.vec());
  out.position += dt_k * gains.kp * e.p_e;
  out.velocity += dt_k * gains.kv * e.p_e;
  out.accel_bias -= dt_k * gains.kab * (state.orientation.conjugate() * e.p_e);
  return out;
}

}  // namespace lio::observer
