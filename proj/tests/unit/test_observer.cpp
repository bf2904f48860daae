#include <doctest.h>

#include <cmath>

#include "lio/observer.hpp"
#include "lio/sim/sensors.hpp"
#include "support/oracles.hpp"

using namespace lio;
using observer::ObserverGains;

TEST_SUITE("observer") {

TEST_CASE("stationary level IMU leaves the state unchanged") {
  RobotState state;
  ImuSample s;
  s.stamp = 0.01;
  s.accel = Vec3(0, 0, kGravityMagnitude);
  const RobotState out = observer::propagate(state, s, 0.01);
  CHECK(out.position.norm() < 1e-15);
  CHECK(out.velocity.norm() < 1e-15);
  CHECK(angular_distance(out.orientation, Quat::Identity()) < 1e-15);
  CHECK(out.stamp == doctest::Approx(0.01));
}

TEST_CASE("constant acceleration reaches v = a t") {
  RobotState state;
  ImuSample s;
  s.accel = Vec3(1, 0, kGravityMagnitude);
  for (int i = 0; i < 100; ++i) state = observer::propagate(state, s, 0.01);
  CHECK(std::abs(state.velocity.x() - 1.0) < 1e-6);
  CHECK(std::abs(state.position.x() - 0.5) < 1e-2);
}

TEST_CASE("dead reckoning tracks the aggressive trajectory over 100 ms") {
  sim::TrajectorySpec spec;
  spec.kind = sim::TrajectoryKind::kAggressiveSpin;
  spec.duration = 3.0;
  spec.spin_rate = 3.5;
  spec.spin_ramp = 0.5;
  spec.pos_amplitude = Vec3(0.25, 0.2, 0.1);
  spec.pos_frequency = Vec3(0.25, 0.2, 0.3);
  spec.pos_phase = Vec3(M_PI / 2, M_PI / 2, M_PI / 2);

  const double t0 = 2.0;
  const auto init = sim::ground_truth_state(spec, t0);
  RobotState state;
  state.stamp = t0;
  state.position = init.position;
  state.orientation = init.orientation;
  state.velocity = init.velocity;

  for (const auto& s : sim::sample_imu(spec, 100.0, {})) {
    if (s.stamp <= t0 || s.stamp > t0 + 0.1 + 1e-12) continue;
    state = observer::propagate(state, s, s.stamp - state.stamp);
  }
  const Pose truth = sim::ground_truth_pose(spec, state.stamp);
  CHECK((state.position - truth.position).norm() < 1e-4);
}

TEST_CASE("propagate validates dt") {
  CHECK_THROWS_AS(observer::propagate(RobotState{}, ImuSample{}, 0.0), std::invalid_argument);
}

TEST_CASE("pose error of identical poses is the identity") {
  std::mt19937_64 rng(31);
  const Pose p = oracles::random_pose(rng, 2.0);
  const auto e = observer::compute_error(p, p);
  CHECK(std::abs(std::abs(e.q_e.w()) - 1.0) < 1e-12);
  CHECK(e.q_e.vec().norm() < 1e-12);
  CHECK(e.p_e.norm() < 1e-12);
}

TEST_CASE("pose error isolates a yaw offset") {
  Pose propagated;
  Pose measured;
  measured.orientation = exp_so3(Vec3(0, 0, 10.0 * M_PI / 180.0));
  const auto e = observer::compute_error(propagated, measured);
  CHECK(angular_distance(e.q_e, measured.orientation) < 1e-12);
  CHECK((log_so3(e.q_e) - Vec3(0, 0, 10.0 * M_PI / 180.0)).norm() < 1e-12);
}

TEST_CASE("update with a matching measurement is the identity") {
  std::mt19937_64 rng(32);
  RobotState state;
  state.position = oracles::random_vec3(rng, 4.0);
  state.orientation = oracles::random_quat(rng);
  state.velocity = oracles::random_vec3(rng, 2.0);
  state.accel_bias = oracles::random_vec3(rng, 0.1);
  state.gyro_bias = oracles::random_vec3(rng, 0.01);

  const RobotState out = observer::update(state, state.pose(), 0.1, ObserverGains{});
  CHECK((out.position - state.position).norm() < 1e-14);
  CHECK((out.velocity - state.velocity).norm() < 1e-14);
  CHECK((out.accel_bias - state.accel_bias).norm() < 1e-14);
  CHECK((out.gyro_bias - state.gyro_bias).norm() < 1e-14);
  CHECK(angular_distance(out.orientation, state.orientation) < 1e-12);
}

TEST_CASE("unit-gain position error substitutes directly") {
  RobotState state;
  state.position = Vec3(2, 3, 4);
  state.velocity = Vec3(0.5, 0, 0);
  state.accel_bias = Vec3(0.01, 0.02, 0.03);

  Pose measured;
  measured.position = state.position + Vec3(1, 0, 0);

  ObserverGains unit{1.0, 1.0, 1.0, 1.0, 1.0};
  const RobotState out = observer::update(state, measured, 0.1, unit);

  CHECK(out.position.x() == state.position.x() + 0.1);
  CHECK(out.position.y() == state.position.y());
  CHECK(out.position.z() == state.position.z());
  CHECK(out.velocity.x() == state.velocity.x() + 0.1);
  CHECK(out.accel_bias.x() == state.accel_bias.x() - 0.1);
  CHECK(out.accel_bias.y() == state.accel_bias.y());
  CHECK(out.gyro_bias.norm() == 0.0);
  CHECK(angular_distance(out.orientation, state.orientation) < 1e-12);
}

TEST_CASE("attitude and translation corrections stay decoupled") {
  RobotState state;
  state.orientation = exp_so3(Vec3(0.1, 0.2, -0.1));
  state.position = Vec3(1, 1, 1);

  // Pure position error: the quaternion and gyro bias must not move.
  Pose shifted = state.pose();
  shifted.position += Vec3(0.5, -0.2, 0.1);
  auto out = observer::update(state, shifted, 0.1, ObserverGains{});
  CHECK(angular_distance(out.orientation, state.orientation) < 1e-12);
  CHECK(out.gyro_bias.norm() == 0.0);
  CHECK((out.position - state.position).norm() > 0.0);

  // Pure attitude error: position, velocity and accel bias must not move.
  Pose rotated = state.pose();
  rotated.orientation = (rotated.orientation * exp_so3(Vec3(0.05, 0, 0.02))).normalized();
  out = observer::update(state, rotated, 0.1, ObserverGains{});
  CHECK((out.position - state.position).norm() == 0.0);
  CHECK((out.velocity - state.velocity).norm() == 0.0);
  CHECK((out.accel_bias - state.accel_bias).norm() == 0.0);
  CHECK(angular_distance(out.orientation, state.orientation) > 0.0);
}

TEST_CASE("negating the measured quaternion changes nothing") {
  std::mt19937_64 rng(33);
  RobotState state;
  state.orientation = oracles::random_quat(rng);
  state.position = oracles::random_vec3(rng, 2.0);

  Pose measured = oracles::random_pose(rng, 2.0);
  Pose negated = measured;
  negated.orientation.coeffs() = -negated.orientation.coeffs();

  const RobotState a = observer::update(state, measured, 0.1, ObserverGains{});
  const RobotState b = observer::update(state, negated, 0.1, ObserverGains{});
  CHECK((a.position - b.position).norm() == 0.0);
  CHECK((a.gyro_bias - b.gyro_bias).norm() < 1e-15);
  CHECK(angular_distance(a.orientation, b.orientation) < 1e-12);
}

TEST_CASE("closed loop converges from large initial errors") {
  // True state: resting, level. Measurements: the true pose at 10 Hz.
  const double imu_dt = 0.01;
  ImuSample resting;
  resting.accel = Vec3(0, 0, kGravityMagnitude);

  RobotState state;
  state.velocity = Vec3(1.0, 0, 0);
  state.accel_bias = Vec3(0.2, 0, 0);
  state.gyro_bias = Vec3(0.02, 0, 0);
  state.orientation = exp_so3(Vec3(10.0 * M_PI / 180.0, 0, 0));

  const ObserverGains gains{};
  double t = 0.0;
  for (int step = 1; step <= 1000; ++step) {
    t = step * imu_dt;
    resting.stamp = t;
    state = observer::propagate(state, resting, imu_dt);
    if (step % 10 == 0) {
      state = observer::update(state, Pose{}, 0.1, gains);
    }
  }

  CHECK(state.velocity.norm() < 1e-3 * 1.0);
  CHECK(state.accel_bias.norm() < 1e-3 * 0.2);
  CHECK(state.gyro_bias.norm() < 1e-3 * 0.02);
  CHECK(angular_distance(state.orientation, Quat::Identity()) < 1e-3 * (10.0 * M_PI / 180.0));
  CHECK(state.position.norm() < 1e-3);
}

TEST_CASE("update validates inputs") {
  CHECK_THROWS_AS(observer::update(RobotState{}, Pose{}, 0.0, ObserverGains{}),
                  std::invalid_argument);
  ObserverGains bad;
  bad.kp = 0.0;
  CHECK_THROWS_AS(observer::update(RobotState{}, Pose{}, 0.1, bad), std::invalid_argument);
}

}  // TEST_SUITE
