#pragma once

#include <cstdint>
#include <vector>

#include "lio/preprocess.hpp"
#include "lio/sim/scene.hpp"
#include "lio/sim/trajectory.hpp"

namespace lio::sim {

struct SimNoiseSpec {
  double accel_noise_std = 0.0;  // m/s^2
  double gyro_noise_std = 0.0;   // rad/s
  Vec3 accel_bias = Vec3::Zero();
  Vec3 gyro_bias = Vec3::Zero();
  std::uint64_t seed = 0;
};

struct LidarModel {
  int channels = 32;
  int horiz_res = 512;
  double rate = 10.0;       // Hz
  double max_range = 60.0;  // meters
  double vertical_fov = 0.7853981633974483;  // radians, spread symmetrically
};

/// Ideal inverse IMU model sampled at `rate` over the whole model duration:
/// accel = R^T (a_world - g) + bias + noise, gyro = w_body + bias + noise, both
/// expressed in the IMU frame at the mounted offset (rigid-body acceleration
/// terms included). Deterministic for a fixed seed.
std::vector<ImuSample> sample_imu(const MotionModel& model, double rate,
                                  const SimNoiseSpec& noise, const Extrinsics& ext = {});
std::vector<ImuSample> sample_imu(const TrajectorySpec& spec, double rate,
                                  const SimNoiseSpec& noise, const Extrinsics& ext = {});

struct SweepRender {
  TimedPointCloud distorted;      // sensor frame at each point's own time
  TimedPointCloud reference;      // the same hits in the world frame
  std::vector<Pose> point_poses;  // world pose of the sensor per emitted point
};

/// Spin one sweep starting at t0: each azimuth column is cast from the sensor's
/// true pose at its own firing time. Rays that miss the scene are omitted, so
/// the output holds at most channels * horiz_res points, ordered by time.
SweepRender render_sweep(const MotionModel& model, const SceneSpec& scene,
                         const LidarModel& lidar, double t0, const Extrinsics& ext = {});
SweepRender render_sweep(const TrajectorySpec& spec, const SceneSpec& scene,
                         const LidarModel& lidar, double t0, const Extrinsics& ext = {});

}  // namespace lio::sim
