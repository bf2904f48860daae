#include "lio/sim/sensors.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace lio::sim {

std::vector<ImuSample> sample_imu(const MotionModel& model, double rate,
                                  const SimNoiseSpec& noise, const Extrinsics& ext) {
  if (!(rate > 0.0)) throw std::invalid_argument("IMU rate must be positive");

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  const auto draw3 = [&](double std_dev) {
    if (std_dev <= 0.0) return Vec3(Vec3::Zero());
    return Vec3(std_dev * unit(rng), std_dev * unit(rng), std_dev * unit(rng));
  };

  const Quat& r_ib = ext.imu_to_robot.orientation;  // IMU frame -> robot frame
  const Vec3& offset = ext.imu_to_robot.position;

  const auto ticks = static_cast<std::size_t>(std::floor(model.duration() * rate + 1e-9)) + 1;
  std::vector<ImuSample> out;
  out.reserve(ticks);

  for (std::size_t j = 0; j < ticks; ++j) {
    const double t = static_cast<double>(j) / rate;
    const MotionSample s = model.sample(t);

    // Acceleration of the offset mount point on the rigid body.
    const Vec3 mount_accel_world =
        s.acceleration +
        s.orientation * (s.angular_velocity.cross(s.angular_velocity.cross(offset)) +
                         s.angular_accel.cross(offset));

    ImuSample m;
    m.stamp = t;
    m.accel = r_ib.conjugate() *
                  (s.orientation.conjugate() * (mount_accel_world - gravity())) +
              noise.accel_bias + draw3(noise.accel_noise_std);
    m.gyro = r_ib.conjugate() * s.angular_velocity + noise.gyro_bias +
             draw3(noise.gyro_noise_std);
    out.push_back(m);
  }
  return out;
}

std::vector<ImuSample> sample_imu(const TrajectorySpec& spec, double rate,
                                  const SimNoiseSpec& noise, const Extrinsics& ext) {
  return sample_imu(MotionModel(spec), rate, noise, ext);
}

SweepRender render_sweep(const MotionModel& model, const SceneSpec& scene,
                         const LidarModel& lidar, double t0, const Extrinsics& ext) {
  if (lidar.channels < 1 || lidar.horiz_res < 1 || !(lidar.rate > 0.0)) {
    throw std::invalid_argument("invalid lidar model");
  }
  const double period = 1.0 / lidar.rate;
  if (t0 < 0.0 || t0 + period > model.duration() + 1e-9) {
    throw std::out_of_range("sweep does not fit inside the trajectory");
  }

  SweepRender out;
  out.distorted.stamp = t0;
  out.reference.stamp = t0;
  const std::size_t max_points =
      static_cast<std::size_t>(lidar.channels) * static_cast<std::size_t>(lidar.horiz_res);
  out.distorted.points.reserve(max_points);
  out.reference.points.reserve(max_points);
  out.point_poses.reserve(max_points);

  for (int col = 0; col < lidar.horiz_res; ++col) {
    const double dt = static_cast<double>(col) * period / lidar.horiz_res;
    const Pose sensor = pose_compose(model.pose(t0 + dt), ext.lidar_to_robot);
    const double azimuth = 2.0 * std::numbers::pi * col / lidar.horiz_res;
    const double ca = std::cos(azimuth);
    const double sa = std::sin(azimuth);

    for (int ch = 0; ch < lidar.channels; ++ch) {
      const double elevation =
          lidar.channels == 1
              ? 0.0
              : -0.5 * lidar.vertical_fov + lidar.vertical_fov * ch / (lidar.channels - 1);
      const double ce = std::cos(elevation);
      const Vec3 dir_sensor(ce * ca, ce * sa, std::sin(elevation));
      const Vec3 dir_world = sensor.orientation * dir_sensor;

      const auto range = ray_hit(scene, sensor.position, dir_world, lidar.max_range);
      if (!range) continue;

      const Vec3 hit_world = sensor.position + *range * dir_world;
      out.reference.points.push_back(TimedPoint{hit_world, dt});
      out.distorted.points.push_back(TimedPoint{sensor.inverse().apply(hit_world), dt});
      out.point_poses.push_back(sensor);
    }
  }
  return out;
}

SweepRender render_sweep(const TrajectorySpec& spec, const SceneSpec& scene,
                         const LidarModel& lidar, double t0, const Extrinsics& ext) {
  return render_sweep(MotionModel(spec), scene, lidar, t0, ext);
}

}  // namespace lio::sim
