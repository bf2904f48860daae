#include "lio/preprocess.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_set>

namespace lio {

namespace {

ImuSample rotate_and_compensate(const ImuSample& sample, const Extrinsics& ext,
                                const Vec3& prev_gyro_robot, double dt) {
  const Quat& r_ib = ext.imu_to_robot.orientation;
  const Vec3& offset = ext.imu_to_robot.position;

  ImuSample out;
  out.stamp = sample.stamp;
  out.gyro = r_ib * sample.gyro;

  const Vec3 alpha = dt > 0.0 ? Vec3((out.gyro - prev_gyro_robot) / dt) : Vec3::Zero();
  const Vec3 accel_robot = r_ib * sample.accel;
  out.accel = accel_robot - alpha.cross(offset) - out.gyro.cross(out.gyro.cross(offset));
  return out;
}

}  // namespace

ImuSample compensate_lever_arm(const ImuSample& sample, const Extrinsics& ext) {
  return rotate_and_compensate(sample, ext, Vec3::Zero(), 0.0);
}

std::optional<ImuSample> compensate_lever_arm(const ImuSample& sample, const Extrinsics& ext,
                                              const ImuSample& prev) {
  if (!(prev.stamp < sample.stamp)) return std::nullopt;
  const Vec3 prev_gyro_robot = ext.imu_to_robot.orientation * prev.gyro;
  return rotate_and_compensate(sample, ext, prev_gyro_robot, sample.stamp - prev.stamp);
}

TimedPointCloud filter_cloud(const TimedPointCloud& cloud, const FilterSpec& spec) {
  TimedPointCloud out;
  out.stamp = cloud.stamp;
  out.points.reserve(cloud.points.size());

  for (const auto& p : cloud.points) {
    if (p.xyz.lpNorm<Eigen::Infinity>() < spec.box_half_extent) continue;
    out.points.push_back(p);
  }

  if (spec.voxel_leaf > 0.0 && !out.points.empty()) {
    std::unordered_set<std::uint64_t> occupied;
    occupied.reserve(out.points.size() * 2);
    std::vector<TimedPoint> kept;
    kept.reserve(out.points.size());
    const double inv_leaf = 1.0 / spec.voxel_leaf;
    for (const auto& p : out.points) {
      const auto ix = static_cast<std::int64_t>(std::floor(p.xyz.x() * inv_leaf));
      const auto iy = static_cast<std::int64_t>(std::floor(p.xyz.y() * inv_leaf));
      const auto iz = static_cast<std::int64_t>(std::floor(p.xyz.z() * inv_leaf));
      // 21 bits per axis; collisions would need > 1e6 cells along one axis.
      const std::uint64_t key = (static_cast<std::uint64_t>(ix & 0x1FFFFF) << 42) |
                                (static_cast<std::uint64_t>(iy & 0x1FFFFF) << 21) |
                                static_cast<std::uint64_t>(iz & 0x1FFFFF);
      if (occupied.insert(key).second) kept.push_back(p);
    }
    out.points = std::move(kept);
  }
  return out;
}

}  // namespace lio
