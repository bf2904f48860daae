#pragma once

#include <optional>

#include "lio/geometry.hpp"

namespace lio {

/// Static sensor mounting, expressed as sensor-frame -> robot-frame transforms.
struct Extrinsics {
  Pose lidar_to_robot;
  Pose imu_to_robot;
};

struct FilterSpec {
  double box_half_extent = 0.5;  // crop cube half side; 0 disables
  double voxel_leaf = 0.25;      // 0 disables
};

/// Express an IMU sample in the robot frame and remove the rigid-body
/// acceleration induced by the sensor offset: a_R = R(a_B) - alpha x r - w x (w x r),
/// where r is the IMU position in the robot frame. The angular acceleration
/// alpha is the backward difference against `prev` (a raw sample); the overload
/// without prev assumes alpha = 0. Returns nullopt when prev.stamp >= sample.stamp.
ImuSample compensate_lever_arm(const ImuSample& sample, const Extrinsics& ext);
std::optional<ImuSample> compensate_lever_arm(const ImuSample& sample, const Extrinsics& ext,
                                              const ImuSample& prev);

/// Drop points with ||xyz||_inf < box_half_extent, then voxel-downsample keeping
/// the first point in time per cell. Point order (and so the sort by dt) is
/// preserved; an all-filtered input yields an empty cloud, which callers treat
/// as the empty-scan condition.
TimedPointCloud filter_cloud(const TimedPointCloud& cloud, const FilterSpec& spec);

}  // namespace lio
