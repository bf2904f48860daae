#pragma once

#include <string>
#include <string_view>

#include "lio/preprocess.hpp"
#include "lio/trajectory.hpp"

namespace lio {

enum class DeskewMode {
  kNone,        // one transform at the sweep start for every point
  kDiscrete,    // closest preceding trajectory knot per point
  kContinuous,  // closed-form per-point transform
};

DeskewMode parse_deskew_mode(std::string_view name);
std::string_view to_string(DeskewMode mode);

struct DeskewResult {
  TimedPointCloud cloud;           // world frame; same order and dt values as the input
  std::size_t clamped_points = 0;  // point times outside the trajectory span
  bool clamp_warning = false;      // more than 1% of points clamped
};

/// Motion-correct a sweep into the world frame: each point is mapped by
/// pose(t_point) ∘ lidar_to_robot with t_point = cloud.stamp + point.dt.
/// The input cloud is expected in the robot frame (identity lidar extrinsics)
/// or in the sensor frame with the mounting transform in `ext`. Point times
/// outside the trajectory are clamped to its ends and counted. Data-parallel
/// over points; output is identical for any thread count.
DeskewResult deskew_scan(const TimedPointCloud& cloud, const DiscreteTrajectory& traj,
                         const Extrinsics& ext, unsigned threads = 0);

/// Same contract with a selectable correction scheme.
DeskewResult deskew_cloud(const TimedPointCloud& cloud, const DiscreteTrajectory& traj,
                          DeskewMode mode, const Extrinsics& ext = {}, unsigned threads = 0);

}  // namespace lio
