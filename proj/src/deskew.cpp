#include "lio/deskew.hpp"

#include <algorithm>
#include <stdexcept>

#include "lio/parallel.hpp"

namespace lio {

DeskewMode parse_deskew_mode(std::string_view name) {
  if (name == "none") return DeskewMode::kNone;
  if (name == "discrete") return DeskewMode::kDiscrete;
  if (name == "continuous") return DeskewMode::kContinuous;
  throw std::invalid_argument("unknown deskew mode: " + std::string(name));
}

std::string_view to_string(DeskewMode mode) {
  switch (mode) {
    case DeskewMode::kNone: return "none";
    case DeskewMode::kDiscrete: return "discrete";
    case DeskewMode::kContinuous: return "continuous";
  }
  return "?";
}

namespace {

DeskewResult deskew_impl(const TimedPointCloud& cloud, const DiscreteTrajectory& traj,
                         DeskewMode mode, const Extrinsics& ext, unsigned threads) {
  DeskewResult out;
  out.cloud.stamp = cloud.stamp;
  out.cloud.points.resize(cloud.points.size());
  if (cloud.points.empty()) return out;

  const double t_lo = traj.start_time();
  const double t_hi = traj.end_time();
  const Pose& mount = ext.lidar_to_robot;

  const auto clamp_time = [&](double t, bool& clamped) {
    if (t < t_lo) {
      clamped = true;
      return t_lo;
    }
    if (t > t_hi) {
      clamped = true;
      return t_hi;
    }
    return t;
  };

  std::vector<unsigned char> clamped_flags(cloud.points.size(), 0);

  if (mode == DeskewMode::kNone) {
    bool clamped = false;
    const Pose world = query_pose(traj, clamp_time(cloud.stamp, clamped));
    parallel_for(
        cloud.points.size(),
        [&](std::size_t i) {
          const TimedPoint& p = cloud.points[i];
          out.cloud.points[i] = TimedPoint{world.apply(mount.apply(p.xyz)), p.dt};
        },
        threads);
    // The single sweep-start transform leaves per-point times untouched.
    if (clamped) {
      out.clamped_points = cloud.points.size();
    }
  } else {
    parallel_for(
        cloud.points.size(),
        [&](std::size_t i) {
          const TimedPoint& p = cloud.points[i];
          bool clamped = false;
          const double t = clamp_time(cloud.stamp + p.dt, clamped);
          clamped_flags[i] = clamped ? 1 : 0;
          Pose world;
          if (mode == DeskewMode::kDiscrete) {
            const TrajectoryKnot& k = traj.knots()[traj.segment_index(t)];
            world = Pose{k.position, k.orientation};
          } else {
            world = query_pose(traj, t);
          }
          out.cloud.points[i] = TimedPoint{world.apply(mount.apply(p.xyz)), p.dt};
        },
        threads);
    std::size_t n = 0;
    for (const auto f : clamped_flags) n += f;
    out.clamped_points = n;
  }

  out.clamp_warning = out.clamped_points * 100 > cloud.points.size();
  return out;
}

}  // namespace

DeskewResult deskew_scan(const TimedPointCloud& cloud, const DiscreteTrajectory& traj,
                         const Extrinsics& ext, unsigned threads) {
  return deskew_impl(cloud, traj, DeskewMode::kContinuous, ext, threads);
}

DeskewResult deskew_cloud(const TimedPointCloud& cloud, const DiscreteTrajectory& traj,
                          DeskewMode mode, const Extrinsics& ext, unsigned threads) {
  return deskew_impl(cloud, traj, mode, ext, threads);
}

}  // namespace lio
