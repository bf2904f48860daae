#pragma once

#include <cstdint>
#include <vector>

#include "lio/geometry.hpp"
#include "lio/gicp.hpp"

namespace lio {

struct Keyframe {
  Pose pose;
  TimedPointCloud cloud;  // motion corrected, world frame
  PointCovariances covariances;
  std::uint64_t id = 0;
};

struct KeyframeThresholds {
  double distance = 1.0;               // meters
  double angle = 0.5235987755982988;   // radians (30 degrees)
};

class KeyframeMap {
 public:
  const std::vector<Keyframe>& keyframes() const { return keyframes_; }
  std::size_t size() const { return keyframes_.size(); }
  bool empty() const { return keyframes_.empty(); }

  /// Append, assigning the next id. Returns the assigned id.
  std::uint64_t insert(Keyframe kf);

 private:
  std::vector<Keyframe> keyframes_;
  std::uint64_t next_id_ = 0;
};

/// Admission test: true when the map is empty, or the pose is at least
/// `distance` from every keyframe, or rotated at least `angle` away from the
/// translationally nearest one.
bool is_keyframe(const Pose& pose, const KeyframeMap& map, const KeyframeThresholds& thresholds);

struct Submap {
  TimedPointCloud cloud;
  PointCovariances covariances;
  std::vector<std::uint64_t> keyframe_ids;  // selection, nearest first
};

/// Concatenated clouds and cached covariances of the n_nearest keyframes by
/// pose distance; ties break toward the lower id.
Submap extract_submap(const KeyframeMap& map, const Pose& pose, int n_nearest);

/// All keyframe clouds, optionally voxel-downsampled (first point per cell kept).
TimedPointCloud export_map(const KeyframeMap& map, double voxel_leaf = 0.0);

}  // namespace lio
