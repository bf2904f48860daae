#include "lio/keyframe_map.hpp"

#include <algorithm>

#include "lio/preprocess.hpp"

namespace lio {

std::uint64_t KeyframeMap::insert(Keyframe kf) {
  kf.id = next_id_++;
  keyframes_.push_back(std::move(kf));
  return keyframes_.back().id;
}

bool is_keyframe(const Pose& pose, const KeyframeMap& map, const KeyframeThresholds& thresholds) {
  if (map.empty()) return true;

  double best_sq = std::numeric_limits<double>::infinity();
  const Keyframe* nearest = nullptr;
  for (const auto& kf : map.keyframes()) {
    const double sq = (kf.pose.position - pose.position).squaredNorm();
    if (sq < best_sq) {
      best_sq = sq;
      nearest = &kf;
    }
  }
  if (best_sq >= thresholds.distance * thresholds.distance) return true;
  return angular_distance(pose.orientation, nearest->pose.orientation) >= thresholds.angle;
}

Submap extract_submap(const KeyframeMap& map, const Pose& pose, int n_nearest) {
  if (map.empty()) throw std::invalid_argument("cannot extract a submap from an empty map");

  struct Ranked {
    double sq_dist;
    std::size_t index;
    std::uint64_t id;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const auto& kf = map.keyframes()[i];
    ranked.push_back({(kf.pose.position - pose.position).squaredNorm(), i, kf.id});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.sq_dist != b.sq_dist) return a.sq_dist < b.sq_dist;
    return a.id < b.id;
  });
  const std::size_t take = std::min<std::size_t>(std::max(n_nearest, 0), ranked.size());

  Submap out;
  std::size_t total = 0;
  for (std::size_t i = 0; i < take; ++i) total += map.keyframes()[ranked[i].index].cloud.size();
  out.cloud.points.reserve(total);
  out.covariances.reserve(total);
  out.keyframe_ids.reserve(take);

  for (std::size_t i = 0; i < take; ++i) {
    const auto& kf = map.keyframes()[ranked[i].index];
    out.keyframe_ids.push_back(kf.id);
    out.cloud.points.insert(out.cloud.points.end(), kf.cloud.points.begin(),
                            kf.cloud.points.end());
    out.covariances.insert(out.covariances.end(), kf.covariances.begin(), kf.covariances.end());
  }
  return out;
}

TimedPointCloud export_map(const KeyframeMap& map, double voxel_leaf) {
  TimedPointCloud out;
  for (const auto& kf : map.keyframes()) {
    out.points.insert(out.points.end(), kf.cloud.points.begin(), kf.cloud.points.end());
  }
  if (voxel_leaf > 0.0) {
    out = filter_cloud(out, FilterSpec{0.0, voxel_leaf});
  }
  return out;
}

}  // namespace lio
