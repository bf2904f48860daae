#include "lio/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lio {

double ate_rmse(const std::vector<io::TimedPose>& estimated,
                const std::vector<io::TimedPose>& truth, double max_dt) {
  if (estimated.empty() || truth.empty()) {
    throw std::invalid_argument("cannot associate empty trajectories");
  }

  std::vector<io::TimedPose> gt = truth;
  std::sort(gt.begin(), gt.end(),
            [](const io::TimedPose& a, const io::TimedPose& b) { return a.stamp < b.stamp; });

  double sum_sq = 0.0;
  std::size_t matched = 0;
  for (const auto& est : estimated) {
    auto it = std::lower_bound(gt.begin(), gt.end(), est.stamp,
                               [](const io::TimedPose& tp, double t) { return tp.stamp < t; });
    const io::TimedPose* best = nullptr;
    if (it != gt.end()) best = &*it;
    if (it != gt.begin()) {
      const auto& prev = *(it - 1);
      if (!best || std::abs(prev.stamp - est.stamp) < std::abs(best->stamp - est.stamp)) {
        best = &prev;
      }
    }
    if (!best || std::abs(best->stamp - est.stamp) >= max_dt) continue;
    sum_sq += (best->pose.position - est.pose.position).squaredNorm();
    ++matched;
  }
  if (matched == 0) throw std::invalid_argument("no poses associated within the stamp gate");
  return std::sqrt(sum_sq / static_cast<double>(matched));
}

double end_to_end_error(const std::vector<io::TimedPose>& estimated) {
  if (estimated.size() < 2) throw std::invalid_argument("need at least two poses");
  return (estimated.front().pose.position - estimated.back().pose.position).norm();
}

TimingStats timing_stats(const std::vector<double>& per_scan_ms) {
  TimingStats stats;
  if (per_scan_ms.empty()) return stats;
  std::vector<double> sorted = per_scan_ms;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (const double v : sorted) sum += v;
  stats.mean_ms = sum / static_cast<double>(sorted.size());
  const auto idx = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(sorted.size()))) - 1;
  stats.p95_ms = sorted[std::min(idx, sorted.size() - 1)];
  return stats;
}

}  // namespace lio
