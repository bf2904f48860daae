#pragma once

#include <vector>

#include "lio/io/dataset.hpp"

namespace lio {

/// RMSE of translational residuals between estimate and ground truth in the
/// shared world frame, associating each estimated pose with the ground-truth
/// pose of nearest stamp within max_dt. Throws std::invalid_argument when no
/// pair associates.
double ate_rmse(const std::vector<io::TimedPose>& estimated,
                const std::vector<io::TimedPose>& truth, double max_dt = 0.01);

/// Distance between the first and last estimated positions; the loop-closure
/// error on circuits. Requires at least two poses.
double end_to_end_error(const std::vector<io::TimedPose>& estimated);

struct TimingStats {
  double mean_ms = 0.0;
  double p95_ms = 0.0;
};

TimingStats timing_stats(const std::vector<double>& per_scan_ms);

}  // namespace lio
