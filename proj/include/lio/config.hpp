#pragma once

#include <filesystem>

#include "lio/deskew.hpp"
#include "lio/gicp.hpp"
#include "lio/keyframe_map.hpp"
#include "lio/observer.hpp"
#include "lio/preprocess.hpp"

namespace lio {

struct PipelineConfig {
  Extrinsics extrinsics;
  FilterSpec filter;
  GicpParams gicp;
  KeyframeThresholds keyframe;
  int submap_n_nearest = 10;
  observer::ObserverGains gains;
  DeskewMode deskew_mode = DeskewMode::kContinuous;
  double calibration_duration = 1.0;      // seconds of assumed-static data
  double calibration_accel_std_max = 0.3; // per-axis accel std gate for "static"
  unsigned threads = 0;                   // 0 = hardware concurrency

  /// Throws std::invalid_argument when a field is out of its documented range.
  void validate() const;
};

/// Loads a flat key-value config. Every field of PipelineConfig is addressable;
/// unknown keys raise std::invalid_argument. Missing keys keep the values from
/// `defaults` (usually defaults with the dataset's extrinsics filled in).
PipelineConfig load_pipeline_config(const std::filesystem::path& path,
                                    const PipelineConfig& defaults = {});

void write_pipeline_config(const std::filesystem::path& path, const PipelineConfig& config);

}  // namespace lio
