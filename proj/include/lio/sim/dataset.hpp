#pragma once

#include <filesystem>
#include <optional>

#include "lio/io/dataset.hpp"
#include "lio/sim/sensors.hpp"

namespace lio::sim {

/// Everything needed to record one synthetic dataset. The trajectory is always
/// preceded by a static preamble so the consumer can calibrate at rest.
struct SimulationJob {
  TrajectorySpec trajectory;
  SceneSpec scene;
  SimNoiseSpec noise;
  LidarModel lidar;
  double imu_rate = 100.0;
  Extrinsics extrinsics;
  double preamble = 1.0;
};

/// Parses the key-value description used by the `simulate` CLI command.
SimulationJob parse_simulation_spec(const std::filesystem::path& path);

/// Renders the job into `out_dir`: imu.csv, scans/, ground_truth.csv, meta.
/// Returns the written meta block. Deterministic for a fixed seed.
io::DatasetMeta simulate_dataset(const SimulationJob& job, const std::filesystem::path& out_dir,
                                 std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace lio::sim
