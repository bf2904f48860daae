#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "lio/geometry.hpp"
#include "lio/preprocess.hpp"

namespace lio::io {

struct TimedPose {
  double stamp = 0.0;
  Pose pose;
};

struct DatasetMeta {
  double imu_rate = 100.0;
  double lidar_rate = 10.0;
  int lidar_channels = 32;
  int lidar_horiz_res = 512;
  double lidar_max_range = 60.0;
  Extrinsics extrinsics;
  double preamble = 1.0;
  double duration = 0.0;  // total, including the preamble
  std::uint64_t seed = 0;
};

// Quaternion orderings are deliberately explicit per format:
//   meta / ground_truth.csv / pose key-values: qw qx qy qz
//   TUM trajectories:                          qx qy qz qw

void write_imu_csv(const std::filesystem::path& path, const std::vector<ImuSample>& samples);
std::vector<ImuSample> read_imu_csv(const std::filesystem::path& path);

void write_scan_csv(const std::filesystem::path& path, const TimedPointCloud& cloud);
/// Reads one sweep; points are sorted by dt on ingestion and each dt must lie
/// in [0, sweep_period) when a positive period is given.
TimedPointCloud read_scan_csv(const std::filesystem::path& path, double stamp,
                              double sweep_period = 0.0);

struct ScanIndexEntry {
  int id = 0;
  double stamp = 0.0;
};
void write_scan_index(const std::filesystem::path& path, const std::vector<ScanIndexEntry>& idx);
std::vector<ScanIndexEntry> read_scan_index(const std::filesystem::path& path);

void write_ground_truth_csv(const std::filesystem::path& path, const std::vector<TimedPose>& gt);
std::vector<TimedPose> read_ground_truth_csv(const std::filesystem::path& path);

void write_meta(const std::filesystem::path& path, const DatasetMeta& meta);
DatasetMeta read_meta(const std::filesystem::path& path);

/// TUM format: "stamp tx ty tz qx qy qz qw", one pose per line.
void write_tum_trajectory(const std::filesystem::path& path, const std::vector<TimedPose>& poses);
std::vector<TimedPose> read_tum_trajectory(const std::filesystem::path& path);

/// Accepts either a TUM trajectory or a ground_truth.csv (detected by header).
std::vector<TimedPose> read_pose_file(const std::filesystem::path& path);

/// Binary little-endian PLY with float x, y, z properties.
void write_ply(const std::filesystem::path& path, const TimedPointCloud& cloud);
std::vector<Vec3> read_ply(const std::filesystem::path& path);

std::filesystem::path scan_file_name(int id);  // scans/NNNNNN.csv

/// Directory handle for one recorded dataset.
class DatasetReader {
 public:
  explicit DatasetReader(std::filesystem::path dir);

  const DatasetMeta& meta() const { return meta_; }
  const std::vector<ImuSample>& imu() const { return imu_; }
  const std::vector<ScanIndexEntry>& scan_index() const { return scans_; }
  TimedPointCloud read_scan(const ScanIndexEntry& entry) const;
  std::vector<TimedPose> ground_truth() const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  DatasetMeta meta_;
  std::vector<ImuSample> imu_;
  std::vector<ScanIndexEntry> scans_;
};

}  // namespace lio::io
