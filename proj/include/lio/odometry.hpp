#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lio/config.hpp"
#include "lio/io/dataset.hpp"
#include "lio/keyframe_map.hpp"
#include "lio/trajectory.hpp"

namespace lio {

class NotStaticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CalibrationResult {
  Vec3 gyro_bias = Vec3::Zero();
  Vec3 accel_bias = Vec3::Zero();
  Quat orientation = Quat::Identity();  // gravity-aligned roll/pitch, zero yaw
};

/// Estimate biases and the initial attitude from an assumed-static window:
/// the mean angular rate is the gyro bias, the mean specific-force direction
/// fixes roll/pitch against gravity, and the magnitude surplus along that
/// direction is the accelerometer bias. Uses samples within `duration` of the
/// first stamp; throws NotStaticError when any accel axis exceeds
/// `accel_std_max` standard deviation.
CalibrationResult calibrate_static(std::span<const ImuSample> samples, double duration,
                                   double accel_std_max = 0.3);

struct OdometryRecord {
  enum class Status {
    kOk,
    kBootstrap,           // first scan, map seeded without registration
    kSkippedEmpty,        // nothing left after filtering
    kDegenerateFallback,  // registration rejected, dead-reckoned pose kept
    kRejectedNoCoverage,  // no usable IMU span (includes pre-calibration scans)
  };

  double stamp = 0.0;  // sweep start
  Pose pose;
  Vec3 velocity = Vec3::Zero();
  Vec3 accel_bias = Vec3::Zero();
  Vec3 gyro_bias = Vec3::Zero();
  double wall_ms = 0.0;
  int gicp_iterations = 0;
  int correspondences = 0;
  std::size_t clamped_points = 0;
  Status status = Status::kOk;

  bool has_pose() const {
    return status == Status::kOk || status == Status::kBootstrap ||
           status == Status::kDegenerateFallback;
  }
};

const char* to_string(OdometryRecord::Status status);

/// The odometry engine. IMU samples propagate the state at sensor rate; each
/// finished sweep is motion-corrected, registered against a keyframe submap, and the
/// registered pose corrects the state. All entry points serialize on one
/// internal mutex (single writer); process_scan_blocking additionally waits
/// until the IMU stream covers the sweep, for a live feed from two threads.
class OdometryPipeline {
 public:
  explicit OdometryPipeline(PipelineConfig config);

  /// Feed one raw IMU sample. Returns the propagated state once calibrated;
  /// nullopt while calibrating. Stale stamps are dropped and counted.
  std::optional<RobotState> process_imu(const ImuSample& raw);

  /// Process one sweep (sensor-frame points, sorted by dt). The IMU stream
  /// must already cover the sweep; otherwise the record reports no coverage.
  OdometryRecord process_scan(const TimedPointCloud& raw_cloud);

  /// Live variant: blocks until the IMU stream covers the sweep.
  OdometryRecord process_scan_blocking(const TimedPointCloud& raw_cloud);

  /// Signals waiting scan calls that no more IMU data will arrive.
  void finish();

  bool calibrated() const;
  RobotState state() const;
  std::optional<CalibrationResult> calibration() const;
  const KeyframeMap& map() const { return map_; }
  const PipelineConfig& config() const { return config_; }
  std::size_t dropped_imu() const { return dropped_imu_; }

 private:
  OdometryRecord process_scan_locked(const TimedPointCloud& raw_cloud);
  bool covers_locked(double t_end) const;
  void prune_buffer_locked();

  PipelineConfig config_;

  mutable std::mutex mutex_;
  std::condition_variable imu_advanced_;
  bool finished_ = false;

  // IMU path.
  std::optional<ImuSample> prev_raw_;
  std::vector<ImuSample> calib_window_;
  std::optional<CalibrationResult> calibration_;
  std::deque<ImuSample> buffer_;  // robot-frame samples, from the current anchor on
  std::size_t dropped_imu_ = 0;

  // Scan path.
  RobotState state_;
  RobotState anchor_;  // state snapshot at the previous sweep's covering sample
  double prev_refined_stamp_ = 0.0;
  KeyframeMap map_;

  // Submap reused while the keyframe selection is unchanged.
  struct SubmapCache {
    std::vector<std::uint64_t> ids;
    std::vector<Vec3> points;
    PointCovariances covariances;
    KdTree tree;
  };
  SubmapCache submap_;
};

struct RunResult {
  std::vector<OdometryRecord> records;
  TimedPointCloud map_cloud;

  std::vector<io::TimedPose> trajectory() const;  // records carrying a pose
};

/// Offline driver: replays IMU and scans as one deterministic, time-ordered
/// event stream (a sweep is handed over at the first IMU stamp covering it).
RunResult run_dataset(const io::DatasetReader& reader, const PipelineConfig& config);

/// Live driver: one IMU thread and one scan thread over the same pipeline.
RunResult run_dataset_live(const io::DatasetReader& reader, const PipelineConfig& config);

/// Replays a dataset and writes trajectory.tum, map.ply and records.csv into
/// out_dir. Returns the records.
RunResult run_dataset_to_dir(const std::filesystem::path& dataset_dir,
                             const PipelineConfig& config,
                             const std::filesystem::path& out_dir, bool live = false);

void write_records_csv(const std::filesystem::path& path,
                       const std::vector<OdometryRecord>& records);

}  // namespace lio
