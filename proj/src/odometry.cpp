#include "lio/odometry.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "lio/deskew.hpp"
#include "lio/io/keyvalue.hpp"
#include "lio/metrics.hpp"
#include "lio/observer.hpp"
#include "lio/parallel.hpp"

namespace lio {

namespace {

TimedPointCloud transform_cloud(const TimedPointCloud& in, const Pose& pose, unsigned threads) {
  TimedPointCloud out;
  out.stamp = in.stamp;
  out.points.resize(in.points.size());
  parallel_for(
      in.points.size(),
      [&](std::size_t i) {
        out.points[i] = TimedPoint{pose.apply(in.points[i].xyz), in.points[i].dt};
      },
      threads);
  return out;
}

PointCovariances rotate_covariances(const PointCovariances& in, const Quat& q) {
  const Mat3 rot = q.toRotationMatrix();
  PointCovariances out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = rot * in[i] * rot.transpose();
  return out;
}

}  // namespace

CalibrationResult calibrate_static(std::span<const ImuSample> samples, double duration,
                                   double accel_std_max) {
  if (samples.empty()) throw std::invalid_argument("calibration needs samples");
  const double t0 = samples.front().stamp;

  Vec3 accel_mean = Vec3::Zero();
  Vec3 gyro_mean = Vec3::Zero();
  std::size_t n = 0;
  for (const auto& s : samples) {
    if (s.stamp - t0 > duration) break;
    accel_mean += s.accel;
    gyro_mean += s.gyro;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("calibration window too short");
  accel_mean /= static_cast<double>(n);
  gyro_mean /= static_cast<double>(n);

  Vec3 accel_var = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 d = samples[i].accel - accel_mean;
    accel_var += d.cwiseProduct(d);
  }
  accel_var /= static_cast<double>(n);
  if (accel_var.cwiseSqrt().maxCoeff() > accel_std_max) {
    throw NotStaticError("accelerometer variance too high for a static window");
  }
  if (accel_mean.norm() < 0.5 * kGravityMagnitude) {
    throw NotStaticError("gravity not observed in the calibration window");
  }

  CalibrationResult out;
  out.gyro_bias = gyro_mean;
  // Minimal rotation taking the measured specific force to world up: fixes
  // roll and pitch, leaves yaw at zero.
  out.orientation = Quat::FromTwoVectors(accel_mean, Vec3::UnitZ()).normalized();
  out.accel_bias = (accel_mean.norm() - kGravityMagnitude) * accel_mean.normalized();
  return out;
}

const char* to_string(OdometryRecord::Status status) {
  switch (status) {
    case OdometryRecord::Status::kOk: return "ok";
    case OdometryRecord::Status::kBootstrap: return "bootstrap";
    case OdometryRecord::Status::kSkippedEmpty: return "skipped_empty";
    case OdometryRecord::Status::kDegenerateFallback: return "degenerate_fallback";
    case OdometryRecord::Status::kRejectedNoCoverage: return "rejected_no_coverage";
  }
  return "?";
}

OdometryPipeline::OdometryPipeline(PipelineConfig config) : config_(std::move(config)) {
  config_.validate();
  config_.gicp.threads = config_.threads;
}

bool OdometryPipeline::calibrated() const {
  std::lock_guard lock(mutex_);
  return calibration_.has_value();
}

RobotState OdometryPipeline::state() const {
  std::lock_guard lock(mutex_);
  return state_;
}

std::optional<CalibrationResult> OdometryPipeline::calibration() const {
  std::lock_guard lock(mutex_);
  return calibration_;
}

void OdometryPipeline::finish() {
  {
    std::lock_guard lock(mutex_);
    finished_ = true;
  }
  imu_advanced_.notify_all();
}

bool OdometryPipeline::covers_locked(double t_end) const {
  return calibration_ && !buffer_.empty() && buffer_.back().stamp >= t_end;
}

void OdometryPipeline::prune_buffer_locked() {
  while (!buffer_.empty() && buffer_.front().stamp < anchor_.stamp) buffer_.pop_front();
}

std::optional<RobotState> OdometryPipeline::process_imu(const ImuSample& raw) {
  std::lock_guard lock(mutex_);
  if (!raw.finite() || (prev_raw_ && raw.stamp <= prev_raw_->stamp)) {
    ++dropped_imu_;
    return std::nullopt;
  }

  ImuSample sample;
  if (prev_raw_) {
    sample = *compensate_lever_arm(raw, config_.extrinsics, *prev_raw_);
  } else {
    sample = compensate_lever_arm(raw, config_.extrinsics);
  }
  prev_raw_ = raw;

  if (!calibration_) {
    if (!calib_window_.empty() &&
        sample.stamp - calib_window_.front().stamp >= config_.calibration_duration) {
      calibration_ = calibrate_static(calib_window_, config_.calibration_duration,
                                      config_.calibration_accel_std_max);
      state_ = RobotState{};
      state_.orientation = calibration_->orientation;
      state_.accel_bias = calibration_->accel_bias;
      state_.gyro_bias = calibration_->gyro_bias;
      state_.stamp = sample.stamp;
      anchor_ = state_;
      prev_refined_stamp_ = sample.stamp;
      buffer_.push_back(sample);
      calib_window_.clear();
      calib_window_.shrink_to_fit();
      imu_advanced_.notify_all();
      return state_;
    }
    calib_window_.push_back(sample);
    return std::nullopt;
  }

  const double dt = sample.stamp - state_.stamp;
  state_ = observer::propagate(state_, sample, dt);
  buffer_.push_back(sample);
  imu_advanced_.notify_all();
  return state_;
}

OdometryRecord OdometryPipeline::process_scan(const TimedPointCloud& raw_cloud) {
  std::lock_guard lock(mutex_);
  return process_scan_locked(raw_cloud);
}

OdometryRecord OdometryPipeline::process_scan_blocking(const TimedPointCloud& raw_cloud) {
  std::unique_lock lock(mutex_);
  if (!raw_cloud.points.empty()) {
    const double sweep_end = raw_cloud.stamp + raw_cloud.points.back().dt;
    imu_advanced_.wait(lock, [&] { return finished_ || covers_locked(sweep_end); });
  }
  return process_scan_locked(raw_cloud);
}

OdometryRecord OdometryPipeline::process_scan_locked(const TimedPointCloud& raw_cloud) {
  const auto t_start = std::chrono::steady_clock::now();
  OdometryRecord rec;
  rec.stamp = raw_cloud.stamp;

  const auto finish_record = [&](OdometryRecord::Status status) {
    rec.status = status;
    rec.velocity = state_.velocity;
    rec.accel_bias = state_.accel_bias;
    rec.gyro_bias = state_.gyro_bias;
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            t_start)
                      .count();
    return rec;
  };

  if (!calibration_ || raw_cloud.stamp < anchor_.stamp || raw_cloud.points.empty()) {
    rec.pose = state_.pose();
    return finish_record(raw_cloud.points.empty() && calibration_
                             ? OdometryRecord::Status::kSkippedEmpty
                             : OdometryRecord::Status::kRejectedNoCoverage);
  }

  const double sweep_end = raw_cloud.stamp + raw_cloud.points.back().dt;
  if (!covers_locked(sweep_end)) {
    rec.pose = state_.pose();
    return finish_record(OdometryRecord::Status::kRejectedNoCoverage);
  }

  const TimedPointCloud filtered = filter_cloud(raw_cloud, config_.filter);
  if (filtered.size() < static_cast<std::size_t>(config_.gicp.k_neighbors)) {
    rec.pose = state_.pose();
    return finish_record(OdometryRecord::Status::kSkippedEmpty);
  }

  // Coarse trajectory over the sweep, seeded by the sample at the anchor stamp.
  std::vector<ImuSample> slice;
  slice.reserve(buffer_.size());
  for (const auto& s : buffer_) {
    slice.push_back(s);
    if (s.stamp >= sweep_end) break;
  }
  if (slice.size() < 2) {
    rec.pose = state_.pose();
    return finish_record(OdometryRecord::Status::kRejectedNoCoverage);
  }
  const DiscreteTrajectory traj = integrate_imu(anchor_, slice);

  DeskewResult deskewed =
      deskew_cloud(filtered, traj, config_.deskew_mode, config_.extrinsics, config_.threads);
  rec.clamped_points = deskewed.clamped_points;

  const auto covs = estimate_covariances(deskewed.cloud.positions(), config_.gicp.k_neighbors,
                                         config_.gicp.plane_epsilon, config_.threads);

  const auto prior_pose_at = [&](double t) {
    return query_pose(traj, std::clamp(t, traj.start_time(), traj.end_time()));
  };

  Pose delta;
  bool bootstrap = false;
  bool degenerate = false;

  if (map_.empty()) {
    bootstrap = true;
  } else {
    const Submap submap = extract_submap(map_, prior_pose_at(raw_cloud.stamp),
                                         config_.submap_n_nearest);
    if (submap.keyframe_ids != submap_.ids) {
      submap_.ids = submap.keyframe_ids;
      submap_.points = submap.cloud.positions();
      submap_.covariances = submap.covariances;
      submap_.tree = KdTree(submap_.points);
    }
    try {
      const AlignResult result =
          align(deskewed.cloud.positions(), covs.covariances, submap_.points,
                submap_.covariances, submap_.tree, config_.gicp);
      rec.gicp_iterations = result.iterations;
      rec.correspondences = result.correspondence_count;
      if (result.delta.position.allFinite() && result.delta.orientation.coeffs().allFinite()) {
        delta = result.delta;
      } else {
        degenerate = true;
        delta = Pose{};
      }
    } catch (const DegenerateRegistrationError&) {
      degenerate = true;
      delta = Pose{};
    }
  }

  const Pose refined_at_scan = pose_compose(delta, prior_pose_at(raw_cloud.stamp));

  // State correction against this sweep's registered pose, applied at the
  // trajectory's own reference time.
  const double t_ref = traj.end_time();
  if (!bootstrap && !degenerate) {
    const TrajectoryKnot& last = traj.knots().back();
    const Pose measured = pose_compose(delta, Pose{last.position, last.orientation});
    const double dt_k = t_ref - prev_refined_stamp_;
    if (dt_k > 0.0) state_ = observer::update(state_, measured, dt_k, config_.gains);
  }
  prev_refined_stamp_ = t_ref;

  if (bootstrap || is_keyframe(refined_at_scan, map_, config_.keyframe)) {
    Keyframe kf;
    kf.pose = refined_at_scan;
    kf.cloud = transform_cloud(deskewed.cloud, delta, config_.threads);
    kf.covariances = rotate_covariances(covs.covariances, delta.orientation);
    map_.insert(std::move(kf));
  }

  anchor_ = state_;
  prune_buffer_locked();

  rec.pose = refined_at_scan;
  return finish_record(bootstrap ? OdometryRecord::Status::kBootstrap
                       : degenerate ? OdometryRecord::Status::kDegenerateFallback
                                    : OdometryRecord::Status::kOk);
}

std::vector<io::TimedPose> RunResult::trajectory() const {
  std::vector<io::TimedPose> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.has_pose()) out.push_back(io::TimedPose{r.stamp, r.pose});
  }
  return out;
}

RunResult run_dataset(const io::DatasetReader& reader, const PipelineConfig& config) {
  OdometryPipeline pipeline(config);
  RunResult out;
  const double period = 1.0 / reader.meta().lidar_rate;
  const auto& scans = reader.scan_index();
  std::size_t next_scan = 0;

  for (const auto& sample : reader.imu()) {
    pipeline.process_imu(sample);
    while (next_scan < scans.size() &&
           scans[next_scan].stamp + period <= sample.stamp + 1e-12) {
      out.records.push_back(pipeline.process_scan(reader.read_scan(scans[next_scan])));
      ++next_scan;
    }
  }
  while (next_scan < scans.size()) {
    out.records.push_back(pipeline.process_scan(reader.read_scan(scans[next_scan])));
    ++next_scan;
  }

  out.map_cloud = export_map(pipeline.map(), config.filter.voxel_leaf);
  return out;
}

RunResult run_dataset_live(const io::DatasetReader& reader, const PipelineConfig& config) {
  OdometryPipeline pipeline(config);
  RunResult out;

  std::thread imu_thread([&] {
    for (const auto& sample : reader.imu()) pipeline.process_imu(sample);
    pipeline.finish();
  });

  for (const auto& entry : reader.scan_index()) {
    out.records.push_back(pipeline.process_scan_blocking(reader.read_scan(entry)));
  }
  imu_thread.join();

  out.map_cloud = export_map(pipeline.map(), config.filter.voxel_leaf);
  return out;
}

RunResult run_dataset_to_dir(const std::filesystem::path& dataset_dir,
                             const PipelineConfig& config,
                             const std::filesystem::path& out_dir, bool live) {
  const io::DatasetReader reader(dataset_dir);
  std::filesystem::create_directories(out_dir);
  RunResult result = live ? run_dataset_live(reader, config) : run_dataset(reader, config);
  io::write_tum_trajectory(out_dir / "trajectory.tum", result.trajectory());
  io::write_ply(out_dir / "map.ply", result.map_cloud);
  write_records_csv(out_dir / "records.csv", result.records);
  return result;
}

void write_records_csv(const std::filesystem::path& path,
                       const std::vector<OdometryRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "stamp_s,status,wall_ms,gicp_iterations,correspondences,clamped_points,"
         "tx,ty,tz,qw,qx,qy,qz,vx,vy,vz\n";
  for (const auto& r : records) {
    out << io::format_double(r.stamp) << ',' << to_string(r.status) << ','
        << io::format_double(r.wall_ms) << ',' << r.gicp_iterations << ',' << r.correspondences
        << ',' << r.clamped_points << ',' << io::format_double(r.pose.position.x()) << ','
        << io::format_double(r.pose.position.y()) << ',' << io::format_double(r.pose.position.z())
        << ',' << io::format_double(r.pose.orientation.w()) << ','
        << io::format_double(r.pose.orientation.x()) << ','
        << io::format_double(r.pose.orientation.y()) << ','
        << io::format_double(r.pose.orientation.z()) << ','
        << io::format_double(r.velocity.x()) << ',' << io::format_double(r.velocity.y()) << ','
        << io::format_double(r.velocity.z()) << '\n';
  }
}

}  // namespace lio
