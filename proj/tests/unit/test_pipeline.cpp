#include <doctest.h>

#include <cmath>
#include <fstream>

#include "lio/metrics.hpp"
#include "lio/odometry.hpp"
#include "lio/sim/dataset.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace lio;

namespace {

std::vector<ImuSample> static_stream(double duration, const Vec3& accel_bias = Vec3::Zero(),
                                     const Vec3& gyro_bias = Vec3::Zero(),
                                     const Vec3& rpy = Vec3::Zero(), double noise_std = 0.0,
                                     std::uint64_t seed = 1) {
  sim::TrajectorySpec spec;
  spec.kind = sim::TrajectoryKind::kStatic;
  spec.start_rpy = rpy;
  spec.duration = duration;
  sim::SimNoiseSpec noise;
  noise.accel_bias = accel_bias;
  noise.gyro_bias = gyro_bias;
  noise.accel_noise_std = noise_std;
  noise.gyro_noise_std = noise_std > 0.0 ? noise_std / 10.0 : 0.0;
  noise.seed = seed;
  return sim::sample_imu(spec, 100.0, noise);
}

sim::SimulationJob small_room_job(sim::TrajectoryKind kind) {
  sim::SimulationJob job;
  job.trajectory.kind = kind;
  job.trajectory.duration = 2.0;
  job.scene = sim::SceneSpec::box_room(6.0, 5.0, 2.5);
  job.lidar.channels = 8;
  job.lidar.horiz_res = 128;
  job.lidar.max_range = 30.0;
  return job;
}

PipelineConfig fast_config() {
  PipelineConfig config;
  config.filter.voxel_leaf = 0.3;
  config.gicp.k_neighbors = 10;
  return config;
}

std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("static calibration on a perfect level stream") {
  const auto samples = static_stream(1.2);
  const auto calib = calibrate_static(samples, 1.0);
  CHECK(calib.gyro_bias.norm() < 1e-12);
  CHECK(calib.accel_bias.norm() < 1e-9);
  CHECK(angular_distance(calib.orientation, Quat::Identity()) < 1e-9);
}

TEST_CASE("injected gyro bias is recovered") {
  const Vec3 bias(0.01, 0.0, 0.0);
  const auto samples = static_stream(1.2, Vec3::Zero(), bias, Vec3::Zero(), 0.02, 5);
  const auto calib = calibrate_static(samples, 1.0);
  // Noise floor: std/sqrt(N) per axis with N ~ 100 samples.
  CHECK((calib.gyro_bias - bias).norm() < 4.0 * (0.002 / std::sqrt(100.0)) * std::sqrt(3.0));
}

TEST_CASE("tilted static stream recovers pitch") {
  const double pitch = 10.0 * M_PI / 180.0;
  const auto samples = static_stream(1.2, Vec3::Zero(), Vec3::Zero(), Vec3(0.0, pitch, 0.0));
  const auto calib = calibrate_static(samples, 1.0);
  const Quat expected = Quat(Eigen::AngleAxisd(pitch, Vec3::UnitY()));
  CHECK(angular_distance(calib.orientation, expected) < 0.01 * M_PI / 180.0);
}

TEST_CASE("a moving window is rejected as not static") {
  sim::TrajectorySpec spec;
  spec.kind = sim::TrajectoryKind::kSinusoid;
  spec.pos_amplitude = Vec3(1.0, 0, 0);
  spec.pos_frequency = Vec3(2.0, 0, 0);
  spec.duration = 1.5;
  const auto samples = sim::sample_imu(spec, 100.0, {});
  CHECK_THROWS_AS(calibrate_static(samples, 1.0), NotStaticError);
}

TEST_CASE("accel bias along gravity is recovered") {
  const Vec3 bias(0.0, 0.0, 0.15);
  const auto samples = static_stream(1.2, bias);
  const auto calib = calibrate_static(samples, 1.0);
  CHECK((calib.accel_bias - bias).norm() < 1e-9);
}

TEST_CASE("ate_rmse trivial values and brute-force oracle") {
  std::vector<io::TimedPose> est;
  std::vector<io::TimedPose> gt;
  for (int i = 0; i < 100; ++i) {
    const double t = i * 0.1;
    est.push_back({t, Pose{Vec3(t, 0, 0), Quat::Identity()}});
    gt.push_back({t + 0.001, Pose{Vec3(t, 0, 0), Quat::Identity()}});
  }
  CHECK(ate_rmse(est, est) == 0.0);

  auto offset = est;
  for (auto& tp : offset) tp.pose.position += Vec3(0, 1, 0);
  CHECK(ate_rmse(offset, gt) == doctest::Approx(1.0).epsilon(1e-9));

  std::mt19937_64 rng(61);
  std::vector<io::TimedPose> ragged_est;
  std::vector<io::TimedPose> ragged_gt;
  std::uniform_real_distribution<double> jitter(-0.004, 0.004);
  for (int i = 0; i < 60; ++i) {
    ragged_est.push_back({i * 0.1 + jitter(rng), oracles::random_pose(rng, 5.0)});
    ragged_gt.push_back({i * 0.1 + jitter(rng), oracles::random_pose(rng, 5.0)});
  }
  CHECK(ate_rmse(ragged_est, ragged_gt) ==
        doctest::Approx(oracles::brute_force_ate(ragged_est, ragged_gt)).epsilon(1e-12));

  // Nothing within the gate: an error, not a silent zero.
  std::vector<io::TimedPose> late = {{100.0, Pose{}}};
  CHECK_THROWS_AS(ate_rmse(late, gt), std::invalid_argument);
}

TEST_CASE("end_to_end_error basics") {
  std::vector<io::TimedPose> single = {{0.0, Pose{}}};
  CHECK_THROWS_AS(end_to_end_error(single), std::invalid_argument);

  std::vector<io::TimedPose> pair = {{0.0, Pose{}}, {1.0, Pose{}}};
  CHECK(end_to_end_error(pair) == 0.0);

  pair.back().pose.position = Vec3(3, 4, 0);
  CHECK(end_to_end_error(pair) == doctest::Approx(5.0));
}

TEST_CASE("timing stats mean and p95") {
  std::vector<double> ms;
  for (int i = 1; i <= 100; ++i) ms.push_back(static_cast<double>(i));
  const auto stats = timing_stats(ms);
  CHECK(stats.mean_ms == doctest::Approx(50.5));
  CHECK(stats.p95_ms == doctest::Approx(95.0));
}

TEST_CASE("imu stream calibrates the pipeline and propagates") {
  PipelineConfig config = fast_config();
  OdometryPipeline pipeline(config);

  const auto samples = static_stream(2.0);
  std::size_t live = 0;
  for (const auto& s : samples) {
    if (pipeline.process_imu(s)) ++live;
  }
  CHECK(pipeline.calibrated());
  CHECK(live == samples.size() - 100);  // one second of calibration at 100 Hz
  CHECK(pipeline.state().position.norm() < 1e-6);

  // Stale stamps are dropped and counted.
  ImuSample stale;
  stale.stamp = 0.5;
  CHECK(!pipeline.process_imu(stale).has_value());
  CHECK(pipeline.dropped_imu() == 1);
}

TEST_CASE("static scene: ten scans stay within a millimeter") {
  testing::TempDir dir("static_run");
  auto job = small_room_job(sim::TrajectoryKind::kStatic);
  job.trajectory.duration = 1.2;  // preamble + 1.2 s => 22 sweeps
  sim::simulate_dataset(job, dir.path());

  const io::DatasetReader reader(dir.path());
  const auto result = run_dataset(reader, fast_config());

  REQUIRE(result.records.size() >= 10);
  std::size_t with_pose = 0;
  for (const auto& r : result.records) {
    if (r.has_pose()) ++with_pose;
  }
  CHECK(with_pose >= 10);

  const double ate = ate_rmse(result.trajectory(), reader.ground_truth());
  CHECK(ate < 1e-3);
}

TEST_CASE("records are strictly ordered with scan stamps") {
  testing::TempDir dir("ordering");
  auto job = small_room_job(sim::TrajectoryKind::kStatic);
  job.trajectory.duration = 1.0;
  sim::simulate_dataset(job, dir.path());

  const io::DatasetReader reader(dir.path());
  const auto result = run_dataset(reader, fast_config());
  REQUIRE(!result.records.empty());
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    CHECK(result.records[i].stamp == reader.scan_index()[i].stamp);
    if (i > 0) CHECK(result.records[i].stamp > result.records[i - 1].stamp);
  }
  // Sweeps rendered before calibration completes are flagged, not silently lost.
  CHECK(result.records.front().status == OdometryRecord::Status::kRejectedNoCoverage);
}

TEST_CASE("offline replay is byte deterministic") {
  testing::TempDir dir("determinism");
  auto job = small_room_job(sim::TrajectoryKind::kSinusoid);
  job.trajectory.duration = 1.5;
  job.trajectory.pos_amplitude = Vec3(0.8, 0.5, 0.1);
  job.trajectory.pos_frequency = Vec3(0.4, 0.5, 0.3);
  job.trajectory.pos_phase = Vec3(M_PI / 2, M_PI / 2, M_PI / 2);
  job.noise.accel_noise_std = 0.02;
  job.noise.gyro_noise_std = 0.002;
  job.noise.seed = 11;
  sim::simulate_dataset(job, dir.path());

  run_dataset_to_dir(dir.path(), fast_config(), dir / "out1");
  run_dataset_to_dir(dir.path(), fast_config(), dir / "out2");
  CHECK(file_bytes(dir / "out1" / "trajectory.tum") == file_bytes(dir / "out2" / "trajectory.tum"));
  CHECK(file_bytes(dir / "out1" / "map.ply") == file_bytes(dir / "out2" / "map.ply"));
}

TEST_CASE("live mode processes every scan and lands near the offline result") {
  testing::TempDir dir("live");
  auto job = small_room_job(sim::TrajectoryKind::kSinusoid);
  job.trajectory.duration = 1.5;
  job.trajectory.pos_amplitude = Vec3(0.5, 0.3, 0.0);
  job.trajectory.pos_frequency = Vec3(0.4, 0.5, 0.0);
  job.trajectory.pos_phase = Vec3(M_PI / 2, M_PI / 2, 0.0);
  sim::simulate_dataset(job, dir.path());

  const io::DatasetReader reader(dir.path());
  const auto offline = run_dataset(reader, fast_config());
  const auto live = run_dataset_live(reader, fast_config());

  REQUIRE(live.records.size() == offline.records.size());
  const auto off_traj = offline.trajectory();
  const auto live_traj = live.trajectory();
  REQUIRE(!off_traj.empty());
  REQUIRE(live_traj.size() == off_traj.size());
  CHECK((live_traj.back().pose.position - off_traj.back().pose.position).norm() < 0.1);
}

TEST_CASE("extrinsic offsets are honored end to end") {
  testing::TempDir dir("extrinsics");
  auto job = small_room_job(sim::TrajectoryKind::kSinusoid);
  job.trajectory.duration = 1.5;
  job.trajectory.pos_amplitude = Vec3(0.6, 0.0, 0.0);
  job.trajectory.pos_frequency = Vec3(0.4, 0.0, 0.0);
  job.trajectory.pos_phase = Vec3(M_PI / 2, 0.0, 0.0);
  job.extrinsics.lidar_to_robot.position = Vec3(0.12, 0.0, 0.08);
  job.extrinsics.lidar_to_robot.orientation = exp_so3(Vec3(0, 0, 0.2));
  job.extrinsics.imu_to_robot.position = Vec3(-0.05, 0.02, 0.0);
  sim::simulate_dataset(job, dir.path());

  const io::DatasetReader reader(dir.path());
  PipelineConfig config = fast_config();
  config.extrinsics = reader.meta().extrinsics;
  const auto result = run_dataset(reader, config);

  const double ate = ate_rmse(result.trajectory(), reader.ground_truth());
  CHECK(ate < 0.05);
}

TEST_CASE("empty scans are flagged and skipped") {
  PipelineConfig config = fast_config();
  OdometryPipeline pipeline(config);
  for (const auto& s : static_stream(1.5)) pipeline.process_imu(s);
  REQUIRE(pipeline.calibrated());

  TimedPointCloud inside_box;
  inside_box.stamp = 1.05;
  for (int i = 0; i < 50; ++i) inside_box.points.push_back({Vec3(0.1, 0.1, 0.0), i * 1e-4});
  const auto rec = pipeline.process_scan(inside_box);
  CHECK(rec.status == OdometryRecord::Status::kSkippedEmpty);
  CHECK(pipeline.map().empty());
}

TEST_CASE("scans without IMU coverage are rejected and counted") {
  PipelineConfig config = fast_config();
  OdometryPipeline pipeline(config);
  for (const auto& s : static_stream(1.5)) pipeline.process_imu(s);

  TimedPointCloud future;
  future.stamp = 5.0;
  future.points = {{Vec3(3, 0, 0), 0.0}, {Vec3(0, 3, 0), 0.05}};
  const auto rec = pipeline.process_scan(future);
  CHECK(rec.status == OdometryRecord::Status::kRejectedNoCoverage);
}

}  // TEST_SUITE
