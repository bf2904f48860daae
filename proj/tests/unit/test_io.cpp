#include <doctest.h>

#include <fstream>

#include "lio/config.hpp"
#include "lio/io/dataset.hpp"
#include "lio/io/keyvalue.hpp"
#include "lio/sim/dataset.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace lio;

TEST_SUITE("io") {

TEST_CASE("key-value parsing, comments and errors") {
  const auto kv = io::KeyValueFile::parse("a = 1.5\n# comment\n b = hello  # trailing\nv = 1 2 3\n");
  CHECK(kv.get_double("a") == 1.5);
  CHECK(kv.get_string("b") == "hello");
  CHECK((kv.get_vec3("v") - Vec3(1, 2, 3)).norm() == 0.0);
  CHECK_THROWS_AS(kv.get_double("missing"), std::invalid_argument);

  CHECK_THROWS_AS(io::KeyValueFile::parse("novalue\n"), std::invalid_argument);
  CHECK_THROWS_AS(io::KeyValueFile::parse("a = 1\na = 2\n"), std::invalid_argument);

  const auto strict = io::KeyValueFile::parse("known = 1\nbogus = 2\n");
  strict.get_double("known");
  CHECK_THROWS_WITH_AS(strict.require_all_consumed(), "unknown keys: bogus",
                       std::invalid_argument);
}

TEST_CASE("format_double round-trips exactly") {
  std::mt19937_64 rng(55);
  std::normal_distribution<double> n(0.0, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = n(rng) * std::pow(10.0, (i % 17) - 8);
    CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0) == "1");
}

TEST_CASE("imu csv round trip is exact") {
  testing::TempDir dir("imu");
  std::mt19937_64 rng(56);
  std::vector<ImuSample> samples;
  for (int i = 0; i < 200; ++i) {
    ImuSample s;
    s.stamp = i * 0.01 + 1e-7 * i;
    s.accel = oracles::random_vec3(rng, 20.0);
    s.gyro = oracles::random_vec3(rng, 3.0);
    samples.push_back(s);
  }
  io::write_imu_csv(dir / "imu.csv", samples);
  const auto back = io::read_imu_csv(dir / "imu.csv");
  REQUIRE(back.size() == samples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].stamp == samples[i].stamp);
    CHECK(back[i].accel.x() == samples[i].accel.x());
    CHECK(back[i].gyro.z() == samples[i].gyro.z());
  }
}

TEST_CASE("scan csv round trip sorts by time and validates dt") {
  testing::TempDir dir("scan");
  TimedPointCloud cloud;
  cloud.stamp = 2.5;
  cloud.points = {{Vec3(1, 2, 3), 0.05}, {Vec3(-1, 0, 1), 0.01}, {Vec3(4, 4, 4), 0.09}};
  io::write_scan_csv(dir / "s.csv", cloud);
  const auto back = io::read_scan_csv(dir / "s.csv", 2.5, 0.1);
  REQUIRE(back.size() == 3);
  CHECK(back.stamp == 2.5);
  CHECK(back.is_sorted_by_time());
  CHECK(back.points[0].dt == 0.01);

  // dt at or beyond the sweep period is rejected.
  TimedPointCloud bad;
  bad.points = {{Vec3(1, 1, 1), 0.2}};
  io::write_scan_csv(dir / "bad.csv", bad);
  CHECK_THROWS_AS(io::read_scan_csv(dir / "bad.csv", 0.0, 0.1), std::runtime_error);
}

TEST_CASE("tum trajectory round trip and quaternion order") {
  testing::TempDir dir("tum");
  std::mt19937_64 rng(57);
  std::vector<io::TimedPose> poses;
  for (int i = 0; i < 50; ++i) poses.push_back({i * 0.1, oracles::random_pose(rng, 10.0)});
  io::write_tum_trajectory(dir / "traj.tum", poses);

  const auto back = io::read_tum_trajectory(dir / "traj.tum");
  REQUIRE(back.size() == poses.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].stamp == poses[i].stamp);
    CHECK((back[i].pose.position - poses[i].pose.position).norm() == 0.0);
    CHECK(angular_distance(back[i].pose.orientation, poses[i].pose.orientation) < 1e-9);
  }

  // The third-from-last field of a TUM line is qz, not qw.
  std::ifstream in(dir / "traj.tum");
  std::string line;
  std::getline(in, line);
  std::istringstream fields(line);
  std::vector<std::string> tok{std::istream_iterator<std::string>(fields), {}};
  REQUIRE(tok.size() == 8);
  CHECK(std::stod(tok[7]) == poses[0].pose.orientation.w());
}

TEST_CASE("pose file reader detects both layouts") {
  testing::TempDir dir("pose");
  std::vector<io::TimedPose> poses = {{0.0, Pose{Vec3(1, 2, 3), Quat::Identity()}}};
  io::write_tum_trajectory(dir / "a.tum", poses);
  io::write_ground_truth_csv(dir / "b.csv", poses);
  CHECK((io::read_pose_file(dir / "a.tum")[0].pose.position - Vec3(1, 2, 3)).norm() == 0.0);
  CHECK((io::read_pose_file(dir / "b.csv")[0].pose.position - Vec3(1, 2, 3)).norm() == 0.0);
}

TEST_CASE("binary ply round trip") {
  testing::TempDir dir("ply");
  TimedPointCloud cloud;
  std::mt19937_64 rng(58);
  for (int i = 0; i < 333; ++i) cloud.points.push_back({oracles::random_vec3(rng, 50.0), 0.0});
  io::write_ply(dir / "map.ply", cloud);
  const auto back = io::read_ply(dir / "map.ply");
  REQUIRE(back.size() == cloud.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK((back[i] - cloud.points[i].xyz).norm() < 1e-4);  // float32 payload
  }
}

TEST_CASE("pipeline config: defaults, overrides and unknown keys") {
  testing::TempDir dir("config");
  {
    std::ofstream out(dir / "config.txt");
    out << "voxel_leaf = 0.4\nobserver_kq = 2.5\ndeskew_mode = discrete\n";
  }
  const auto config = load_pipeline_config(dir / "config.txt");
  CHECK(config.filter.voxel_leaf == 0.4);
  CHECK(config.filter.box_half_extent == 0.5);  // untouched default
  CHECK(config.gains.kq == 2.5);
  CHECK(config.deskew_mode == DeskewMode::kDiscrete);

  {
    std::ofstream out(dir / "bad.txt");
    out << "voxel_leaf = 0.4\nnot_a_real_key = 7\n";
  }
  CHECK_THROWS_AS(load_pipeline_config(dir / "bad.txt"), std::invalid_argument);

  {
    std::ofstream out(dir / "invalid.txt");
    out << "gicp_k_neighbors = 2\n";
  }
  CHECK_THROWS_AS(load_pipeline_config(dir / "invalid.txt"), std::invalid_argument);

  write_pipeline_config(dir / "echo.txt", config);
  const auto echoed = load_pipeline_config(dir / "echo.txt");
  CHECK(echoed.filter.voxel_leaf == config.filter.voxel_leaf);
  CHECK(echoed.deskew_mode == config.deskew_mode);
}

TEST_CASE("dataset writer and reader round trip") {
  testing::TempDir dir("dataset");
  sim::SimulationJob job;
  job.trajectory.kind = sim::TrajectoryKind::kStatic;
  job.trajectory.duration = 1.0;
  job.scene = sim::SceneSpec::box_room(5, 5, 2.5);
  job.lidar.channels = 4;
  job.lidar.horiz_res = 32;
  job.preamble = 0.5;

  const auto meta = sim::simulate_dataset(job, dir.path());
  CHECK(meta.duration == doctest::Approx(1.5));

  const io::DatasetReader reader(dir.path());
  CHECK(reader.meta().imu_rate == 100.0);
  CHECK(reader.imu().size() == 151);
  REQUIRE(!reader.scan_index().empty());
  const auto scan = reader.read_scan(reader.scan_index()[0]);
  CHECK(!scan.empty());
  CHECK(scan.is_sorted_by_time());
  CHECK(!reader.ground_truth().empty());
}

TEST_CASE("simulation spec parsing covers scene and trajectory keys") {
  testing::TempDir dir("spec");
  {
    std::ofstream out(dir / "spec.txt");
    out << "trajectory = aggressive_spin\n"
        << "duration = 5\n"
        << "spin_rate = 3.5\n"
        << "room = 10 10 4\n"
        << "box1 = 1 1 0 2 2 1\n"
        << "plane1 = 0 9 -5 5 -2 2\n"
        << "accel_noise_std = 0.02\n"
        << "seed = 7\n";
  }
  const auto job = sim::parse_simulation_spec(dir / "spec.txt");
  CHECK(job.trajectory.kind == sim::TrajectoryKind::kAggressiveSpin);
  CHECK(job.trajectory.spin_rate == 3.5);
  CHECK(job.scene.boxes.size() == 2);
  CHECK(job.scene.planes.size() == 1);
  CHECK(job.noise.accel_noise_std == 0.02);
  CHECK(job.noise.seed == 7);

  {
    std::ofstream out(dir / "bad.txt");
    out << "trajectory = static\nduration = 1\nroom = 5 5 2\nwhatever = 3\n";
  }
  CHECK_THROWS_AS(sim::parse_simulation_spec(dir / "bad.txt"), std::invalid_argument);
}

}  // TEST_SUITE
