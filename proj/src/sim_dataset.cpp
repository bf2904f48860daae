#include "lio/sim/dataset.hpp"

#include <cmath>

#include "lio/io/keyvalue.hpp"

namespace lio::sim {

SimulationJob parse_simulation_spec(const std::filesystem::path& path) {
  const auto kv = io::KeyValueFile::parse_file(path);
  SimulationJob job;

  auto& t = job.trajectory;
  t.kind = parse_trajectory_kind(kv.get_string("trajectory"));
  t.duration = kv.get_double("duration");
  t.start_position = kv.get_vec3("start_position", Vec3::Zero());
  t.start_rpy = kv.get_vec3("start_rpy", Vec3::Zero());
  t.linear_velocity = kv.get_vec3("linear_velocity", Vec3::Zero());
  t.linear_accel = kv.get_vec3("linear_accel", Vec3::Zero());
  t.pos_amplitude = kv.get_vec3("pos_amplitude", Vec3::Zero());
  t.pos_frequency = kv.get_vec3("pos_frequency", Vec3::Zero());
  t.pos_phase = kv.get_vec3("pos_phase", Vec3::Zero());
  t.rot_axis = kv.get_vec3("rot_axis", Vec3::UnitZ());
  t.spin_rate = kv.get_double("spin_rate", 0.0);
  t.spin_ramp = kv.get_double("spin_ramp", 0.5);
  t.rot_amplitude = kv.get_double("rot_amplitude", 0.0);
  t.rot_frequency = kv.get_double("rot_frequency", 0.0);
  t.rot_phase = kv.get_double("rot_phase", 0.0);

  for (const auto& key : kv.keys_with_prefix("box")) {
    const auto v = kv.get_numbers(key);
    if (v.size() != 6) throw std::invalid_argument(key + ": expected min_xyz max_xyz");
    job.scene.boxes.push_back(AxisAlignedBox{Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5])});
  }
  for (const auto& key : kv.keys_with_prefix("plane")) {
    const auto v = kv.get_numbers(key);
    if (v.size() != 6) {
      throw std::invalid_argument(key + ": expected axis offset u_min u_max v_min v_max");
    }
    job.scene.planes.push_back(
        AxisAlignedPlane{static_cast<int>(v[0]), v[1], v[2], v[3], v[4], v[5]});
  }
  if (kv.has("room")) {
    const auto v = kv.get_numbers("room");
    if (v.size() != 3) throw std::invalid_argument("room: expected half_x half_y half_z");
    const auto room = SceneSpec::box_room(v[0], v[1], v[2]);
    job.scene.boxes.insert(job.scene.boxes.end(), room.boxes.begin(), room.boxes.end());
  }
  if (job.scene.empty()) throw std::invalid_argument("spec describes no scene geometry");

  job.noise.accel_noise_std = kv.get_double("accel_noise_std", 0.0);
  job.noise.gyro_noise_std = kv.get_double("gyro_noise_std", 0.0);
  job.noise.accel_bias = kv.get_vec3("accel_bias", Vec3::Zero());
  job.noise.gyro_bias = kv.get_vec3("gyro_bias", Vec3::Zero());
  job.noise.seed = static_cast<std::uint64_t>(kv.get_double("seed", 0.0));

  job.lidar.channels = kv.get_int("lidar_channels", 32);
  job.lidar.horiz_res = kv.get_int("lidar_horiz_res", 512);
  job.lidar.rate = kv.get_double("lidar_rate", 10.0);
  job.lidar.max_range = kv.get_double("lidar_max_range", 60.0);
  job.lidar.vertical_fov = kv.get_double("lidar_vertical_fov", 0.7853981633974483);

  job.imu_rate = kv.get_double("imu_rate", 100.0);
  job.extrinsics.lidar_to_robot = kv.get_pose("lidar_to_robot", Pose{});
  job.extrinsics.imu_to_robot = kv.get_pose("imu_to_robot", Pose{});
  job.preamble = kv.get_double("preamble", 1.0);

  kv.require_all_consumed();
  return job;
}

io::DatasetMeta simulate_dataset(const SimulationJob& job, const std::filesystem::path& out_dir,
                                 std::optional<std::uint64_t> seed_override) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "scans");

  SimNoiseSpec noise = job.noise;
  if (seed_override) noise.seed = *seed_override;

  const MotionModel model(job.trajectory, job.preamble);

  const auto imu = sample_imu(model, job.imu_rate, noise, job.extrinsics);
  io::write_imu_csv(out_dir / "imu.csv", imu);

  const double period = 1.0 / job.lidar.rate;
  std::vector<io::ScanIndexEntry> index;
  for (int k = 0;; ++k) {
    const double t0 = k * period;
    if (t0 + period > model.duration() + 1e-9) break;
    const auto sweep = render_sweep(model, job.scene, job.lidar, t0, job.extrinsics);
    io::write_scan_csv(out_dir / "scans" / io::scan_file_name(k), sweep.distorted);
    index.push_back(io::ScanIndexEntry{k, t0});
  }
  io::write_scan_index(out_dir / "scans" / "index.csv", index);

  std::vector<io::TimedPose> gt;
  const auto ticks = static_cast<std::size_t>(std::floor(model.duration() * job.imu_rate + 1e-9)) + 1;
  gt.reserve(ticks);
  for (std::size_t j = 0; j < ticks; ++j) {
    const double t = static_cast<double>(j) / job.imu_rate;
    gt.push_back(io::TimedPose{t, model.pose(t)});
  }
  io::write_ground_truth_csv(out_dir / "ground_truth.csv", gt);

  io::DatasetMeta meta;
  meta.imu_rate = job.imu_rate;
  meta.lidar_rate = job.lidar.rate;
  meta.lidar_channels = job.lidar.channels;
  meta.lidar_horiz_res = job.lidar.horiz_res;
  meta.lidar_max_range = job.lidar.max_range;
  meta.extrinsics = job.extrinsics;
  meta.preamble = job.preamble;
  meta.duration = model.duration();
  meta.seed = noise.seed;
  io::write_meta(out_dir / "meta", meta);
  return meta;
}

}  // namespace lio::sim
