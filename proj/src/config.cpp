#include "lio/config.hpp"

#include <stdexcept>

#include "lio/io/keyvalue.hpp"

namespace lio {

void PipelineConfig::validate() const {
  if (filter.box_half_extent < 0.0) throw std::invalid_argument("box_half_extent must be >= 0");
  if (filter.voxel_leaf < 0.0) throw std::invalid_argument("voxel_leaf must be >= 0");
  if (gicp.k_neighbors < 4) throw std::invalid_argument("gicp_k_neighbors must be >= 4");
  if (gicp.plane_epsilon <= 0.0) throw std::invalid_argument("gicp_plane_epsilon must be > 0");
  if (gicp.max_corr_dist <= 0.0) throw std::invalid_argument("gicp_max_corr_dist must be > 0");
  if (gicp.max_iterations < 1) throw std::invalid_argument("gicp_max_iterations must be >= 1");
  if (gicp.trans_eps <= 0.0 || gicp.rot_eps <= 0.0) {
    throw std::invalid_argument("gicp epsilons must be > 0");
  }
  if (gicp.min_correspondences < 3) {
    throw std::invalid_argument("gicp_min_correspondences must be >= 3");
  }
  if (keyframe.distance < 0.0 || keyframe.angle < 0.0) {
    throw std::invalid_argument("keyframe thresholds must be >= 0");
  }
  if (submap_n_nearest < 1) throw std::invalid_argument("submap_n_nearest must be >= 1");
  if (!gains.valid()) throw std::invalid_argument("observer gains must be positive");
  if (calibration_duration <= 0.0) {
    throw std::invalid_argument("calibration_duration must be > 0");
  }
  if (calibration_accel_std_max <= 0.0) {
    throw std::invalid_argument("calibration_accel_std_max must be > 0");
  }
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path,
                                    const PipelineConfig& defaults) {
  const auto kv = io::KeyValueFile::parse_file(path);
  PipelineConfig c = defaults;

  c.extrinsics.lidar_to_robot = kv.get_pose("lidar_to_robot", c.extrinsics.lidar_to_robot);
  c.extrinsics.imu_to_robot = kv.get_pose("imu_to_robot", c.extrinsics.imu_to_robot);

  c.filter.box_half_extent = kv.get_double("box_half_extent", c.filter.box_half_extent);
  c.filter.voxel_leaf = kv.get_double("voxel_leaf", c.filter.voxel_leaf);

  c.gicp.k_neighbors = kv.get_int("gicp_k_neighbors", c.gicp.k_neighbors);
  c.gicp.plane_epsilon = kv.get_double("gicp_plane_epsilon", c.gicp.plane_epsilon);
  c.gicp.max_corr_dist = kv.get_double("gicp_max_corr_dist", c.gicp.max_corr_dist);
  c.gicp.max_iterations = kv.get_int("gicp_max_iterations", c.gicp.max_iterations);
  c.gicp.trans_eps = kv.get_double("gicp_trans_eps", c.gicp.trans_eps);
  c.gicp.rot_eps = kv.get_double("gicp_rot_eps", c.gicp.rot_eps);
  c.gicp.min_correspondences =
      kv.get_int("gicp_min_correspondences", c.gicp.min_correspondences);

  c.keyframe.distance = kv.get_double("keyframe_distance", c.keyframe.distance);
  c.keyframe.angle = kv.get_double("keyframe_angle", c.keyframe.angle);
  c.submap_n_nearest = kv.get_int("submap_n_nearest", c.submap_n_nearest);

  c.gains.kq = kv.get_double("observer_kq", c.gains.kq);
  c.gains.kgb = kv.get_double("observer_kgb", c.gains.kgb);
  c.gains.kp = kv.get_double("observer_kp", c.gains.kp);
  c.gains.kv = kv.get_double("observer_kv", c.gains.kv);
  c.gains.kab = kv.get_double("observer_kab", c.gains.kab);

  if (kv.has("deskew_mode")) c.deskew_mode = parse_deskew_mode(kv.get_string("deskew_mode"));
  c.calibration_duration = kv.get_double("calibration_duration", c.calibration_duration);
  c.calibration_accel_std_max =
      kv.get_double("calibration_accel_std_max", c.calibration_accel_std_max);
  c.threads = static_cast<unsigned>(kv.get_int("threads", static_cast<int>(c.threads)));

  kv.require_all_consumed();
  c.gicp.threads = c.threads;
  c.validate();
  return c;
}

void write_pipeline_config(const std::filesystem::path& path, const PipelineConfig& c) {
  io::write_key_values(
      path,
      {
          {"lidar_to_robot", io::format_pose(c.extrinsics.lidar_to_robot)},
          {"imu_to_robot", io::format_pose(c.extrinsics.imu_to_robot)},
          {"box_half_extent", io::format_double(c.filter.box_half_extent)},
          {"voxel_leaf", io::format_double(c.filter.voxel_leaf)},
          {"gicp_k_neighbors", std::to_string(c.gicp.k_neighbors)},
          {"gicp_plane_epsilon", io::format_double(c.gicp.plane_epsilon)},
          {"gicp_max_corr_dist", io::format_double(c.gicp.max_corr_dist)},
          {"gicp_max_iterations", std::to_string(c.gicp.max_iterations)},
          {"gicp_trans_eps", io::format_double(c.gicp.trans_eps)},
          {"gicp_rot_eps", io::format_double(c.gicp.rot_eps)},
          {"gicp_min_correspondences", std::to_string(c.gicp.min_correspondences)},
          {"keyframe_distance", io::format_double(c.keyframe.distance)},
          {"keyframe_angle", io::format_double(c.keyframe.angle)},
          {"submap_n_nearest", std::to_string(c.submap_n_nearest)},
          {"observer_kq", io::format_double(c.gains.kq)},
          {"observer_kgb", io::format_double(c.gains.kgb)},
          {"observer_kp", io::format_double(c.gains.kp)},
          {"observer_kv", io::format_double(c.gains.kv)},
          {"observer_kab", io::format_double(c.gains.kab)},
          {"deskew_mode", std::string(to_string(c.deskew_mode))},
          {"calibration_duration", io::format_double(c.calibration_duration)},
          {"calibration_accel_std_max", io::format_double(c.calibration_accel_std_max)},
          {"threads", std::to_string(c.threads)},
      });
}

}  // namespace lio
