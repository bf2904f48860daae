#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "lio/config.hpp"
#include "lio/io/dataset.hpp"
#include "lio/metrics.hpp"
#include "lio/odometry.hpp"
#include "lio/sim/dataset.hpp"

namespace fs = std::filesystem;

namespace {

int run_simulate(const std::string& spec_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed) {
  const auto job = lio::sim::parse_simulation_spec(spec_path);
  const auto meta = lio::sim::simulate_dataset(job, out_dir, seed);
  std::printf("dataset written to %s\n", out_dir.c_str());
  std::printf("  duration: %.3f s (%.3f s static preamble)\n", meta.duration, meta.preamble);
  std::printf("  imu: %.0f Hz, lidar: %.0f Hz, %d x %d rays\n", meta.imu_rate, meta.lidar_rate,
              meta.lidar_channels, meta.lidar_horiz_res);
  std::printf("  seed: %llu\n", static_cast<unsigned long long>(meta.seed));
  return 0;
}

int run_odometry(const std::string& dataset_dir, const std::string& config_path,
                 const std::string& deskew, const std::string& out_dir, bool live) {
  const lio::io::DatasetReader reader(dataset_dir);

  lio::PipelineConfig defaults;
  defaults.extrinsics = reader.meta().extrinsics;
  lio::PipelineConfig config =
      config_path.empty() ? defaults : lio::load_pipeline_config(config_path, defaults);
  if (!deskew.empty()) config.deskew_mode = lio::parse_deskew_mode(deskew);
  config.validate();

  const auto result = live ? lio::run_dataset_live(reader, config)
                           : lio::run_dataset(reader, config);
  fs::create_directories(out_dir);
  lio::io::write_tum_trajectory(fs::path(out_dir) / "trajectory.tum", result.trajectory());
  lio::io::write_ply(fs::path(out_dir) / "map.ply", result.map_cloud);
  lio::write_records_csv(fs::path(out_dir) / "records.csv", result.records);

  std::size_t ok = 0;
  std::size_t flagged = 0;
  std::vector<double> timings;
  for (const auto& r : result.records) {
    if (r.status == lio::OdometryRecord::Status::kOk ||
        r.status == lio::OdometryRecord::Status::kBootstrap) {
      ++ok;
      timings.push_back(r.wall_ms);
    } else {
      ++flagged;
    }
  }
  const auto stats = lio::timing_stats(timings);
  std::printf("processed %zu scans (%zu ok, %zu flagged), map: %zu points\n",
              result.records.size(), ok, flagged, result.map_cloud.size());
  std::printf("per-scan wall time: mean %.2f ms, p95 %.2f ms\n", stats.mean_ms, stats.p95_ms);
  std::printf("outputs in %s\n", out_dir.c_str());
  return 0;
}

int run_evaluate(const std::string& est_path, const std::string& gt_path,
                 const std::string& records_path) {
  const auto est = lio::io::read_pose_file(est_path);
  const auto gt = lio::io::read_pose_file(gt_path);

  const double ate = lio::ate_rmse(est, gt);
  const double e2e = lio::end_to_end_error(est);

  std::printf("ATE RMSE:          %.6f m (%zu est poses vs %zu reference)\n", ate, est.size(),
              gt.size());
  std::printf("End-to-end error:  %.6f m\n", e2e);

  lio::TimingStats stats;
  bool have_timing = false;
  if (!records_path.empty()) {
    std::ifstream in(records_path);
    if (!in) throw std::runtime_error("cannot open " + records_path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> timings;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      // stamp,status,wall_ms,...
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 + 1);
      const auto c3 = line.find(',', c2 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos) continue;
      const std::string status = line.substr(c1 + 1, c2 - c1 - 1);
      if (status != "ok" && status != "bootstrap") continue;
      timings.push_back(std::stod(line.substr(c2 + 1, c3 - c2 - 1)));
    }
    stats = lio::timing_stats(timings);
    have_timing = true;
    std::printf("Per-scan timing:   mean %.2f ms, p95 %.2f ms (%zu scans)\n", stats.mean_ms,
                stats.p95_ms, timings.size());
  }

  std::printf("ate_rmse_m=%.9f\n", ate);
  std::printf("end_to_end_m=%.9f\n", e2e);
  if (have_timing) {
    std::printf("timing_mean_ms=%.4f\n", stats.mean_ms);
    std::printf("timing_p95_ms=%.4f\n", stats.p95_ms);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LiDAR-inertial odometry engine with a synthetic sensor simulator"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  auto* simulate = app.add_subcommand("simulate", "render a synthetic dataset");
  simulate->add_option("--spec", spec_path, "trajectory/scene spec file")->required();
  simulate->add_option("--out", out_dir, "output dataset directory")->required();
  simulate->add_option("--seed", seed, "noise seed override")->each([&](const std::string&) {
    seed_set = true;
  });

  std::string dataset_dir;
  std::string config_path;
  std::string deskew;
  std::string run_out;
  bool live = false;
  auto* run = app.add_subcommand("run", "replay a dataset through the odometry pipeline");
  run->add_option("--dataset", dataset_dir, "dataset directory")->required();
  run->add_option("--config", config_path, "pipeline config file");
  run->add_option("--deskew", deskew, "none|discrete|continuous")
      ->check(CLI::IsMember({"none", "discrete", "continuous"}));
  run->add_option("--out", run_out, "output directory")->required();
  run->add_flag("--live", live, "feed IMU and scans from two threads");

  std::string est_path;
  std::string gt_path;
  std::string records_path;
  auto* evaluate = app.add_subcommand("evaluate", "compare a trajectory against ground truth");
  evaluate->add_option("--est", est_path, "estimated trajectory (TUM)")->required();
  evaluate->add_option("--gt", gt_path, "reference trajectory (TUM or ground_truth.csv)")
      ->required();
  evaluate->add_option("--records", records_path, "records.csv for timing stats");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return run_simulate(spec_path, out_dir,
                          seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt);
    }
    if (run->parsed()) {
      return run_odometry(dataset_dir, config_path, deskew, run_out, live);
    }
    if (evaluate->parsed()) {
      return run_evaluate(est_path, gt_path, records_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
