#include "lio/io/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lio/io/keyvalue.hpp"

namespace lio::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::vector<double> split_numbers(const std::string& line, char sep) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t next = line.find(sep, pos);
    if (next == std::string::npos) next = line.size();
    const std::string tok = line.substr(pos, next - pos);
    if (!tok.empty() && tok.find_first_not_of(" \t\r") != std::string::npos) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
      if (end == tok.c_str() || (end && *end != '\0')) {
        throw std::runtime_error("bad number: '" + tok + "'");
      }
      out.push_back(v);
    }
    pos = next + 1;
    if (next == line.size()) break;
  }
  return out;
}

}  // namespace

void write_imu_csv(const std::filesystem::path& path, const std::vector<ImuSample>& samples) {
  auto out = open_out(path);
  out << "stamp_s,ax,ay,az,gx,gy,gz\n";
  for (const auto& s : samples) {
    out << format_double(s.stamp) << ',' << format_double(s.accel.x()) << ','
        << format_double(s.accel.y()) << ',' << format_double(s.accel.z()) << ','
        << format_double(s.gyro.x()) << ',' << format_double(s.gyro.y()) << ','
        << format_double(s.gyro.z()) << '\n';
  }
}

std::vector<ImuSample> read_imu_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<ImuSample> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      if (line.rfind("stamp_s", 0) == 0) continue;
    }
    if (line.empty()) continue;
    const auto v = split_numbers(line, ',');
    if (v.size() != 7) throw std::runtime_error(path.string() + ": expected 7 columns");
    ImuSample s;
    s.stamp = v[0];
    s.accel = Vec3(v[1], v[2], v[3]);
    s.gyro = Vec3(v[4], v[5], v[6]);
    if (!s.finite()) throw std::runtime_error(path.string() + ": non-finite IMU sample");
    out.push_back(s);
  }
  return out;
}

void write_scan_csv(const std::filesystem::path& path, const TimedPointCloud& cloud) {
  auto out = open_out(path);
  out << "x,y,z,dt_s\n";
  for (const auto& p : cloud.points) {
    out << format_double(p.xyz.x()) << ',' << format_double(p.xyz.y()) << ','
        << format_double(p.xyz.z()) << ',' << format_double(p.dt) << '\n';
  }
}

TimedPointCloud read_scan_csv(const std::filesystem::path& path, double stamp,
                              double sweep_period) {
  auto in = open_in(path);
  TimedPointCloud cloud;
  cloud.stamp = stamp;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      if (line.rfind("x,", 0) == 0) continue;
    }
    if (line.empty()) continue;
    const auto v = split_numbers(line, ',');
    if (v.size() != 4) throw std::runtime_error(path.string() + ": expected 4 columns");
    TimedPoint p{Vec3(v[0], v[1], v[2]), v[3]};
    if (!p.xyz.allFinite() || !std::isfinite(p.dt) || p.dt < 0.0 ||
        (sweep_period > 0.0 && p.dt >= sweep_period)) {
      throw std::runtime_error(path.string() + ": point time outside the sweep");
    }
    cloud.points.push_back(p);
  }
  cloud.sort_by_time();
  return cloud;
}

void write_scan_index(const std::filesystem::path& path, const std::vector<ScanIndexEntry>& idx) {
  auto out = open_out(path);
  out << "scan_id,stamp_s\n";
  for (const auto& e : idx) out << e.id << ',' << format_double(e.stamp) << '\n';
}

std::vector<ScanIndexEntry> read_scan_index(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<ScanIndexEntry> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      if (line.rfind("scan_id", 0) == 0) continue;
    }
    if (line.empty()) continue;
    const auto v = split_numbers(line, ',');
    if (v.size() != 2) throw std::runtime_error(path.string() + ": expected 2 columns");
    out.push_back(ScanIndexEntry{static_cast<int>(v[0]), v[1]});
  }
  return out;
}

void write_ground_truth_csv(const std::filesystem::path& path, const std::vector<TimedPose>& gt) {
  auto out = open_out(path);
  out << "stamp_s,tx,ty,tz,qw,qx,qy,qz\n";
  for (const auto& tp : gt) {
    const auto& p = tp.pose;
    out << format_double(tp.stamp) << ',' << format_double(p.position.x()) << ','
        << format_double(p.position.y()) << ',' << format_double(p.position.z()) << ','
        << format_double(p.orientation.w()) << ',' << format_double(p.orientation.x()) << ','
        << format_double(p.orientation.y()) << ',' << format_double(p.orientation.z()) << '\n';
  }
}

std::vector<TimedPose> read_ground_truth_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<TimedPose> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      if (line.rfind("stamp_s", 0) == 0) continue;
    }
    if (line.empty()) continue;
    const auto v = split_numbers(line, ',');
    if (v.size() != 8) throw std::runtime_error(path.string() + ": expected 8 columns");
    TimedPose tp;
    tp.stamp = v[0];
    tp.pose.position = Vec3(v[1], v[2], v[3]);
    tp.pose.orientation = Quat(v[4], v[5], v[6], v[7]).normalized();
    out.push_back(tp);
  }
  return out;
}

void write_meta(const std::filesystem::path& path, const DatasetMeta& meta) {
  write_key_values(path, {
      {"imu_rate", format_double(meta.imu_rate)},
      {"lidar_rate", format_double(meta.lidar_rate)},
      {"lidar_channels", std::to_string(meta.lidar_channels)},
      {"lidar_horiz_res", std::to_string(meta.lidar_horiz_res)},
      {"lidar_max_range", format_double(meta.lidar_max_range)},
      {"lidar_to_robot", format_pose(meta.extrinsics.lidar_to_robot)},
      {"imu_to_robot", format_pose(meta.extrinsics.imu_to_robot)},
      {"preamble", format_double(meta.preamble)},
      {"duration", format_double(meta.duration)},
      {"seed", std::to_string(meta.seed)},
  });
}

DatasetMeta read_meta(const std::filesystem::path& path) {
  const auto kv = KeyValueFile::parse_file(path);
  DatasetMeta meta;
  meta.imu_rate = kv.get_double("imu_rate");
  meta.lidar_rate = kv.get_double("lidar_rate");
  meta.lidar_channels = kv.get_int("lidar_channels");
  meta.lidar_horiz_res = kv.get_int("lidar_horiz_res");
  meta.lidar_max_range = kv.get_double("lidar_max_range");
  meta.extrinsics.lidar_to_robot = kv.get_pose("lidar_to_robot");
  meta.extrinsics.imu_to_robot = kv.get_pose("imu_to_robot");
  meta.preamble = kv.get_double("preamble");
  meta.duration = kv.get_double("duration");
  meta.seed = static_cast<std::uint64_t>(kv.get_double("seed"));
  return meta;
}

void write_tum_trajectory(const std::filesystem::path& path, const std::vector<TimedPose>& poses) {
  auto out = open_out(path);
  for (const auto& tp : poses) {
    const auto& p = tp.pose;
    out << format_double(tp.stamp) << ' ' << format_double(p.position.x()) << ' '
        << format_double(p.position.y()) << ' ' << format_double(p.position.z()) << ' '
        << format_double(p.orientation.x()) << ' ' << format_double(p.orientation.y()) << ' '
        << format_double(p.orientation.z()) << ' ' << format_double(p.orientation.w()) << '\n';
  }
}

std::vector<TimedPose> read_tum_trajectory(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<TimedPose> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto v = split_numbers(line, ' ');
    if (v.size() != 8) throw std::runtime_error(path.string() + ": expected 8 fields");
    TimedPose tp;
    tp.stamp = v[0];
    tp.pose.position = Vec3(v[1], v[2], v[3]);
    tp.pose.orientation = Quat(v[7], v[4], v[5], v[6]).normalized();
    out.push_back(tp);
  }
  return out;
}

std::vector<TimedPose> read_pose_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string first;
  std::getline(in, first);
  in.close();
  if (first.rfind("stamp_s", 0) == 0) return read_ground_truth_csv(path);
  return read_tum_trajectory(path);
}

void write_ply(const std::filesystem::path& path, const TimedPointCloud& cloud) {
  auto out = open_out(path);
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << cloud.points.size() << "\n"
      << "property float x\nproperty float y\nproperty float z\nend_header\n";
  for (const auto& p : cloud.points) {
    const float xyz[3] = {static_cast<float>(p.xyz.x()), static_cast<float>(p.xyz.y()),
                          static_cast<float>(p.xyz.z())};
    out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
  }
}

std::vector<Vec3> read_ply(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  std::size_t count = 0;
  bool binary_le = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "end_header") break;
    if (line.rfind("format ", 0) == 0) binary_le = line.find("binary_little_endian") != std::string::npos;
    if (line.rfind("element vertex ", 0) == 0) count = std::stoull(line.substr(15));
  }
  if (!binary_le) throw std::runtime_error(path.string() + ": expected binary little-endian PLY");
  std::vector<Vec3> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    float xyz[3];
    in.read(reinterpret_cast<char*>(xyz), sizeof(xyz));
    if (!in) throw std::runtime_error(path.string() + ": truncated PLY payload");
    out.emplace_back(xyz[0], xyz[1], xyz[2]);
  }
  return out;
}

std::filesystem::path scan_file_name(int id) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d.csv", id);
  return buf;
}

DatasetReader::DatasetReader(std::filesystem::path dir) : dir_(std::move(dir)) {
  meta_ = read_meta(dir_ / "meta");
  imu_ = read_imu_csv(dir_ / "imu.csv");
  scans_ = read_scan_index(dir_ / "scans" / "index.csv");
}

TimedPointCloud DatasetReader::read_scan(const ScanIndexEntry& entry) const {
  return read_scan_csv(dir_ / "scans" / scan_file_name(entry.id), entry.stamp,
                       1.0 / meta_.lidar_rate);
}

std::vector<TimedPose> DatasetReader::ground_truth() const {
  return read_ground_truth_csv(dir_ / "ground_truth.csv");
}

}  // namespace lio::io
