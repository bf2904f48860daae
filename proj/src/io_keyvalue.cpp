#include "lio/io/keyvalue.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lio::io {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("key '" + key + "': not a number: '" + text + "'");
  }
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text) {
  KeyValueFile kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": empty key");
    }
    if (kv.entries_.count(key)) {
      throw std::invalid_argument("duplicate key: " + key);
    }
    kv.entries_[key] = value;
  }
  return kv;
}

KeyValueFile KeyValueFile::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string KeyValueFile::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw std::invalid_argument("missing key: " + key);
  consumed_.insert(key);
  return it->second;
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double KeyValueFile::get_double(const std::string& key) const {
  return parse_double(key, get_string(key));
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int KeyValueFile::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) throw std::invalid_argument("key '" + key + "': not an integer");
  return i;
}

int KeyValueFile::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::vector<double> KeyValueFile::get_numbers(const std::string& key) const {
  std::istringstream in(get_string(key));
  std::vector<double> out;
  std::string token;
  while (in >> token) out.push_back(parse_double(key, token));
  return out;
}

Vec3 KeyValueFile::get_vec3(const std::string& key) const {
  const auto v = get_numbers(key);
  if (v.size() != 3) throw std::invalid_argument("key '" + key + "': expected 3 numbers");
  return Vec3(v[0], v[1], v[2]);
}

Vec3 KeyValueFile::get_vec3(const std::string& key, const Vec3& fallback) const {
  return has(key) ? get_vec3(key) : fallback;
}

Pose KeyValueFile::get_pose(const std::string& key) const {
  const auto v = get_numbers(key);
  if (v.size() != 7) {
    throw std::invalid_argument("key '" + key + "': expected tx ty tz qw qx qy qz");
  }
  Pose p;
  p.position = Vec3(v[0], v[1], v[2]);
  p.orientation = Quat(v[3], v[4], v[5], v[6]).normalized();
  return p;
}

Pose KeyValueFile::get_pose(const std::string& key, const Pose& fallback) const {
  return has(key) ? get_pose(key) : fallback;
}

std::vector<std::string> KeyValueFile::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [key, value] : entries_) {
    if (key.rfind(prefix, 0) == 0) out.push_back(key);
  }
  return out;
}

void KeyValueFile::require_all_consumed() const {
  std::string unknown;
  for (const auto& [key, value] : entries_) {
    if (!consumed_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
  }
  if (!unknown.empty()) throw std::invalid_argument("unknown keys: " + unknown);
}

void write_key_values(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& [key, value] : entries) out << key << " = " << value << "\n";
}

std::string format_double(double v) {
  char buf[64];
  // Round-trip exact: try increasing precision until strtod returns v.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string format_pose(const Pose& pose) {
  std::string out;
  out += format_double(pose.position.x()) + " " + format_double(pose.position.y()) + " " +
         format_double(pose.position.z()) + " " + format_double(pose.orientation.w()) + " " +
         format_double(pose.orientation.x()) + " " + format_double(pose.orientation.y()) + " " +
         format_double(pose.orientation.z());
  return out;
}

}  // namespace lio::io
