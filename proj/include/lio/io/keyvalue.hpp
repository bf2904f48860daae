#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lio/geometry.hpp"

namespace lio::io {

/// "key = value" lines; '#' starts a comment, blank lines are ignored.
/// Accessors mark keys as consumed so callers can reject unknown keys.
class KeyValueFile {
 public:
  static KeyValueFile parse(const std::string& text);
  static KeyValueFile parse_file(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  Vec3 get_vec3(const std::string& key) const;
  Vec3 get_vec3(const std::string& key, const Vec3& fallback) const;
  /// Seven numbers: tx ty tz qw qx qy qz.
  Pose get_pose(const std::string& key) const;
  Pose get_pose(const std::string& key, const Pose& fallback) const;

  std::vector<double> get_numbers(const std::string& key) const;

  /// Keys matching a prefix, in lexicographic order (e.g. box1, box2, ...).
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  /// Throws std::invalid_argument naming every key never read.
  void require_all_consumed() const;

 private:
  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> consumed_;
};

/// Writes lines "key = value" in the given order.
void write_key_values(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& entries);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);
std::string format_pose(const Pose& pose);  // tx ty tz qw qx qy qz

}  // namespace lio::io
