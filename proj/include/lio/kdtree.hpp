#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "lio/geometry.hpp"

namespace lio {

/// Median-split k-d tree over a fixed set of 3D points. Queries break distance
/// ties toward the lower point index, so results are reproducible run to run.
class KdTree {
 public:
  struct Hit {
    int index = -1;
    double sq_dist = std::numeric_limits<double>::infinity();
  };

  KdTree() = default;
  explicit KdTree(std::vector<Vec3> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Vec3>& points() const { return points_; }

  /// Closest point with squared distance <= max_sq_dist, or nullopt.
  std::optional<Hit> nearest(const Vec3& query,
                             double max_sq_dist = std::numeric_limits<double>::infinity()) const;

  /// The k closest points (fewer if the tree is smaller), sorted by
  /// (squared distance, index).
  void knn(const Vec3& query, int k, std::vector<Hit>& out) const;

 private:
  struct Node {
    int axis = 0;
    int point = -1;  // index into points_
    int left = -1;
    int right = -1;
  };

  int build(int lo, int hi, int depth);
  void search_nearest(int node, const Vec3& q, Hit& best) const;
  void search_knn(int node, const Vec3& q, std::size_t k, std::vector<Hit>& heap) const;

  std::vector<Vec3> points_;
  std::vector<int> order_;  // scratch during build
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace lio
