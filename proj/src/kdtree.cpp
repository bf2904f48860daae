#include "lio/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace lio {

namespace {

inline bool closer(const KdTree::Hit& a, const KdTree::Hit& b) {
  if (a.sq_dist != b.sq_dist) return a.sq_dist < b.sq_dist;
  return a.index < b.index;
}

}  // namespace

KdTree::KdTree(std::vector<Vec3> points) : points_(std::move(points)) {
  if (points_.empty()) return;
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(points_.size());
  root_ = build(0, static_cast<int>(points_.size()), 0);
  order_.clear();
  order_.shrink_to_fit();
}

int KdTree::build(int lo, int hi, int depth) {
  if (lo >= hi) return -1;
  const int axis = depth % 3;
  const int mid = lo + (hi - lo) / 2;
  std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                   [&](int a, int b) {
                     const double va = points_[a][axis];
                     const double vb = points_[b][axis];
                     if (va != vb) return va < vb;
                     return a < b;
                   });
  const int self = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{axis, order_[mid], -1, -1});
  const int left = build(lo, mid, depth + 1);
  const int right = build(mid + 1, hi, depth + 1);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

void KdTree::search_nearest(int node, const Vec3& q, Hit& best) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Vec3& p = points_[n.point];
  const Hit here{n.point, (q - p).squaredNorm()};
  if (closer(here, best)) best = here;

  const double delta = q[n.axis] - p[n.axis];
  const int near = delta < 0.0 ? n.left : n.right;
  const int far = delta < 0.0 ? n.right : n.left;
  search_nearest(near, q, best);
  if (delta * delta <= best.sq_dist) search_nearest(far, q, best);
}

std::optional<KdTree::Hit> KdTree::nearest(const Vec3& query, double max_sq_dist) const {
  if (empty()) return std::nullopt;
  Hit best;
  search_nearest(root_, query, best);
  if (best.index < 0 || best.sq_dist > max_sq_dist) return std::nullopt;
  return best;
}

void KdTree::search_knn(int node, const Vec3& q, std::size_t k, std::vector<Hit>& heap) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Vec3& p = points_[n.point];
  const Hit here{n.point, (q - p).squaredNorm()};

  if (heap.size() < k) {
    heap.push_back(here);
    std::push_heap(heap.begin(), heap.end(), closer);
  } else if (closer(here, heap.front())) {
    std::pop_heap(heap.begin(), heap.end(), closer);
    heap.back() = here;
    std::push_heap(heap.begin(), heap.end(), closer);
  }

  const double delta = q[n.axis] - p[n.axis];
  const int near = delta < 0.0 ? n.left : n.right;
  const int far = delta < 0.0 ? n.right : n.left;
  search_knn(near, q, k, heap);
  if (heap.size() < k || delta * delta <= heap.front().sq_dist) search_knn(far, q, k, heap);
}

void KdTree::knn(const Vec3& query, int k, std::vector<Hit>& out) const {
  out.clear();
  if (empty() || k <= 0) return;
  out.reserve(static_cast<std::size_t>(k));
  search_knn(root_, query, static_cast<std::size_t>(k), out);
  std::sort(out.begin(), out.end(), closer);
}

}  // namespace lio
