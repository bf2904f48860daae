#pragma once

#include <stdexcept>
#include <vector>

#include "lio/geometry.hpp"
#include "lio/kdtree.hpp"

namespace lio {

using PointCovariances = std::vector<Mat3>;

struct GicpParams {
  int k_neighbors = 20;
  double plane_epsilon = 1e-3;      // smallest eigenvalue after regularization
  double max_corr_dist = 0.5;       // meters
  int max_iterations = 32;
  double trans_eps = 1e-4;          // meters
  double rot_eps = 1e-4;            // radians
  int min_correspondences = 20;
  unsigned threads = 0;
};

struct Correspondence {
  int src_index = -1;
  int tgt_index = -1;
  double squared_distance = 0.0;
};

struct AlignResult {
  Pose delta;               // correction applied on top of the source cloud
  double final_cost = 0.0;  // summed Mahalanobis residual at the accepted state
  int iterations = 0;
  bool converged = false;
  int correspondence_count = 0;
};

class DegenerateRegistrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CovarianceEstimate {
  PointCovariances covariances;
  std::size_t degenerate_count = 0;  // neighborhoods below rank 2, fell back to identity
};

/// Per-point neighborhood covariances regularized to (1, 1, epsilon) eigenvalues,
/// with the smallest eigenvalue along the estimated surface normal. Requires
/// points.size() >= k_neighbors >= 4.
CovarianceEstimate estimate_covariances(const std::vector<Vec3>& points, int k_neighbors,
                                        double plane_epsilon = 1e-3, unsigned threads = 0);
CovarianceEstimate estimate_covariances(const TimedPointCloud& cloud, int k_neighbors,
                                        double plane_epsilon = 1e-3, unsigned threads = 0);

/// Nearest target point per source point, keeping pairs within max_corr_dist.
std::vector<Correspondence> find_correspondences(const std::vector<Vec3>& src,
                                                 const KdTree& tgt_tree, double max_corr_dist,
                                                 unsigned threads = 0);

/// Summed Mahalanobis cost of the given correspondences at the given pose with
/// per-pair fixed weights.
double correspondence_cost(const std::vector<Vec3>& src, const std::vector<Vec3>& tgt,
                           const std::vector<Correspondence>& corrs,
                           const std::vector<Mat3>& weights, const Pose& delta);

/// One damped Gauss-Newton update at fixed correspondences and weights. The step
/// is halved until the cost does not increase; returns the accepted step scale
/// (0 when no improving step exists) and writes the new cost. The rotation
/// increment is a 3-vector applied through the exponential map.
double gauss_newton_step(const std::vector<Vec3>& src, const std::vector<Vec3>& tgt,
                         const std::vector<Correspondence>& corrs,
                         const std::vector<Mat3>& weights, Pose& delta, double& cost,
                         Vec3* applied_rotation = nullptr, Vec3* applied_translation = nullptr);

/// Plane-to-plane alignment of src (already posed in the world) onto tgt.
/// Re-finds correspondences each outer iteration, then takes one damped
/// Gauss-Newton step. Throws DegenerateRegistrationError when fewer than
/// min_correspondences pairs survive the distance gate.
AlignResult align(const std::vector<Vec3>& src, const PointCovariances& src_cov,
                  const std::vector<Vec3>& tgt, const PointCovariances& tgt_cov,
                  const KdTree& tgt_tree, const GicpParams& params);
AlignResult align(const std::vector<Vec3>& src, const PointCovariances& src_cov,
                  const std::vector<Vec3>& tgt, const PointCovariances& tgt_cov,
                  const GicpParams& params);
AlignResult align(const TimedPointCloud& src, const PointCovariances& src_cov,
                  const TimedPointCloud& tgt, const PointCovariances& tgt_cov,
                  const GicpParams& params);

/// Compose the registration correction with the dead-reckoned pose of the
/// sweep's final point: refined = delta ∘ prior_last.
inline Pose refine_pose(const Pose& prior_last, const Pose& delta) {
  return pose_compose(delta, prior_last);
}

}  // namespace lio
