#include "lio/gicp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

#include "lio/parallel.hpp"

namespace lio {

namespace {

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

}  // namespace

CovarianceEstimate estimate_covariances(const std::vector<Vec3>& points, int k_neighbors,
                                        double plane_epsilon, unsigned threads) {
  if (k_neighbors < 4) throw std::invalid_argument("need k_neighbors >= 4");
  if (points.size() < static_cast<std::size_t>(k_neighbors)) {
    throw std::invalid_argument("cloud smaller than the covariance neighborhood");
  }

  const KdTree tree(points);
  CovarianceEstimate out;
  out.covariances.resize(points.size());
  std::vector<unsigned char> degenerate(points.size(), 0);

  parallel_for(
      points.size(),
      [&](std::size_t i) {
        std::vector<KdTree::Hit> hits;
        tree.knn(points[i], k_neighbors, hits);

        Vec3 mean = Vec3::Zero();
        for (const auto& h : hits) mean += points[h.index];
        mean /= static_cast<double>(hits.size());

        Mat3 cov = Mat3::Zero();
        for (const auto& h : hits) {
          const Vec3 d = points[h.index] - mean;
          cov += d * d.transpose();
        }
        cov /= static_cast<double>(hits.size());

        Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
        const Vec3 evals = eig.eigenvalues();  // ascending
        if (!(evals[1] > 1e-9 * evals[2]) || !(evals[2] > 0.0)) {
          // Below rank 2; no usable surface normal.
          out.covariances[i] = Mat3::Identity();
          degenerate[i] = 1;
          return;
        }
        const Mat3 basis = eig.eigenvectors();
        Mat3 reg = basis * Vec3(plane_epsilon, 1.0, 1.0).asDiagonal() * basis.transpose();
        out.covariances[i] = 0.5 * (reg + reg.transpose());
      },
      threads);

  for (const auto f : degenerate) out.degenerate_count += f;
  return out;
}

CovarianceEstimate estimate_covariances(const TimedPointCloud& cloud, int k_neighbors,
                                        double plane_epsilon, unsigned threads) {
  return estimate_covariances(cloud.positions(), k_neighbors, plane_epsilon, threads);
}

std::vector<Correspondence> find_correspondences(const std::vector<Vec3>& src,
                                                 const KdTree& tgt_tree, double max_corr_dist,
                                                 unsigned threads) {
  const double max_sq = max_corr_dist * max_corr_dist;
  std::vector<Correspondence> all(src.size());
  parallel_for(
      src.size(),
      [&](std::size_t i) {
        const auto hit = tgt_tree.nearest(src[i], max_sq);
        all[i] = hit ? Correspondence{static_cast<int>(i), hit->index, hit->sq_dist}
                     : Correspondence{};
      },
      threads);

  std::vector<Correspondence> kept;
  kept.reserve(all.size());
  for (const auto& c : all) {
    if (c.src_index >= 0) kept.push_back(c);
  }
  return kept;
}

double correspondence_cost(const std::vector<Vec3>& src, const std::vector<Vec3>& tgt,
                           const std::vector<Correspondence>& corrs,
                           const std::vector<Mat3>& weights, const Pose& delta) {
  double cost = 0.0;
  for (std::size_t c = 0; c < corrs.size(); ++c) {
    const Vec3 d = tgt[corrs[c].tgt_index] - delta.apply(src[corrs[c].src_index]);
    cost += d.dot(weights[c] * d);
  }
  return cost;
}

double gauss_newton_step(const std::vector<Vec3>& src, const std::vector<Vec3>& tgt,
                         const std::vector<Correspondence>& corrs,
                         const std::vector<Mat3>& weights, Pose& delta, double& cost,
                         Vec3* applied_rotation, Vec3* applied_translation) {
  const double cost0 = correspondence_cost(src, tgt, corrs, weights, delta);

  Mat6 h = Mat6::Zero();
  Vec6 g = Vec6::Zero();
  for (std::size_t c = 0; c < corrs.size(); ++c) {
    const Vec3 moved = delta.apply(src[corrs[c].src_index]);
    const Vec3 d = tgt[corrs[c].tgt_index] - moved;

    Eigen::Matrix<double, 3, 6> jac;
    jac.leftCols<3>() = skew(moved);
    jac.rightCols<3>() = -Mat3::Identity();

    const Mat3& w = weights[c];
    h.noalias() += jac.transpose() * w * jac;
    g.noalias() -= jac.transpose() * w * d;
  }

  const Vec6 step = h.ldlt().solve(g);
  if (!step.allFinite()) {
    cost = cost0;
    if (applied_rotation) applied_rotation->setZero();
    if (applied_translation) applied_translation->setZero();
    return 0.0;
  }

  double scale = 1.0;
  while (scale > 1.0 / 1024.0) {
    const Vec3 rot = scale * step.head<3>();
    const Vec3 trans = scale * step.tail<3>();
    Pose candidate;
    candidate.orientation = (exp_so3(rot) * delta.orientation).normalized();
    candidate.position = delta.position + trans;
    const double cost1 = correspondence_cost(src, tgt, corrs, weights, candidate);
    if (std::isfinite(cost1) && cost1 <= cost0) {
      delta = candidate;
      cost = cost1;
      if (applied_rotation) *applied_rotation = rot;
      if (applied_translation) *applied_translation = trans;
      return scale;
    }
    scale *= 0.5;
  }

  cost = cost0;
  if (applied_rotation) applied_rotation->setZero();
  if (applied_translation) applied_translation->setZero();
  return 0.0;
}

AlignResult align(const std::vector<Vec3>& src, const PointCovariances& src_cov,
                  const std::vector<Vec3>& tgt, const PointCovariances& tgt_cov,
                  const KdTree& tgt_tree, const GicpParams& params) {
  if (src.empty() || tgt.empty()) throw std::invalid_argument("empty cloud in registration");
  if (src.size() != src_cov.size() || tgt.size() != tgt_cov.size()) {
    throw std::invalid_argument("covariances do not match their cloud");
  }

  AlignResult result;
  std::vector<Vec3> moved(src.size());
  std::vector<Mat3> weights;

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    result.iterations = iter + 1;

    parallel_for(
        src.size(), [&](std::size_t i) { moved[i] = result.delta.apply(src[i]); },
        params.threads);
    const auto corrs = find_correspondences(moved, tgt_tree, params.max_corr_dist, params.threads);
    result.correspondence_count = static_cast<int>(corrs.size());
    if (corrs.size() < static_cast<std::size_t>(params.min_correspondences)) {
      throw DegenerateRegistrationError("too few correspondences: " +
                                        std::to_string(corrs.size()));
    }

    // Weights are fixed while the step is taken; the source covariance is
    // carried through the current rotation estimate.
    const Mat3 rot = result.delta.orientation.toRotationMatrix();
    weights.resize(corrs.size());
    parallel_for(
        corrs.size(),
        [&](std::size_t c) {
          const Mat3 combined = tgt_cov[corrs[c].tgt_index] +
                                rot * src_cov[corrs[c].src_index] * rot.transpose();
          weights[c] = combined.inverse();
        },
        params.threads);

    Vec3 applied_rot;
    Vec3 applied_trans;
    double cost = 0.0;
    const double scale = gauss_newton_step(src, tgt, corrs, weights, result.delta, cost,
                                           &applied_rot, &applied_trans);
    result.final_cost = cost;

    if (scale == 0.0) {
      // No improving step at this linearization; treat as converged in place.
      result.converged = true;
      break;
    }
    if (applied_trans.norm() < params.trans_eps && applied_rot.norm() < params.rot_eps) {
      result.converged = true;
      break;
    }
  }
  return result;
}

AlignResult align(const std::vector<Vec3>& src, const PointCovariances& src_cov,
                  const std::vector<Vec3>& tgt, const PointCovariances& tgt_cov,
                  const GicpParams& params) {
  const KdTree tree(tgt);
  return align(src, src_cov, tgt, tgt_cov, tree, params);
}

AlignResult align(const TimedPointCloud& src, const PointCovariances& src_cov,
                  const TimedPointCloud& tgt, const PointCovariances& tgt_cov,
                  const GicpParams& params) {
  return align(src.positions(), src_cov, tgt.positions(), tgt_cov, params);
}

}  // namespace lio
