#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "okpca/centered_basis.hpp"
#include "okpca/kernel.hpp"
#include "okpca/trajectory.hpp"

namespace okpca {

/// Pointwise kernel PCA: individual state samples are the data, each mapped through the
/// canonical feature map k(., x). Serves as the comparison detector.
class KpcaModel {
public:
  /// `points` holds one training sample per row (P >= 2). Same rank rules as OkpcaModel::fit.
  static KpcaModel fit(const KernelSpec& spec, Eigen::MatrixXd points, std::size_t num_components);

  const KernelSpec& spec() const noexcept { return spec_; }
  const Eigen::MatrixXd& training_points() const noexcept { return points_; }
  const Eigen::MatrixXd& gram_raw() const noexcept { return gram_raw_; }
  Eigen::MatrixXd gram_centered() const { return center_kernel_matrix(gram_raw_); }
  const CenteredKernelBasis& basis() const noexcept { return basis_; }
  std::size_t num_components() const noexcept { return basis_.num_components(); }
  Eigen::Index dimension() const noexcept { return points_.cols(); }

  /// <Phi~(x), v^(k)> for each component.
  Eigen::VectorXd project(const StateRef& x) const;

  /// |Phi~(x)|^2 - sum_k <Phi~(x), v^(k)>^2, unclamped.
  double point_error(const StateRef& x) const;

  /// Mean of point_error over every sample of the trajectory.
  double trajectory_error(const Trajectory& traj) const;

private:
  KpcaModel(const KernelSpec& spec, Eigen::MatrixXd points, Eigen::MatrixXd gram_raw,
            CenteredKernelBasis basis);

  void check_dimension(Eigen::Index n) const;

  KernelSpec spec_;
  Eigen::MatrixXd points_;
  Eigen::MatrixXd gram_raw_;
  CenteredKernelBasis basis_;
};

inline constexpr std::size_t kDefaultMaxPooledPoints = 2000;

/// Concatenates every sample of every trajectory (in order) and keeps at most `max_points` of
/// them at evenly spaced positions in that sequence.
Eigen::MatrixXd pool_training_points(std::span<const Trajectory> trajectories,
                                     std::size_t max_points = kDefaultMaxPooledPoints);

}  // namespace okpca
