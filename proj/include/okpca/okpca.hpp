#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "okpca/centered_basis.hpp"
#include "okpca/kernel.hpp"
#include "okpca/trajectory.hpp"

namespace okpca {

/// Symmetric matrix of occupation-kernel inner products, tagged with whether it has been
/// centered in feature space.
class GramMatrix {
public:
  GramMatrix() = default;
  GramMatrix(Eigen::MatrixXd entries, bool centered);

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  bool centered() const noexcept { return centered_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
  Eigen::MatrixXd entries_;
  bool centered_ = false;
};

/// entries(i, j) = occupation_inner(trajectories[i], trajectories[j]). Each unordered pair is
/// integrated once and mirrored, so the result is exactly symmetric. Pairs are spread over
/// `threads` workers (0 = hardware concurrency).
GramMatrix gram_matrix(const KernelSpec& spec, const QuadratureRule& rule,
                       std::span<const Trajectory> trajectories, unsigned threads = 1);

/// (I - J) K (I - J). Rejects an already-centered matrix.
GramMatrix center_gram(const GramMatrix& gram);

struct FitOptions {
  unsigned threads = 1;
};

/// Inner products of one trajectory's occupation kernel with itself and with every training
/// trajectory's occupation kernel.
struct FeatureInnerProducts {
  double self = 0.0;
  Eigen::VectorXd cross;
};

/// A fitted occupation-kernel PCA model. Immutable; every const member is safe to call from
/// several threads.
class OkpcaModel {
public:
  /// Assembles the Gram matrix, then fits as `from_gram`. Requires at least two trajectories of
  /// a common dimension and 1 <= num_components <= numerical rank of the centered Gram matrix.
  static OkpcaModel fit(const KernelSpec& spec, const QuadratureRule& rule,
                        std::vector<Trajectory> training, std::size_t num_components,
                        const FitOptions& options = {});

  /// Fits from a precomputed uncentered Gram matrix of `training`.
  static OkpcaModel from_gram(const KernelSpec& spec, const QuadratureRule& rule,
                              std::vector<Trajectory> training, GramMatrix gram_raw,
                              std::size_t num_components);

  /// Reassembles a model from serialized parts without refitting.
  static OkpcaModel from_parts(const KernelSpec& spec, const QuadratureRule& rule,
                               std::vector<Trajectory> training, GramMatrix gram_raw,
                               CenteredKernelBasis basis);

  /// Same training data and Gram matrix, first `num_components` components only.
  OkpcaModel truncated(std::size_t num_components) const;

  const KernelSpec& spec() const noexcept { return spec_; }
  const QuadratureRule& rule() const noexcept { return rule_; }
  const std::vector<Trajectory>& training() const noexcept { return training_; }
  const GramMatrix& gram_raw() const noexcept { return gram_raw_; }
  const GramMatrix& gram_centered() const noexcept { return gram_centered_; }
  const CenteredKernelBasis& basis() const noexcept { return basis_; }
  const Eigen::VectorXd& eigenvalues() const noexcept { return basis_.eigenvalues(); }
  const Eigen::MatrixXd& alphas() const noexcept { return basis_.alphas(); }
  std::size_t num_components() const noexcept { return basis_.num_components(); }
  std::size_t num_training() const noexcept { return training_.size(); }
  Eigen::Index dimension() const noexcept { return training_.front().dimension(); }

  /// Entry j is <Gamma_traj, Gamma_j>_H for training trajectory j.
  Eigen::VectorXd cross_inner_products(const Trajectory& traj) const;
  FeatureInnerProducts inner_products(const Trajectory& traj) const;

  /// Inner products of training member i, read from the stored Gram matrix.
  FeatureInnerProducts training_inner_products(std::size_t i) const;

  /// k-th entry is <Phi~(traj), v^(k)>_H.
  Eigen::VectorXd project(const Trajectory& traj) const;

private:
  OkpcaModel(const KernelSpec& spec, const QuadratureRule& rule, std::vector<Trajectory> training,
             GramMatrix gram_raw, CenteredKernelBasis basis);

  KernelSpec spec_;
  QuadratureRule rule_;
  std::vector<Trajectory> training_;
  GramMatrix gram_raw_;
  GramMatrix gram_centered_;
  CenteredKernelBasis basis_;
};

}  // namespace okpca
