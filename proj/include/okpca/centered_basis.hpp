#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace okpca {

/// Eigenvalues at or below this fraction of the largest centered-Gram eigenvalue count as zero.
inline constexpr double kRankTolerance = 1e-10;

/// Leading eigenpairs of a symmetric matrix, largest eigenvalue first.
struct SymmetricEigenpairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // one unit-norm eigenvector per column
};

/// Computes the `count` largest eigenpairs (LAPACK dsyevr). Only the lower triangle is read.
SymmetricEigenpairs top_eigenpairs(const Eigen::MatrixXd& symmetric, std::size_t count);

/// (I - J) K (I - J) with J the constant 1/M matrix, evaluated as K - J K - K J + J K J.
Eigen::MatrixXd center_kernel_matrix(const Eigen::MatrixXd& raw);

/// Number of centered-Gram eigenvalues above the rank tolerance.
std::size_t numerical_rank(const Eigen::MatrixXd& centered);

/// Principal-component machinery shared by trajectory (occupation kernel) and pointwise KPCA.
///
/// Everything lives in M-dimensional coefficient space: given the raw Gram matrix of M training
/// features, the basis stores the centering statistics and the coefficient vectors alpha^(k) of
/// the unit-norm principal directions v^(k) = sum_i alpha_i^(k) Phi(x_i). A test feature enters
/// only through its inner products with the training features (`cross`) and with itself (`self`).
class CenteredKernelBasis {
public:
  CenteredKernelBasis() = default;

  /// Throws RankError if fewer than `num_components` eigenvalues clear the rank tolerance and
  /// NumericalError if the Gram matrix has non-finite entries.
  CenteredKernelBasis(const Eigen::MatrixXd& raw_gram, std::size_t num_components);

  /// Rebuilds a basis from stored parts (deserialization). No eigensolve is performed.
  static CenteredKernelBasis from_parts(Eigen::VectorXd row_means, double grand_mean,
                                        Eigen::VectorXd eigenvalues, Eigen::MatrixXd alphas);

  std::size_t size() const noexcept { return static_cast<std::size_t>(row_means_.size()); }
  std::size_t num_components() const noexcept {
    return static_cast<std::size_t>(eigenvalues_.size());
  }

  const Eigen::VectorXd& row_means() const noexcept { return row_means_; }
  double grand_mean() const noexcept { return grand_mean_; }
  /// Eigenvalues of the centered Gram matrix, descending.
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  /// M x N; column k is alpha^(k), scaled so that alpha^T Kc alpha = 1.
  const Eigen::MatrixXd& alphas() const noexcept { return alphas_; }

  /// The first `n` components only. Requires 1 <= n <= num_components().
  CenteredKernelBasis truncated(std::size_t n) const;

  /// Entry j of the result is <Phi~(x), Phi~(x_j)>.
  Eigen::VectorXd centered_cross(const Eigen::VectorXd& cross) const;

  /// <Phi~(x), v^(k)> for each retained k.
  Eigen::VectorXd project(const Eigen::VectorXd& cross) const;

  /// |Phi~(x)|^2 = self - 2 mean(cross) + grand mean.
  double centered_norm_squared(double self, const Eigen::VectorXd& cross) const;

  /// |Phi~(x)|^2 minus the squared projections. May be slightly negative from rounding.
  double reconstruction_error(double self, const Eigen::VectorXd& cross) const;

private:
  Eigen::VectorXd row_means_;
  double grand_mean_ = 0.0;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd alphas_;
};

}  // namespace okpca
