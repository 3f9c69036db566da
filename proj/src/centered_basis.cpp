#include "okpca/centered_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <lapacke.h>

#include "okpca/error.hpp"

namespace okpca {

SymmetricEigenpairs top_eigenpairs(const Eigen::MatrixXd& symmetric, std::size_t count) {
  const auto m = static_cast<lapack_int>(symmetric.rows());
  if (symmetric.rows() != symmetric.cols()) throw InputError("eigensolver needs a square matrix");
  if (m == 0 || count == 0) return {};
  count = std::min<std::size_t>(count, static_cast<std::size_t>(m));
  const auto k = static_cast<lapack_int>(count);

  Eigen::MatrixXd work = symmetric;  // dsyevr destroys its input
  Eigen::VectorXd values(m);
  Eigen::MatrixXd vectors(m, k);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', m, work.data(), m, 0.0,
                                         0.0, m - k + 1, m, 0.0, &found, values.data(),
                                         vectors.data(), m, support.data());
  if (info != 0 || found != k)
    throw NumericalError("symmetric eigensolver failed (LAPACK info " + std::to_string(info) + ")");

  // dsyevr returns ascending order.
  SymmetricEigenpairs out;
  out.values = values.head(k).reverse();
  out.vectors = vectors.rowwise().reverse();
  return out;
}

Eigen::MatrixXd center_kernel_matrix(const Eigen::MatrixXd& raw) {
  const Eigen::Index m = raw.rows();
  const Eigen::VectorXd row_means = raw.rowwise().mean();
  const Eigen::RowVectorXd col_means = raw.colwise().mean();
  const double grand = raw.mean();
  Eigen::MatrixXd centered(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i)
      centered(i, j) = raw(i, j) - col_means[j] - row_means[i] + grand;
  return centered;
}

namespace {

double rank_threshold(double largest, const Eigen::MatrixXd& centered) {
  // Floor at rounding level so an all-zero matrix perturbed by a few ulps has rank 0.
  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() *
                          static_cast<double>(centered.rows()) * centered.cwiseAbs().maxCoeff();
  return std::max(kRankTolerance * largest, rounding);
}

}  // namespace

std::size_t numerical_rank(const Eigen::MatrixXd& centered) {
  if (centered.size() == 0) return 0;
  const Eigen::VectorXd values =
      top_eigenpairs(centered, static_cast<std::size_t>(centered.rows())).values;
  const double tol = rank_threshold(std::max(values[0], 0.0), centered);
  return static_cast<std::size_t>((values.array() > tol).count());
}

CenteredKernelBasis::CenteredKernelBasis(const Eigen::MatrixXd& raw_gram,
                                         std::size_t num_components) {
  if (raw_gram.rows() != raw_gram.cols() || raw_gram.rows() == 0)
    throw InputError("Gram matrix must be square and non-empty");
  if (num_components == 0) throw InputError("at least one principal component is required");
  if (!raw_gram.allFinite()) throw NumericalError("Gram matrix has non-finite entries");

  row_means_ = raw_gram.rowwise().mean();
  grand_mean_ = raw_gram.mean();
  const Eigen::MatrixXd centered = center_kernel_matrix(raw_gram);

  const SymmetricEigenpairs pairs = top_eigenpairs(centered, num_components);
  const double tol = rank_threshold(std::max(pairs.values[0], 0.0), centered);
  const auto rank = static_cast<std::size_t>((pairs.values.array() > tol).count());
  if (rank < num_components) throw RankError(num_components, rank);

  eigenvalues_ = pairs.values;
  alphas_ = pairs.vectors * eigenvalues_.cwiseSqrt().cwiseInverse().asDiagonal();
}

CenteredKernelBasis CenteredKernelBasis::from_parts(Eigen::VectorXd row_means, double grand_mean,
                                                    Eigen::VectorXd eigenvalues,
                                                    Eigen::MatrixXd alphas) {
  if (alphas.rows() != row_means.size() || alphas.cols() != eigenvalues.size())
    throw InputError("inconsistent principal-component dimensions");
  CenteredKernelBasis basis;
  basis.row_means_ = std::move(row_means);
  basis.grand_mean_ = grand_mean;
  basis.eigenvalues_ = std::move(eigenvalues);
  basis.alphas_ = std::move(alphas);
  return basis;
}

CenteredKernelBasis CenteredKernelBasis::truncated(std::size_t n) const {
  if (n == 0 || n > num_components())
    throw InputError("cannot truncate " + std::to_string(num_components()) + " components to " +
                     std::to_string(n));
  const auto k = static_cast<Eigen::Index>(n);
  return from_parts(row_means_, grand_mean_, eigenvalues_.head(k), alphas_.leftCols(k));
}

Eigen::VectorXd CenteredKernelBasis::centered_cross(const Eigen::VectorXd& cross) const {
  if (cross.size() != row_means_.size())
    throw InputError("expected " + std::to_string(row_means_.size()) + " inner products, got " +
                     std::to_string(cross.size()));
  return (cross - row_means_).array() - cross.mean() + grand_mean_;
}

Eigen::VectorXd CenteredKernelBasis::project(const Eigen::VectorXd& cross) const {
  return alphas_.transpose() * centered_cross(cross);
}

double CenteredKernelBasis::centered_norm_squared(double self, const Eigen::VectorXd& cross) const {
  return self - 2.0 * cross.mean() + grand_mean_;
}

double CenteredKernelBasis::reconstruction_error(double self, const Eigen::VectorXd& cross) const {
  return centered_norm_squared(self, cross) - project(cross).squaredNorm();
}

}  // namespace okpca
