#pragma once

#include <Eigen/Dense>

namespace okpca {

enum class KernelFamily { GaussianRbf };

/// Kernel family plus width. For the Gaussian RBF, k(x, y) = exp(-|x - y|^2 / mu),
/// so mu carries squared state units.
class KernelSpec {
public:
  KernelSpec(KernelFamily family, double mu);

  static KernelSpec gaussian(double mu) { return {KernelFamily::GaussianRbf, mu}; }

  KernelFamily family() const noexcept { return family_; }
  double mu() const noexcept { return mu_; }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

private:
  KernelFamily family_;
  double mu_;
};

using StateRef = Eigen::Ref<const Eigen::VectorXd>;
using PointsRef = Eigen::Ref<const Eigen::MatrixXd>;  // one point per row
using WeightsRef = Eigen::Ref<const Eigen::VectorXd>;

double eval_kernel(const KernelSpec& spec, const StateRef& x, const StateRef& y);

/// Full matrix (k(X_a, Y_b)) for point sets stored row-wise.
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const PointsRef& x, const PointsRef& y);

/// sum_b w_b k(x, Y_b)
double weighted_kernel_row_sum(const KernelSpec& spec, const StateRef& x, const PointsRef& y,
                               const WeightsRef& wy);

/// sum_a sum_b wx_a wy_b k(X_a, Y_b). This is the Gram-assembly hot path; it never
/// materializes the cross-kernel matrix.
double weighted_kernel_sum(const KernelSpec& spec, const PointsRef& x, const WeightsRef& wx,
                           const PointsRef& y, const WeightsRef& wy);

const char* to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

}  // namespace okpca
