#include "okpca/kernel.hpp"

#include <cmath>
#include <string>

#include "okpca/error.hpp"

namespace okpca {

KernelSpec::KernelSpec(KernelFamily family, double mu) : family_(family), mu_(mu) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw InputError("kernel width mu must be positive and finite, got " + std::to_string(mu));
}

namespace {

void check_dims(Eigen::Index a, Eigen::Index b) {
  if (a != b)
    throw InputError("state dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  if (a < 1) throw InputError("state dimension must be at least 1");
}

}  // namespace

double eval_kernel(const KernelSpec& spec, const StateRef& x, const StateRef& y) {
  check_dims(x.size(), y.size());
  // Summing (x_i - y_i)^2 in index order keeps k(x, y) == k(y, x) bit for bit.
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    d2 += d * d;
  }
  return std::exp(-d2 / spec.mu());
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const PointsRef& x, const PointsRef& y) {
  check_dims(x.cols(), y.cols());
  const double scale = -1.0 / spec.mu();
  Eigen::MatrixXd out(x.rows(), y.rows());
  for (Eigen::Index b = 0; b < y.rows(); ++b) {
    auto col = out.col(b).array();
    col = (x.col(0).array() - y(b, 0)).square();
    for (Eigen::Index c = 1; c < x.cols(); ++c) col += (x.col(c).array() - y(b, c)).square();
    col = (col * scale).exp();
  }
  return out;
}

double weighted_kernel_row_sum(const KernelSpec& spec, const StateRef& x, const PointsRef& y,
                               const WeightsRef& wy) {
  check_dims(x.size(), y.cols());
  if (wy.size() != y.rows()) throw InputError("weight count does not match point count");
  Eigen::ArrayXd d2 = (y.col(0).array() - x[0]).square();
  for (Eigen::Index c = 1; c < y.cols(); ++c) d2 += (y.col(c).array() - x[c]).square();
  return (wy.array() * (d2 * (-1.0 / spec.mu())).exp()).sum();
}

double weighted_kernel_sum(const KernelSpec& spec, const PointsRef& x, const WeightsRef& wx,
                           const PointsRef& y, const WeightsRef& wy) {
  check_dims(x.cols(), y.cols());
  if (wx.size() != x.rows() || wy.size() != y.rows())
    throw InputError("weight count does not match point count");
  const double scale = -1.0 / spec.mu();
  Eigen::ArrayXd d2(x.rows());
  double total = 0.0;
  for (Eigen::Index b = 0; b < y.rows(); ++b) {
    if (wy[b] == 0.0) continue;
    d2 = (x.col(0).array() - y(b, 0)).square();
    for (Eigen::Index c = 1; c < x.cols(); ++c) d2 += (x.col(c).array() - y(b, c)).square();
    total += wy[b] * (wx.array() * (d2 * scale).exp()).sum();
  }
  return total;
}

const char* to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::GaussianRbf:
      return "gaussian_rbf";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "gaussian_rbf" || name == "gaussian") return KernelFamily::GaussianRbf;
  throw InputError("unknown kernel family '" + name + "'");
}

}  // namespace okpca
