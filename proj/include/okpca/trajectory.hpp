#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "okpca/kernel.hpp"

namespace okpca {

enum class QuadratureScheme { Trapezoid, Riemann };

/// How time integrals along a trajectory are discretized. Riemann is the left-endpoint sum.
struct QuadratureRule {
  QuadratureScheme scheme = QuadratureScheme::Trapezoid;

  friend bool operator==(const QuadratureRule&, const QuadratureRule&) = default;
};

const char* to_string(QuadratureScheme scheme);
QuadratureScheme quadrature_scheme_from_string(const std::string& name);

/// Quadrature weights for an arbitrary strictly increasing time grid.
Eigen::VectorXd quadrature_weights(QuadratureScheme scheme, const std::vector<double>& times);

/// Timestamped samples of one system run. Immutable after construction; the quadrature
/// weights for both schemes are computed once here.
class Trajectory {
public:
  /// `states` holds one sample per row. Times must be strictly increasing and finite,
  /// with at least two samples.
  Trajectory(std::vector<double> times, Eigen::MatrixXd states, std::string id = {});

  const std::vector<double>& times() const noexcept { return times_; }
  const Eigen::MatrixXd& states() const noexcept { return states_; }
  const std::string& id() const noexcept { return id_; }

  Eigen::Index dimension() const noexcept { return states_.cols(); }
  std::size_t num_samples() const noexcept { return times_.size(); }
  double duration() const noexcept { return times_.back() - times_.front(); }

  const Eigen::VectorXd& weights(const QuadratureRule& rule) const noexcept {
    return rule.scheme == QuadratureScheme::Trapezoid ? trapezoid_weights_ : riemann_weights_;
  }

  Trajectory with_id(std::string id) const;
  Trajectory with_states(Eigen::MatrixXd states) const;

private:
  std::vector<double> times_;
  Eigen::MatrixXd states_;
  std::string id_;
  Eigen::VectorXd trapezoid_weights_;
  Eigen::VectorXd riemann_weights_;
};

/// Gamma_gamma(x) = integral over the trajectory of k(x, gamma(t)) dt.
double occupation_eval(const KernelSpec& spec, const QuadratureRule& rule, const Trajectory& traj,
                       const StateRef& x);

/// <Gamma_i, Gamma_j>_H = double time integral of k(gamma_i(tau), gamma_j(t)), discretized with
/// the tensor product of the two weight vectors.
double occupation_inner(const KernelSpec& spec, const QuadratureRule& rule, const Trajectory& a,
                        const Trajectory& b);

}  // namespace okpca
