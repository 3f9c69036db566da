#include "okpca/trajectory.hpp"

#include <cmath>

#include "okpca/error.hpp"

namespace okpca {

const char* to_string(QuadratureScheme scheme) {
  switch (scheme) {
    case QuadratureScheme::Trapezoid:
      return "trapezoid";
    case QuadratureScheme::Riemann:
      return "riemann";
  }
  return "unknown";
}

QuadratureScheme quadrature_scheme_from_string(const std::string& name) {
  if (name == "trapezoid") return QuadratureScheme::Trapezoid;
  if (name == "riemann") return QuadratureScheme::Riemann;
  throw InputError("unknown quadrature scheme '" + name + "'");
}

Eigen::VectorXd quadrature_weights(QuadratureScheme scheme, const std::vector<double>& times) {
  const auto m = static_cast<Eigen::Index>(times.size());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  for (Eigen::Index a = 0; a + 1 < m; ++a) {
    const double h = times[a + 1] - times[a];
    if (scheme == QuadratureScheme::Trapezoid) {
      w[a] += 0.5 * h;
      w[a + 1] += 0.5 * h;
    } else {
      w[a] += h;
    }
  }
  return w;
}

Trajectory::Trajectory(std::vector<double> times, Eigen::MatrixXd states, std::string id)
    : times_(std::move(times)), states_(std::move(states)), id_(std::move(id)) {
  if (times_.size() < 2)
    throw InputError("trajectory '" + id_ + "' needs at least 2 samples, got " +
                     std::to_string(times_.size()));
  if (static_cast<std::size_t>(states_.rows()) != times_.size())
    throw InputError("trajectory '" + id_ + "': " + std::to_string(states_.rows()) +
                     " state rows for " + std::to_string(times_.size()) + " time stamps");
  if (states_.cols() < 1) throw InputError("trajectory '" + id_ + "' has zero state dimension");
  for (std::size_t a = 0; a < times_.size(); ++a) {
    if (!std::isfinite(times_[a]))
      throw InputError("trajectory '" + id_ + "' has a non-finite time stamp");
    if (a > 0 && !(times_[a] > times_[a - 1]))
      throw InputError("trajectory '" + id_ + "': times must be strictly increasing (sample " +
                       std::to_string(a) + ")");
  }
  if (!states_.allFinite()) throw InputError("trajectory '" + id_ + "' has non-finite states");
  trapezoid_weights_ = quadrature_weights(QuadratureScheme::Trapezoid, times_);
  riemann_weights_ = quadrature_weights(QuadratureScheme::Riemann, times_);
}

Trajectory Trajectory::with_id(std::string id) const {
  Trajectory copy = *this;
  copy.id_ = std::move(id);
  return copy;
}

Trajectory Trajectory::with_states(Eigen::MatrixXd states) const {
  return Trajectory(times_, std::move(states), id_);
}

double occupation_eval(const KernelSpec& spec, const QuadratureRule& rule, const Trajectory& traj,
                       const StateRef& x) {
  if (x.size() != traj.dimension())
    throw InputError("point of dimension " + std::to_string(x.size()) +
                     " evaluated against trajectory of dimension " +
                     std::to_string(traj.dimension()));
  return weighted_kernel_row_sum(spec, x, traj.states(), traj.weights(rule));
}

double occupation_inner(const KernelSpec& spec, const QuadratureRule& rule, const Trajectory& a,
                        const Trajectory& b) {
  if (a.dimension() != b.dimension())
    throw InputError("trajectories '" + a.id() + "' and '" + b.id() +
                     "' have different state dimensions");
  return weighted_kernel_sum(spec, a.states(), a.weights(rule), b.states(), b.weights(rule));
}

}  // namespace okpca
