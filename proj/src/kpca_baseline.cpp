#include "okpca/kpca_baseline.hpp"

#include "okpca/error.hpp"

namespace okpca {

KpcaModel::KpcaModel(const KernelSpec& spec, Eigen::MatrixXd points, Eigen::MatrixXd gram_raw,
                     CenteredKernelBasis basis)
    : spec_(spec),
      points_(std::move(points)),
      gram_raw_(std::move(gram_raw)),
      basis_(std::move(basis)) {}

KpcaModel KpcaModel::fit(const KernelSpec& spec, Eigen::MatrixXd points,
                         std::size_t num_components) {
  if (points.rows() < 2) throw InputError("KPCA needs at least two training points");
  if (points.cols() < 1) throw InputError("KPCA training points have zero dimension");
  if (!points.allFinite()) throw NumericalError("KPCA training points contain non-finite values");
  Eigen::MatrixXd gram = kernel_matrix(spec, points, points);
  // Exact symmetry for the eigensolver.
  gram = (0.5 * (gram + gram.transpose())).eval();
  CenteredKernelBasis basis(gram, num_components);
  return KpcaModel(spec, std::move(points), std::move(gram), std::move(basis));
}

void KpcaModel::check_dimension(Eigen::Index n) const {
  if (n != dimension())
    throw InputError("state of dimension " + std::to_string(n) +
                     " scored against a KPCA model of dimension " + std::to_string(dimension()));
}

Eigen::VectorXd KpcaModel::project(const StateRef& x) const {
  check_dimension(x.size());
  const Eigen::MatrixXd cross = kernel_matrix(spec_, points_, x.transpose());
  return basis_.project(cross.col(0));
}

double KpcaModel::point_error(const StateRef& x) const {
  check_dimension(x.size());
  const Eigen::MatrixXd cross = kernel_matrix(spec_, points_, x.transpose());
  return basis_.reconstruction_error(eval_kernel(spec_, x, x), cross.col(0));
}

double KpcaModel::trajectory_error(const Trajectory& traj) const {
  check_dimension(traj.dimension());
  const auto& states = traj.states();
  // Column a holds the inner products of sample a with every training point.
  const Eigen::MatrixXd cross = kernel_matrix(spec_, points_, states);
  double total = 0.0;
  for (Eigen::Index a = 0; a < states.rows(); ++a) {
    const Eigen::VectorXd column = cross.col(a);
    total += basis_.reconstruction_error(eval_kernel(spec_, states.row(a), states.row(a)), column);
  }
  return total / static_cast<double>(states.rows());
}

Eigen::MatrixXd pool_training_points(std::span<const Trajectory> trajectories,
                                     std::size_t max_points) {
  if (trajectories.empty()) throw InputError("no trajectories to pool");
  if (max_points < 2) throw InputError("KPCA pool must keep at least two points");
  const auto n = trajectories.front().dimension();
  std::size_t total = 0;
  for (const auto& traj : trajectories) {
    if (traj.dimension() != n) throw InputError("pooled trajectories differ in dimension");
    total += traj.num_samples();
  }
  const std::size_t keep = std::min(total, max_points);

  // Evenly spaced positions in the concatenated sample sequence.
  std::vector<std::size_t> wanted(keep);
  for (std::size_t k = 0; k < keep; ++k)
    wanted[k] = keep == total ? k : (k * (total - 1)) / (keep - 1);

  Eigen::MatrixXd pooled(static_cast<Eigen::Index>(keep), n);
  std::size_t offset = 0;
  std::size_t next = 0;
  for (const auto& traj : trajectories) {
    const std::size_t end = offset + traj.num_samples();
    while (next < keep && wanted[next] < end) {
      pooled.row(static_cast<Eigen::Index>(next)) =
          traj.states().row(static_cast<Eigen::Index>(wanted[next] - offset));
      ++next;
    }
    offset = end;
  }
  return pooled;
}

}  // namespace okpca
