#include "okpca/okpca.hpp"

#include <cmath>

#include "okpca/error.hpp"
#include "okpca/parallel.hpp"

namespace okpca {

GramMatrix::GramMatrix(Eigen::MatrixXd entries, bool centered)
    : entries_(std::move(entries)), centered_(centered) {
  if (entries_.rows() != entries_.cols()) throw InputError("Gram matrix must be square");
}

GramMatrix gram_matrix(const KernelSpec& spec, const QuadratureRule& rule,
                       std::span<const Trajectory> trajectories, unsigned threads) {
  if (trajectories.empty()) throw InputError("Gram matrix needs at least one trajectory");
  const auto n = trajectories.front().dimension();
  for (const auto& traj : trajectories)
    if (traj.dimension() != n)
      throw InputError("trajectory '" + traj.id() + "' has dimension " +
                       std::to_string(traj.dimension()) + ", expected " + std::to_string(n));

  const std::size_t m = trajectories.size();
  Eigen::MatrixXd k(m, m);
  // Row i of the upper triangle is one work item; rows shrink with i, so dynamic scheduling
  // balances them.
  parallel_for(m, threads, [&](std::size_t i) {
    for (std::size_t j = i; j < m; ++j) {
      const double value = occupation_inner(spec, rule, trajectories[i], trajectories[j]);
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
      k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
    }
  });
  return GramMatrix(std::move(k), false);
}

GramMatrix center_gram(const GramMatrix& gram) {
  if (gram.centered()) throw InputError("Gram matrix is already centered");
  if (gram.size() == 0) throw InputError("cannot center an empty Gram matrix");
  return GramMatrix(center_kernel_matrix(gram.entries()), true);
}

OkpcaModel::OkpcaModel(const KernelSpec& spec, const QuadratureRule& rule,
                       std::vector<Trajectory> training, GramMatrix gram_raw,
                       CenteredKernelBasis basis)
    : spec_(spec),
      rule_(rule),
      training_(std::move(training)),
      gram_raw_(std::move(gram_raw)),
      gram_centered_(center_gram(gram_raw_)),
      basis_(std::move(basis)) {}

OkpcaModel OkpcaModel::fit(const KernelSpec& spec, const QuadratureRule& rule,
                           std::vector<Trajectory> training, std::size_t num_components,
                           const FitOptions& options) {
  if (training.size() < 2) throw InputError("OKPCA needs at least two training trajectories");
  if (num_components == 0) throw InputError("at least one principal component is required");
  GramMatrix gram = gram_matrix(spec, rule, training, options.threads);
  return from_gram(spec, rule, std::move(training), std::move(gram), num_components);
}

OkpcaModel OkpcaModel::from_gram(const KernelSpec& spec, const QuadratureRule& rule,
                                 std::vector<Trajectory> training, GramMatrix gram_raw,
                                 std::size_t num_components) {
  if (training.size() < 2) throw InputError("OKPCA needs at least two training trajectories");
  if (gram_raw.centered()) throw InputError("fit expects the uncentered Gram matrix");
  if (static_cast<std::size_t>(gram_raw.size()) != training.size())
    throw InputError("Gram matrix size does not match the training set");
  CenteredKernelBasis basis(gram_raw.entries(), num_components);
  return OkpcaModel(spec, rule, std::move(training), std::move(gram_raw), std::move(basis));
}

OkpcaModel OkpcaModel::from_parts(const KernelSpec& spec, const QuadratureRule& rule,
                                  std::vector<Trajectory> training, GramMatrix gram_raw,
                                  CenteredKernelBasis basis) {
  if (training.empty() || static_cast<std::size_t>(gram_raw.size()) != training.size() ||
      basis.size() != training.size())
    throw InputError("model parts disagree on the number of training trajectories");
  if (gram_raw.centered()) throw InputError("model requires the uncentered Gram matrix");
  return OkpcaModel(spec, rule, std::move(training), std::move(gram_raw), std::move(basis));
}

OkpcaModel OkpcaModel::truncated(std::size_t num_components) const {
  return OkpcaModel(spec_, rule_, training_, gram_raw_, basis_.truncated(num_components));
}

Eigen::VectorXd OkpcaModel::cross_inner_products(const Trajectory& traj) const {
  if (traj.dimension() != dimension())
    throw InputError("trajectory '" + traj.id() + "' has dimension " +
                     std::to_string(traj.dimension()) + " but the model was trained on dimension " +
                     std::to_string(dimension()));
  Eigen::VectorXd cross(static_cast<Eigen::Index>(training_.size()));
  for (std::size_t j = 0; j < training_.size(); ++j)
    cross[static_cast<Eigen::Index>(j)] = occupation_inner(spec_, rule_, traj, training_[j]);
  return cross;
}

FeatureInnerProducts OkpcaModel::inner_products(const Trajectory& traj) const {
  Eigen::VectorXd cross = cross_inner_products(traj);
  return {occupation_inner(spec_, rule_, traj, traj), std::move(cross)};
}

FeatureInnerProducts OkpcaModel::training_inner_products(std::size_t i) const {
  if (i >= training_.size()) throw InputError("training index out of range");
  const auto row = static_cast<Eigen::Index>(i);
  return {gram_raw_(row, row), gram_raw_.entries().row(row).transpose()};
}

Eigen::VectorXd OkpcaModel::project(const Trajectory& traj) const {
  return basis_.project(cross_inner_products(traj));
}

}  // namespace okpca
