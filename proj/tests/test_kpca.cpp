#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

#include "okpca/error.hpp"
#include "okpca/kpca_baseline.hpp"
#include "okpca/okpca.hpp"
#include "test_support.hpp"

using namespace okpca;
using namespace okpca::testing;

namespace {

Eigen::MatrixXd random_points(Eigen::Index p, Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd x(p, n);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
  return x;
}

}  // namespace

TEST_CASE("mirror points give one antisymmetric component") {
  Eigen::MatrixXd pts(2, 2);
  pts << 0.5, 0.1, -0.5, 0.1;
  const auto model = KpcaModel::fit(KernelSpec::gaussian(1.0), pts, 1);
  CHECK(model.num_components() == 1);
  CHECK(std::abs(model.basis().alphas()(0, 0) + model.basis().alphas()(1, 0)) < 1e-12);
  CHECK_THROWS_AS(KpcaModel::fit(KernelSpec::gaussian(1.0), pts, 2), RankError);

  // Reflection across the symmetry axis flips the projection and keeps the error.
  const Eigen::Vector2d x(0.2, 0.7), mirrored(-0.2, 0.7), on_axis(0.0, -0.3);
  CHECK(std::abs(model.project(x)[0] + model.project(mirrored)[0]) < 1e-12);
  CHECK(model.point_error(x) == doctest::Approx(model.point_error(mirrored)).epsilon(1e-12));
  CHECK(std::abs(model.project(on_axis)[0]) < 1e-12);
  CHECK(std::abs(model.point_error(pts.row(0).transpose())) < 1e-10);
}

TEST_CASE("duplicated points collapse the rank") {
  Eigen::MatrixXd pts = Eigen::MatrixXd::Constant(4, 2, 0.3);
  try {
    KpcaModel::fit(KernelSpec::gaussian(1.0), pts, 1);
    FAIL("expected a rank error");
  } catch (const RankError& e) {
    CHECK(e.achievable_rank() == 0);
  }
  CHECK_THROWS_AS(KpcaModel::fit(KernelSpec::gaussian(1.0), pts.topRows(1), 1), InputError);
}

TEST_CASE("training points reconstruct at full rank") {
  const auto spec = KernelSpec::gaussian(0.8);
  const Eigen::MatrixXd pts = random_points(12, 3, 1);
  const std::size_t r = numerical_rank(center_kernel_matrix(kernel_matrix(spec, pts, pts)));
  REQUIRE(r == 11);
  const auto model = KpcaModel::fit(spec, pts, r);
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    CHECK(std::abs(model.point_error(pts.row(i).transpose())) < 1e-8);

  // A trajectory built from training points only also scores zero.
  std::vector<double> t{0.0, 0.5, 1.5};
  const Trajectory g(t, pts.topRows(3));
  CHECK(std::abs(model.trajectory_error(g)) < 1e-8);
}

TEST_CASE("far away point approaches the analytic limit") {
  const auto spec = KernelSpec::gaussian(0.5);
  const Eigen::MatrixXd pts = random_points(15, 2, 2);
  const auto model = KpcaModel::fit(spec, pts, 6);
  // With every cross kernel zero: |Phi~|^2 = 1 + mean(K), and the projection on the k-th unit
  // direction is -u_k . m / sqrt(lambda_k), m the row means of K.
  const Eigen::MatrixXd k = kernel_matrix(spec, pts, pts);
  const Eigen::VectorXd m = k.rowwise().mean();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(centering_oracle(k));
  double limit = 1.0 + k.mean();
  for (int j = 0; j < 6; ++j) {
    const Eigen::Index col = es.eigenvalues().size() - 1 - j;
    const double p = es.eigenvectors().col(col).dot(m) / std::sqrt(es.eigenvalues()[col]);
    limit -= p * p;
  }
  CHECK(model.point_error(Eigen::Vector2d(40.0, -40.0)) == doctest::Approx(limit).epsilon(1e-6));
}

TEST_CASE("trajectory error is the mean point error") {
  const auto spec = KernelSpec::gaussian(0.6);
  const auto model = KpcaModel::fit(spec, random_points(30, 2, 3), 5);
  const Eigen::Vector2d x(0.9, 0.9);
  const auto still = constant_trajectory(x, uniform_times(0, 2, 9));
  CHECK(model.trajectory_error(still) == doctest::Approx(model.point_error(x)).epsilon(1e-13));

  const auto g = academic_set(1, 4).front();
  double mean = 0.0;
  for (Eigen::Index i = 0; i < g.states().rows(); ++i)
    mean += model.point_error(g.states().row(i).transpose());
  mean /= static_cast<double>(g.states().rows());
  CHECK(model.trajectory_error(g) == doctest::Approx(mean).epsilon(1e-12));
  CHECK_THROWS_AS(model.point_error(Eigen::Vector3d::Zero()), InputError);
}

TEST_CASE("pointwise errors are nonnegative and nonincreasing in N") {
  const auto spec = KernelSpec::gaussian(0.6);
  const Eigen::MatrixXd pts = random_points(40, 2, 5);
  const std::size_t r = numerical_rank(center_kernel_matrix(kernel_matrix(spec, pts, pts)));
  const auto model = KpcaModel::fit(spec, pts, r);
  const Eigen::MatrixXd tests = random_points(10, 2, 6) * 1.3;
  for (Eigen::Index i = 0; i < tests.rows(); ++i) {
    const Eigen::VectorXd x = tests.row(i).transpose();
    const Eigen::VectorXd cross = kernel_matrix(spec, tests.row(i), pts).transpose();
    double prev = model.basis().truncated(1).reconstruction_error(1.0, cross);
    for (std::size_t n = 2; n <= r; ++n) {
      const double e = model.basis().truncated(n).reconstruction_error(1.0, cross);
      CHECK(e <= prev + 1e-9);
      prev = e;
    }
    CHECK(prev == doctest::Approx(model.point_error(x)).scale(1.0).epsilon(1e-12));
    CHECK(prev >= -1e-8);
  }
}

TEST_CASE("pointwise KPCA equals OKPCA on unit-duration constant trajectories") {
  const auto spec = KernelSpec::gaussian(0.7);
  const Eigen::MatrixXd pts = random_points(5, 3, 8);
  std::vector<Trajectory> trajs;
  for (Eigen::Index i = 0; i < 5; ++i)
    trajs.push_back(constant_trajectory(pts.row(i).transpose(), {0.0, 1.0}));
  const auto kp = KpcaModel::fit(spec, pts, 4);
  const auto ok = OkpcaModel::fit(spec, QuadratureRule{}, trajs, 4);

  CHECK((kp.gram_centered() - ok.gram_centered().entries()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((kp.basis().eigenvalues() - ok.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
  for (Eigen::Index k = 0; k < 4; ++k) {
    const Eigen::VectorXd a = kp.basis().alphas().col(k), b = ok.alphas().col(k);
    // Same direction up to sign.
    CHECK(std::min((a - b).norm(), (a + b).norm()) < 1e-8 * a.norm());
  }
}

TEST_CASE("training point pooling") {
  const auto trajs = academic_set(5, 3);  // 5 x 201 samples
  const Eigen::MatrixXd all = pool_training_points(trajs, 5000);
  CHECK(all.rows() == 1005);
  CHECK(all.row(201) == trajs[1].states().row(0));

  const Eigen::MatrixXd some = pool_training_points(trajs, 100);
  CHECK(some.rows() == 100);
  CHECK(some.row(0) == trajs[0].states().row(0));
  CHECK_THROWS_AS(pool_training_points(trajs, 1), InputError);
}
