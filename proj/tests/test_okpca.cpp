#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <random>

#include "okpca/error.hpp"
#include "okpca/okpca.hpp"
#include "test_support.hpp"

using namespace okpca;
using namespace okpca::testing;

namespace {

const QuadratureRule kTrap{};
const KernelSpec kSpec = KernelSpec::gaussian(0.6);

std::size_t rank_of(const std::vector<Trajectory>& trajs) {
  return numerical_rank(center_gram(gram_matrix(kSpec, kTrap, trajs)).entries());
}

}  // namespace

TEST_CASE("gram matrix of constant trajectories in closed form") {
  const Eigen::Vector2d xi(0.1, 0.2), xj(-0.3, 0.5);
  const std::vector<Trajectory> t{constant_trajectory(xi, uniform_times(0, 1.5, 20)),
                                  constant_trajectory(xj, uniform_times(0, 2.5, 7))};
  const GramMatrix k = gram_matrix(kSpec, kTrap, t);
  CHECK_FALSE(k.centered());
  CHECK(k(0, 0) == doctest::Approx(1.5 * 1.5).epsilon(1e-14));
  CHECK(k(1, 1) == doctest::Approx(2.5 * 2.5).epsilon(1e-14));
  CHECK(k(0, 1) == doctest::Approx(1.5 * 2.5 * eval_kernel(kSpec, xi, xj)).epsilon(1e-14));
  CHECK(k(0, 1) == k(1, 0));

  const GramMatrix one = gram_matrix(kSpec, kTrap, std::span(t).first(1));
  CHECK(one.size() == 1);
  CHECK(one(0, 0) > 0.0);
  CHECK_THROWS_AS(gram_matrix(kSpec, kTrap, std::span<const Trajectory>{}), InputError);
}

TEST_CASE("gram matrix is exactly symmetric, thread independent and PSD") {
  const auto set = academic_set(100, 17);
  const GramMatrix k1 = gram_matrix(kSpec, kTrap, set, 1);
  const GramMatrix k3 = gram_matrix(kSpec, kTrap, set, 3);
  CHECK(k1.entries() == k3.entries());
  CHECK(k1.entries() == k1.entries().transpose());
  CHECK(k1(3, 7) == doctest::Approx(inner_oracle(0.6, set[3], set[7])).epsilon(1e-13));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k1.entries());
  CHECK(es.eigenvalues().minCoeff() >= -1e-8 * es.eigenvalues().maxCoeff());
}

TEST_CASE("centering") {
  SUBCASE("single entry centers to zero") {
    const GramMatrix c = center_gram(GramMatrix(Eigen::MatrixXd::Constant(1, 1, 3.0), false));
    CHECK(c.centered());
    CHECK(c(0, 0) == 0.0);
  }
  SUBCASE("constant matrix centers to zero") {
    const GramMatrix c = center_gram(GramMatrix(Eigen::MatrixXd::Constant(6, 6, 1.0 / 6), false));
    CHECK(c.entries().cwiseAbs().maxCoeff() < 1e-16);
  }
  SUBCASE("random symmetric matrices match the projector form") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::MatrixXd a(5, 5);
      for (Eigen::Index i = 0; i < 25; ++i) a.data()[i] = u(rng);
      const Eigen::MatrixXd k = a + a.transpose();
      const Eigen::MatrixXd c = center_gram(GramMatrix(k, false)).entries();
      CHECK((c - centering_oracle(k)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(c.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
      CHECK(c.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("centering twice is refused") {
    const GramMatrix c = center_gram(GramMatrix(Eigen::MatrixXd::Identity(3, 3), false));
    CHECK_THROWS_AS(center_gram(c), InputError);
  }
}

TEST_CASE("fit rejects degenerate requests") {
  const auto g = academic_set(1, 3).front();
  try {
    OkpcaModel::fit(kSpec, kTrap, {g, g}, 1);
    FAIL("duplicates must not be fittable");
  } catch (const RankError& e) {
    CHECK(e.achievable_rank() == 0);
    CHECK(e.requested() == 1);
  }
  CHECK_THROWS_AS(OkpcaModel::fit(kSpec, kTrap, {g}, 1), InputError);
  const auto set = academic_set(5, 2);
  CHECK_THROWS_AS(OkpcaModel::fit(kSpec, kTrap, set, 0), InputError);
  try {
    OkpcaModel::fit(kSpec, kTrap, set, 5);
    FAIL("five centered features span at most four directions");
  } catch (const RankError& e) {
    CHECK(e.achievable_rank() == 4);
  }
  std::vector<Trajectory> mixed = set;
  mixed.push_back(constant_trajectory(Eigen::Vector3d::Zero(), {0.0, 1.0}));
  CHECK_THROWS_AS(OkpcaModel::fit(kSpec, kTrap, mixed, 1), InputError);
}

TEST_CASE("three constant trajectories: rank and trace identity") {
  const std::vector<Trajectory> t{
      constant_trajectory(Eigen::Vector2d(0.0, 0.0), uniform_times(0, 2, 5)),
      constant_trajectory(Eigen::Vector2d(0.5, 0.1), uniform_times(0, 1, 5)),
      constant_trajectory(Eigen::Vector2d(-0.4, 0.9), uniform_times(0, 3, 5))};
  const std::size_t r = rank_of(t);
  CHECK(r <= 2);
  REQUIRE(r >= 1);
  const auto model = OkpcaModel::fit(kSpec, kTrap, t, r);
  CHECK(std::abs(model.eigenvalues().sum() - model.gram_centered().entries().trace()) < 1e-10);
}

TEST_CASE("the academic training set admits twenty components") {
  const auto set = academic_set(100, 42);
  CHECK(rank_of(set) >= 20);
  const auto model = OkpcaModel::fit(kSpec, kTrap, set, 20, FitOptions{2});
  CHECK(model.num_components() == 20);
  const auto& ev = model.eigenvalues();
  for (Eigen::Index k = 1; k < ev.size(); ++k) CHECK(ev[k] <= ev[k - 1]);

  const Eigen::MatrixXd& kc = model.gram_centered().entries();
  const Eigen::MatrixXd& a = model.alphas();
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const Eigen::VectorXd u = a.col(k) * std::sqrt(ev[k]);
    CHECK((kc * u - ev[k] * u).norm() <= 1e-8 * kc.norm());
    CHECK(std::abs(a.col(k).dot(kc * a.col(k)) - 1.0) < 1e-8);
  }
  // Orthonormality of the principal directions, lambda-scaled coefficient form.
  for (Eigen::Index k = 0; k < a.cols(); ++k)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      CHECK(std::abs(ev[k] * a.col(k).dot(a.col(j)) - (k == j ? 1.0 : 0.0)) < 1e-8);
}

TEST_CASE("mirror pair of constant trajectories") {
  const auto times = uniform_times(0, 1, 11);
  const std::vector<Trajectory> t{constant_trajectory(Eigen::Vector2d(0.4, 0.2), times),
                                  constant_trajectory(Eigen::Vector2d(-0.4, 0.2), times)};
  const auto model = OkpcaModel::fit(kSpec, kTrap, t, 1);
  const double p1 = model.project(t[0])[0];
  const double p2 = model.project(t[1])[0];
  CHECK(std::abs(p1 + p2) < 1e-10);
  CHECK(std::abs(p1) > 0.1);
  // 2x2 closed form: the only centered direction carries lambda = (K11 - K12) with unit alpha
  // entries of opposite sign.
  const double k11 = model.gram_raw()(0, 0), k12 = model.gram_raw()(0, 1);
  CHECK(model.eigenvalues()[0] == doctest::Approx(k11 - k12).epsilon(1e-12));
  CHECK(std::abs(model.alphas()(0, 0) + model.alphas()(1, 0)) < 1e-12);
}

TEST_CASE("training members are reconstructed completely at full rank") {
  const auto set = academic_set(10, 77);
  const auto model = OkpcaModel::fit(kSpec, kTrap, set, rank_of(set));
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto ip = model.inner_products(set[i]);
    const double norm2 = model.basis().centered_norm_squared(ip.self, ip.cross);
    CHECK(std::abs(model.project(set[i]).squaredNorm() - norm2) < 1e-8);
    // The stored Gram row gives the same inner products as a fresh integration.
    const auto stored = model.training_inner_products(i);
    CHECK(stored.self == doctest::Approx(ip.self).epsilon(1e-14));
    CHECK((stored.cross - ip.cross).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("reconstruction error equals the inner-product form on the enlarged Gram matrix") {
  const auto train = academic_set(30, 5);
  auto tests = academic_set(4, 6);
  const auto faulty = academic_set(4, 7, true);
  tests.insert(tests.end(), faulty.begin(), faulty.end());
  const std::size_t n = 8;
  const auto model = OkpcaModel::fit(kSpec, kTrap, train, n);
  const Eigen::Index m = static_cast<Eigen::Index>(train.size());

  for (const auto& g : tests) {
    std::vector<Trajectory> all = train;
    all.push_back(g);
    const Eigen::MatrixXd big = gram_matrix(kSpec, kTrap, all).entries();
    // Coefficients over the M+1 raw features.
    Eigen::VectorXd f = Eigen::VectorXd::Constant(m + 1, -1.0 / m);
    f[m] = 1.0;
    std::vector<Eigen::VectorXd> v;
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(n); ++k) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(m + 1);
      const Eigen::VectorXd a = model.alphas().col(k);
      c.head(m) = a.array() - a.mean();
      v.push_back(c);
    }
    Eigen::VectorXd residual = f;
    double proj2 = 0.0;
    for (const auto& c : v) {
      const double p = f.dot(big * c);
      proj2 += p * p;
      residual -= p * c;
    }
    const double via_norm = f.dot(big * f) - proj2;
    const double via_inner = f.dot(big * residual);
    const auto ip = model.inner_products(g);
    const double r = model.basis().reconstruction_error(ip.self, ip.cross);
    CHECK(std::abs(r - via_norm) < 1e-9);
    CHECK(std::abs(r - via_inner) < 1e-9);
  }
}

TEST_CASE("nested models: error nonincreasing in N") {
  const auto train = academic_set(40, 9);
  const auto full = OkpcaModel::fit(kSpec, kTrap, train, rank_of(train));
  auto tests = academic_set(5, 10);
  const auto faulty = academic_set(5, 11, true);
  tests.insert(tests.end(), faulty.begin(), faulty.end());
  for (const auto& g : tests) {
    const auto ip = full.inner_products(g);
    double prev = full.basis().truncated(1).reconstruction_error(ip.self, ip.cross);
    CHECK(prev >= -1e-8);
    for (std::size_t n = 2; n <= full.num_components(); ++n) {
      const double r = full.basis().truncated(n).reconstruction_error(ip.self, ip.cross);
      CHECK(r <= prev + 1e-9);
      CHECK(r >= -1e-8);
      prev = r;
    }
  }
  CHECK(full.truncated(3).num_components() == 3);
  CHECK_THROWS_AS(full.truncated(0), InputError);
  CHECK_THROWS_AS(full.truncated(full.num_components() + 1), InputError);
}

TEST_CASE("permuting the training set leaves projections unchanged up to sign") {
  const auto train = academic_set(25, 12);
  std::vector<Trajectory> shuffled = train;
  std::mt19937_64 rng(1);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto a = OkpcaModel::fit(kSpec, kTrap, train, 6);
  const auto b = OkpcaModel::fit(kSpec, kTrap, shuffled, 6);
  CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
  for (const auto& g : academic_set(5, 13, true)) {
    const Eigen::VectorXd pa = a.project(g), pb = b.project(g);
    CHECK((pa.cwiseAbs() - pb.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("projection checks dimensions") {
  const auto model = OkpcaModel::fit(kSpec, kTrap, academic_set(5, 1), 2);
  CHECK_THROWS_AS(model.project(constant_trajectory(Eigen::Vector3d::Zero(), {0.0, 1.0})),
                  InputError);
}
