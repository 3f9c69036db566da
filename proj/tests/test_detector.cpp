#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "okpca/detector.hpp"
#include "okpca/error.hpp"
#include "test_support.hpp"

using namespace okpca;
using namespace okpca::testing;

namespace {
const QuadratureRule kTrap{};
const KernelSpec kSpec = KernelSpec::gaussian(0.6);
}  // namespace

TEST_CASE("training members score zero at full rank and are normal") {
  const auto train = academic_set(10, 31);
  const std::size_t r = numerical_rank(center_gram(gram_matrix(kSpec, kTrap, train)).entries());
  const auto model = OkpcaModel::fit(kSpec, kTrap, train, r);
  for (const auto& g : train) {
    CHECK(std::abs(reconstruction_error(model, g)) < 1e-8);
    CHECK(classify(model, 1e-7, g).verdict == Verdict::Normal);
  }
  for (double e : training_errors(model)) CHECK(std::abs(e) < 1e-8);
}

TEST_CASE("mirror pair model reconstructs its members") {
  const auto times = uniform_times(0, 2, 5);
  const std::vector<Trajectory> t{constant_trajectory(Eigen::Vector2d(0.3, -0.1), times),
                                  constant_trajectory(Eigen::Vector2d(-0.3, -0.1), times)};
  const auto model = OkpcaModel::fit(kSpec, kTrap, t, 1);
  CHECK(std::abs(reconstruction_error(model, t[0])) < 1e-10);
  CHECK(std::abs(reconstruction_error(model, t[1])) < 1e-10);
}

TEST_CASE("threshold and decision rule") {
  const std::vector<double> errs{1e-6, 3e-6, 2e-6};
  CHECK(threshold_from_errors(errs, 2.0) == doctest::Approx(6e-6));
  CHECK_THROWS_AS(threshold_from_errors(errs, 0.0), InputError);
  CHECK_THROWS_AS(threshold_from_errors(std::vector<double>{}, 2.0), InputError);

  CHECK(decide(1.0, 1.0) == Verdict::Normal);
  CHECK(decide(std::nextafter(1.0, 2.0), 1.0) == Verdict::Faulty);
  CHECK(decide(0.5, 1.0) == Verdict::Normal);

  const auto r = make_report("g", -3e-12, 1e-6, 4);
  CHECK(r.reconstruction_error == 0.0);
  CHECK(r.raw_error == -3e-12);
  CHECK(r.verdict == Verdict::Normal);
  CHECK(r.num_components_used == 4);
}

TEST_CASE("threshold from training matches the stored errors") {
  const auto model = OkpcaModel::fit(kSpec, kTrap, academic_set(60, 2), 15);
  const auto errs = training_errors(model);
  REQUIRE(errs.size() == 60);
  const double max = *std::max_element(errs.begin(), errs.end());
  CHECK(threshold_from_training(model, 2.0) == doctest::Approx(2.0 * max).epsilon(1e-15));
  // Stored-row errors agree with errors from freshly integrated inner products.
  for (std::size_t i = 0; i < 60; i += 7)
    CHECK(errs[i] == doctest::Approx(reconstruction_error(model, model.training()[i]))
                         .epsilon(1e-6)
                         .scale(1e-12));
  CHECK_THROWS_AS(classify(model, 0.0, model.training()[0]), InputError);
}

TEST_CASE("faulty academic trajectories stand out from normal ones") {
  const auto model = OkpcaModel::fit(kSpec, kTrap, academic_set(100, 55), 20);
  const double eps = threshold_from_training(model, 2.0);
  const auto normal = classify_batch(model, eps, academic_set(20, 56), 2);
  const auto faulty = classify_batch(model, eps, academic_set(20, 57, true), 2);
  const auto count = [](const auto& reports) {
    return std::count_if(reports.begin(), reports.end(),
                         [](const DetectionReport& r) { return r.verdict == Verdict::Faulty; });
  };
  CHECK(count(faulty) >= 19);
  CHECK(count(normal) <= 1);
  for (const auto& r : normal) CHECK(r.raw_error >= -1e-8);
  for (const auto& r : faulty) CHECK(r.reconstruction_error > r.threshold / 2);

  // Determinism.
  const auto again = classify_batch(model, eps, academic_set(20, 57, true), 1);
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].raw_error == faulty[i].raw_error);
    CHECK(again[i].verdict == faulty[i].verdict);
  }
}

TEST_CASE("report csv columns") {
  std::vector<DetectionReport> reports{make_report("a", 0.5, 1.0, 3), make_report("b", 2.0, 1.0, 3)};
  std::ostringstream out;
  write_report_csv(out, reports);
  CHECK(out.str() == "id,reconstruction_error,threshold,verdict\na,0.5,1,normal\nb,2,1,faulty\n");
}
