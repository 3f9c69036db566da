#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "okpca/error.hpp"
#include "okpca/trajectory_io.hpp"
#include "test_support.hpp"

using namespace okpca;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("okpca-io-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string message_of(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  try {
    read_trajectory_csv(in, source, "x");
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("trajectory csv round trips exactly") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1e3);
  Eigen::MatrixXd states(7, 3);
  for (Eigen::Index i = 0; i < states.size(); ++i) states.data()[i] = n(rng) * 1e-7;
  states(2, 1) = 1e-300;
  const Trajectory a(okpca::testing::random_times(0.1, 3.3, 7, rng), states, "a");

  std::stringstream buf;
  write_trajectory_csv(buf, a);
  CHECK(buf.str().rfind("t,x1,x2,x3\n", 0) == 0);
  const Trajectory b = read_trajectory_csv(buf, "<mem>", "a");
  CHECK(b.times() == a.times());
  CHECK(b.states() == a.states());
  CHECK(b.id() == "a");
}

TEST_CASE("malformed trajectory csv reports file and line") {
  CHECK(message_of("", "f.csv").find("f.csv") != std::string::npos);
  CHECK(message_of("time,x1\n0,1\n1,2\n", "f.csv").find("f.csv:1") != std::string::npos);
  CHECK(message_of("t,x2\n0,1\n1,2\n", "f.csv").find("f.csv:1") != std::string::npos);
  CHECK(message_of("t,x1\n0,1\n1,2,3\n", "f.csv").find("f.csv:3") != std::string::npos);
  CHECK(message_of("t,x1\n0,1\n1,abc\n", "f.csv").find("f.csv:3") != std::string::npos);
  CHECK(message_of("t,x1\n0,1\n0,2\n", "f.csv").find("f.csv:3") != std::string::npos);
  CHECK_FALSE(message_of("t,x1\n0,1\n", "f.csv").empty());
  CHECK(message_of("t,x1\n0,1\n1,2\n", "f.csv").empty());
}

TEST_CASE("dataset directory round trips with labels and metadata") {
  const fs::path dir = scratch_dir("roundtrip");
  const auto trajs = okpca::testing::academic_set(3, 5);
  Dataset ds;
  ds.trajectories = trajs;
  ds.entries = {{"n0.csv", Label::Normal, {{"system", "academic"}, {"seed", "5"}}},
                {"n1.csv", Label::Faulty, {{"system", "academic"}}},
                {"n2.csv", Label::Unknown, {{"noise_sigma", "0.01"}}}};
  write_dataset(dir, ds);

  const Dataset back = read_dataset(dir);
  REQUIRE(back.trajectories.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.trajectories[i].states() == trajs[i].states());
    CHECK(back.entries[i].label == ds.entries[i].label);
    CHECK(back.entries[i].file == ds.entries[i].file);
  }
  CHECK(back.entries[0].metadata.at("seed") == "5");
  CHECK(back.entries[2].metadata.at("noise_sigma") == "0.01");
  CHECK(back.entries[1].metadata.at("seed").empty());
}

TEST_CASE("dataset errors") {
  const fs::path dir = scratch_dir("errors");
  CHECK_THROWS_AS(read_dataset(dir), InputError);
  {
    std::ofstream m(dir / kManifestName);
    m << "name,label\n";
  }
  CHECK_THROWS_AS(read_dataset(dir), InputError);
  {
    std::ofstream m(dir / kManifestName);
    m << "file,label\nmissing.csv,normal\n";
  }
  CHECK_THROWS_AS(read_dataset(dir), InputError);
  {
    std::ofstream m(dir / kManifestName);
    m << "file,label\na.csv,broken\n";
    std::ofstream a(dir / "a.csv");
    a << "t,x1\n0,1\n1,1\n";
  }
  try {
    read_dataset(dir);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  CHECK_THROWS_AS(label_from_string("maybe"), InputError);
  CHECK(label_from_string("faulty") == Label::Faulty);
}
