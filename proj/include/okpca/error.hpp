#pragma once

#include <stdexcept>
#include <string>

namespace okpca {

/// Bad arguments: dimension mismatches, invalid parameters, malformed files.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values or a failed factorization.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Requested more principal components than the centered Gram matrix supports.
class RankError : public std::runtime_error {
public:
  RankError(std::size_t requested, std::size_t rank)
      : std::runtime_error("requested " + std::to_string(requested) +
                           " components but the centered Gram matrix has numerical rank " +
                           std::to_string(rank)),
        requested_(requested), rank_(rank) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t achievable_rank() const noexcept { return rank_; }

private:
  std::size_t requested_;
  std::size_t rank_;
};

/// The integrator produced a non-finite state.
class SimulationDiverged : public std::runtime_error {
public:
  SimulationDiverged(const std::string& system, double time)
      : std::runtime_error("simulation of '" + system + "' diverged at t = " + std::to_string(time)),
        time_(time) {}

  double time() const noexcept { return time_; }

private:
  double time_;
};

}  // namespace okpca
