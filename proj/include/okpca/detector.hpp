#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "okpca/okpca.hpp"

namespace okpca {

enum class Verdict { Normal, Faulty };

const char* to_string(Verdict verdict);

struct DetectionReport {
  std::string trajectory_id;
  double reconstruction_error = 0.0;  // clamped at zero
  double raw_error = 0.0;             // as computed, may be a rounding-level negative
  double threshold = 0.0;
  Verdict verdict = Verdict::Normal;
  std::size_t num_components_used = 0;
};

/// R(gamma) = |Phi~(gamma)|^2 - sum_k <Phi~(gamma), v^(k)>^2, unclamped.
double reconstruction_error(const OkpcaModel& model, const Trajectory& traj);

/// Reconstruction errors of the model's own training trajectories, from the stored Gram matrix.
std::vector<double> training_errors(const OkpcaModel& model);

/// Training errors below this make the threshold meaningless; a warning is logged.
inline constexpr double kDegenerateTrainingError = 1e-12;

/// multiplier * max_i R(gamma_i) over the training set.
double threshold_from_training(const OkpcaModel& model, double multiplier);

/// Shared by both detectors: multiplier * max(errors), warning when the max is degenerate.
double threshold_from_errors(std::span<const double> errors, double multiplier);

/// Faulty iff the error is strictly above the threshold.
Verdict decide(double error, double threshold);

DetectionReport make_report(std::string id, double raw_error, double threshold,
                            std::size_t num_components);

DetectionReport classify(const OkpcaModel& model, double threshold, const Trajectory& traj);

std::vector<DetectionReport> classify_batch(const OkpcaModel& model, double threshold,
                                            std::span<const Trajectory> trajectories,
                                            unsigned threads = 1);

/// Columns `id,reconstruction_error,threshold,verdict`.
void write_report_csv(std::ostream& out, std::span<const DetectionReport> reports);

}  // namespace okpca
