#include "okpca/detector.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <ostream>

#include "okpca/error.hpp"
#include "okpca/parallel.hpp"
#include "okpca/trajectory_io.hpp"

namespace okpca {

const char* to_string(Verdict verdict) {
  return verdict == Verdict::Faulty ? "faulty" : "normal";
}

double reconstruction_error(const OkpcaModel& model, const Trajectory& traj) {
  const FeatureInnerProducts ip = model.inner_products(traj);
  return model.basis().reconstruction_error(ip.self, ip.cross);
}

std::vector<double> training_errors(const OkpcaModel& model) {
  std::vector<double> errors(model.num_training());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const FeatureInnerProducts ip = model.training_inner_products(i);
    errors[i] = model.basis().reconstruction_error(ip.self, ip.cross);
  }
  return errors;
}

double threshold_from_errors(std::span<const double> errors, double multiplier) {
  if (!(multiplier > 0.0) || !std::isfinite(multiplier))
    throw InputError("threshold multiplier must be positive, got " + std::to_string(multiplier));
  if (errors.empty()) throw InputError("no training errors to derive a threshold from");
  const double max_error = std::max(0.0, *std::max_element(errors.begin(), errors.end()));
  if (max_error < kDegenerateTrainingError)
    std::clog << "warning: maximum training reconstruction error is " << max_error
              << "; the threshold is degenerate (too many components retained?)\n";
  return multiplier * max_error;
}

double threshold_from_training(const OkpcaModel& model, double multiplier) {
  const auto errors = training_errors(model);
  return threshold_from_errors(errors, multiplier);
}

Verdict decide(double error, double threshold) {
  return error > threshold ? Verdict::Faulty : Verdict::Normal;
}

DetectionReport make_report(std::string id, double raw_error, double threshold,
                            std::size_t num_components) {
  DetectionReport report;
  report.trajectory_id = std::move(id);
  report.raw_error = raw_error;
  report.reconstruction_error = std::max(0.0, raw_error);
  report.threshold = threshold;
  report.verdict = decide(report.reconstruction_error, threshold);
  report.num_components_used = num_components;
  return report;
}

DetectionReport classify(const OkpcaModel& model, double threshold, const Trajectory& traj) {
  if (!(threshold > 0.0)) throw InputError("detection threshold must be positive");
  return make_report(traj.id(), reconstruction_error(model, traj), threshold,
                     model.num_components());
}

std::vector<DetectionReport> classify_batch(const OkpcaModel& model, double threshold,
                                            std::span<const Trajectory> trajectories,
                                            unsigned threads) {
  std::vector<DetectionReport> reports(trajectories.size());
  parallel_for(trajectories.size(), threads,
               [&](std::size_t i) { reports[i] = classify(model, threshold, trajectories[i]); });
  return reports;
}

void write_report_csv(std::ostream& out, std::span<const DetectionReport> reports) {
  out << "id,reconstruction_error,threshold,verdict\n";
  for (const auto& r : reports)
    out << r.trajectory_id << ',' << format_double(r.reconstruction_error) << ','
        << format_double(r.threshold) << ',' << to_string(r.verdict) << '\n';
}

}  // namespace okpca
