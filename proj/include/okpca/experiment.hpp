#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "okpca/detector.hpp"
#include "okpca/simulators.hpp"
#include "okpca/trajectory.hpp"

namespace okpca {

enum class ExperimentKind { Academic, QuadrotorMajor, QuadrotorMinor };

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

/// Every tunable of a batch of fault-detection trials. Written verbatim into every output file.
struct ExperimentConfig {
  std::string name = "exp1";
  ExperimentKind system = ExperimentKind::Academic;

  std::size_t num_training = 100;
  std::size_t num_test_normal = 20;
  std::size_t num_test_faulty = 20;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  /// Training-set sizes for the M sweep; empty unless the preset is a sweep.
  std::vector<std::size_t> sweep_training_sizes;

  double mu = 0.6;
  std::size_t num_components = 20;
  double threshold_multiplier = 2.0;
  QuadratureRule quadrature;

  double kpca_mu = 5.0;
  std::size_t kpca_components = 20;
  std::size_t kpca_max_points = 2000;
  double kpca_threshold_multiplier = 2.0;

  SimConfig sim;  // sim.noise_sigma is the measurement noise level

  PidGains nominal_gains = kNominalGains;
  PidGains major_fault_gains = kMajorFaultGains;
  PidGains minor_fault_gains = kMinorFaultGains;
  QuadrotorParams quadrotor;

  void validate() const;
};

/// Preset names: exp1, exp1-noisy, exp2-major, exp2-minor, table2-sweep.
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

/// Flat INI with sections. `line_prefix` is prepended to every line, which is how configs are
/// embedded as comment headers in CSV outputs.
void write_config(std::ostream& out, const ExperimentConfig& cfg, const std::string& line_prefix = {});

/// Reads a plain INI config, or the embedded config header of an output file produced by this
/// library. Keys that are absent keep the values of `base`.
ExperimentConfig read_config(std::istream& in, const std::string& source,
                             const ExperimentConfig& base = {});
ExperimentConfig read_config_file(const std::string& path, const ExperimentConfig& base = {});

/// The commented config block that heads every CSV output. read_config accepts it back.
void write_config_header(std::ostream& out, const ExperimentConfig& cfg);

/// Normal training data, fresh normal tests and faulty tests for one trial.
struct TrialData {
  std::vector<Trajectory> training;
  std::vector<Trajectory> test_normal;
  std::vector<Trajectory> test_faulty;
};

/// Deterministic in (cfg, which, trial_seed): every trajectory has its own RNG stream.
TrialData generate_trial_data(const ExperimentConfig& cfg, ExperimentKind which,
                              std::uint64_t trial_seed);

/// Nominal and faulty closed-loop systems plus initial-condition sampler for an experiment.
struct ExperimentSystems {
  OdeSystem nominal;
  OdeSystem faulty;
  InitialSampler sampler;
};
ExperimentSystems experiment_systems(const ExperimentConfig& cfg, ExperimentKind which);

enum class DetectorMethod { Okpca, Kpca };
const char* to_string(DetectorMethod method);

struct TrialOutcome {
  std::uint64_t trial_seed = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::size_t true_positives = 0;
  std::size_t true_negatives = 0;
  double threshold = 0.0;
  double max_training_error = 0.0;
  std::vector<DetectionReport> normal_reports;
  std::vector<DetectionReport> faulty_reports;
};

/// Fits the chosen detector on the training set, sets the threshold to multiplier * max training
/// error, and scores both test sets. A normal test above the threshold is a false positive; a
/// faulty test at or below it is a false negative.
TrialOutcome evaluate_trial(const ExperimentConfig& cfg, const TrialData& data,
                            DetectorMethod method, unsigned threads = 1);

TrialOutcome run_trial(const ExperimentConfig& cfg, ExperimentKind which, std::uint64_t trial_seed,
                       DetectorMethod method = DetectorMethod::Okpca, unsigned threads = 1);

/// Seed of trial t under a master seed.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial);

struct ExperimentSummary {
  std::size_t num_training = 0;
  std::size_t trials = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::size_t true_positives = 0;
  std::size_t true_negatives = 0;
  double false_positive_rate = 0.0;  // over normal tests only
  double false_negative_rate = 0.0;  // over faulty tests only
  std::vector<TrialOutcome> outcomes;
};

ExperimentSummary summarize(std::vector<TrialOutcome> outcomes, std::size_t num_training);

/// Runs `trials` trials with seeds trial_seed(cfg.seed, t), spread over `threads` workers.
/// Results do not depend on the thread count.
ExperimentSummary run_experiment(const ExperimentConfig& cfg, ExperimentKind which,
                                 std::size_t trials, DetectorMethod method = DetectorMethod::Okpca,
                                 unsigned threads = 1);

/// One run_experiment per entry of cfg.sweep_training_sizes, all from the same master seed.
std::vector<ExperimentSummary> run_training_size_sweep(const ExperimentConfig& cfg,
                                                       ExperimentKind which, std::size_t trials,
                                                       unsigned threads = 1);

/// Per-trial tallies, one row per trial.
void write_trials_csv(std::ostream& out, const ExperimentConfig& cfg,
                      const ExperimentSummary& summary);
/// Every test trajectory's score: trial, class, id, error, threshold, verdict.
void write_scores_csv(std::ostream& out, const ExperimentConfig& cfg,
                      const ExperimentSummary& summary);
/// One row per (label, summary).
struct SummaryRow {
  std::string label;
  ExperimentSummary summary;
};
void write_summary_csv(std::ostream& out, const ExperimentConfig& cfg,
                       const std::vector<SummaryRow>& rows);

}  // namespace okpca
