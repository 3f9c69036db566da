#include "okpca/experiment.hpp"

#include <ostream>

#include "okpca/error.hpp"
#include "okpca/kpca_baseline.hpp"
#include "okpca/okpca.hpp"
#include "okpca/parallel.hpp"
#include "okpca/trajectory_io.hpp"

namespace okpca {

namespace {

// RNG stream tags. Each trajectory draws its initial condition and its noise from separate
// streams keyed by its index.
enum Stream : std::uint64_t {
  kTrialSeeds = 1,
  kTrainingInitial = 10,
  kTrainingNoise = 11,
  kNormalInitial = 20,
  kNormalNoise = 21,
  kFaultyInitial = 30,
  kFaultyNoise = 31,
};

std::vector<Trajectory> generate_set(const OdeSystem& system, const InitialSampler& sampler,
                                     const SimConfig& sim, std::size_t count,
                                     std::uint64_t trial_seed, Stream ic_stream,
                                     Stream noise_stream, const std::string& prefix) {
  std::vector<Trajectory> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto ic_rng = make_rng(trial_seed, ic_stream, i);
    const Eigen::VectorXd ic = sample_initial(sampler, ic_rng);
    Trajectory traj = simulate(system, ic, sim, prefix + std::to_string(i));
    if (sim.noise_sigma > 0.0) {
      const std::uint64_t noise_seed = make_rng(trial_seed, noise_stream, i)();
      traj = add_noise(traj, sim.noise_sigma, noise_seed);
    }
    out.push_back(std::move(traj));
  }
  return out;
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Academic:
      return "academic";
    case ExperimentKind::QuadrotorMajor:
      return "quadrotor-major";
    case ExperimentKind::QuadrotorMinor:
      return "quadrotor-minor";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  if (name == "academic") return ExperimentKind::Academic;
  if (name == "quadrotor-major") return ExperimentKind::QuadrotorMajor;
  if (name == "quadrotor-minor") return ExperimentKind::QuadrotorMinor;
  throw InputError("unknown system '" + name +
                   "' (expected academic, quadrotor-major or quadrotor-minor)");
}

const char* to_string(DetectorMethod method) {
  return method == DetectorMethod::Okpca ? "okpca" : "kpca";
}

ExperimentSystems experiment_systems(const ExperimentConfig& cfg, ExperimentKind which) {
  if (which == ExperimentKind::Academic)
    return {academic_system(false), academic_system(true), InitialSampler::unit_circle()};
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(quad::kOutputDim);
  const PidGains& fault =
      which == ExperimentKind::QuadrotorMajor ? cfg.major_fault_gains : cfg.minor_fault_gains;
  ExperimentSystems systems{quadrotor_system(cfg.nominal_gains, origin, cfg.quadrotor),
                            quadrotor_system(fault, origin, cfg.quadrotor),
                            InitialSampler::box(2.0, quad::kOutputDim)};
  systems.faulty.name = std::string("quadrotor-") +
                        (which == ExperimentKind::QuadrotorMajor ? "major" : "minor") + "-fault";
  return systems;
}

TrialData generate_trial_data(const ExperimentConfig& cfg, ExperimentKind which,
                              std::uint64_t trial_seed) {
  const ExperimentSystems sys = experiment_systems(cfg, which);
  TrialData data;
  data.training = generate_set(sys.nominal, sys.sampler, cfg.sim, cfg.num_training, trial_seed,
                               kTrainingInitial, kTrainingNoise, "train-");
  data.test_normal = generate_set(sys.nominal, sys.sampler, cfg.sim, cfg.num_test_normal,
                                  trial_seed, kNormalInitial, kNormalNoise, "normal-");
  data.test_faulty = generate_set(sys.faulty, sys.sampler, cfg.sim, cfg.num_test_faulty,
                                  trial_seed, kFaultyInitial, kFaultyNoise, "faulty-");
  return data;
}

TrialOutcome evaluate_trial(const ExperimentConfig& cfg, const TrialData& data,
                            DetectorMethod method, unsigned threads) {
  TrialOutcome outcome;
  std::vector<double> normal_errors(data.test_normal.size());
  std::vector<double> faulty_errors(data.test_faulty.size());
  std::size_t components = 0;

  if (method == DetectorMethod::Okpca) {
    const OkpcaModel model =
        OkpcaModel::fit(KernelSpec::gaussian(cfg.mu), cfg.quadrature, data.training,
                        cfg.num_components, FitOptions{threads});
    const auto train = training_errors(model);
    outcome.max_training_error = std::max(0.0, *std::max_element(train.begin(), train.end()));
    outcome.threshold = threshold_from_errors(train, cfg.threshold_multiplier);
    parallel_for(normal_errors.size(), threads, [&](std::size_t i) {
      normal_errors[i] = reconstruction_error(model, data.test_normal[i]);
    });
    parallel_for(faulty_errors.size(), threads, [&](std::size_t i) {
      faulty_errors[i] = reconstruction_error(model, data.test_faulty[i]);
    });
    components = model.num_components();
  } else {
    const KpcaModel model =
        KpcaModel::fit(KernelSpec::gaussian(cfg.kpca_mu),
                       pool_training_points(data.training, cfg.kpca_max_points),
                       cfg.kpca_components);
    std::vector<double> train(data.training.size());
    parallel_for(train.size(), threads,
                 [&](std::size_t i) { train[i] = model.trajectory_error(data.training[i]); });
    outcome.max_training_error = std::max(0.0, *std::max_element(train.begin(), train.end()));
    outcome.threshold = threshold_from_errors(train, cfg.kpca_threshold_multiplier);
    parallel_for(normal_errors.size(), threads, [&](std::size_t i) {
      normal_errors[i] = model.trajectory_error(data.test_normal[i]);
    });
    parallel_for(faulty_errors.size(), threads, [&](std::size_t i) {
      faulty_errors[i] = model.trajectory_error(data.test_faulty[i]);
    });
    components = model.num_components();
  }

  for (std::size_t i = 0; i < normal_errors.size(); ++i) {
    auto report =
        make_report(data.test_normal[i].id(), normal_errors[i], outcome.threshold, components);
    (report.verdict == Verdict::Faulty ? outcome.false_positives : outcome.true_negatives)++;
    outcome.normal_reports.push_back(std::move(report));
  }
  for (std::size_t i = 0; i < faulty_errors.size(); ++i) {
    auto report =
        make_report(data.test_faulty[i].id(), faulty_errors[i], outcome.threshold, components);
    (report.verdict == Verdict::Faulty ? outcome.true_positives : outcome.false_negatives)++;
    outcome.faulty_reports.push_back(std::move(report));
  }
  return outcome;
}

TrialOutcome run_trial(const ExperimentConfig& cfg, ExperimentKind which, std::uint64_t seed,
                       DetectorMethod method, unsigned threads) {
  cfg.validate();
  const TrialData data = generate_trial_data(cfg, which, seed);
  TrialOutcome outcome = evaluate_trial(cfg, data, method, threads);
  outcome.trial_seed = seed;
  return outcome;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial) {
  return make_rng(master_seed, kTrialSeeds, trial)();
}

ExperimentSummary summarize(std::vector<TrialOutcome> outcomes, std::size_t num_training) {
  ExperimentSummary s;
  s.num_training = num_training;
  s.trials = outcomes.size();
  std::size_t normals = 0;
  std::size_t faulties = 0;
  for (const auto& o : outcomes) {
    s.false_positives += o.false_positives;
    s.false_negatives += o.false_negatives;
    s.true_positives += o.true_positives;
    s.true_negatives += o.true_negatives;
    normals += o.false_positives + o.true_negatives;
    faulties += o.false_negatives + o.true_positives;
  }
  s.false_positive_rate = normals ? static_cast<double>(s.false_positives) / normals : 0.0;
  s.false_negative_rate = faulties ? static_cast<double>(s.false_negatives) / faulties : 0.0;
  s.outcomes = std::move(outcomes);
  return s;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg, ExperimentKind which,
                                 std::size_t trials, DetectorMethod method, unsigned threads) {
  cfg.validate();
  if (trials == 0) throw InputError("at least one trial is required");
  std::vector<TrialOutcome> outcomes(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    outcomes[t] = run_trial(cfg, which, trial_seed(cfg.seed, t), method, 1);
  });
  return summarize(std::move(outcomes), cfg.num_training);
}

std::vector<ExperimentSummary> run_training_size_sweep(const ExperimentConfig& cfg,
                                                       ExperimentKind which, std::size_t trials,
                                                       unsigned threads) {
  if (cfg.sweep_training_sizes.empty()) throw InputError("config has no training-size sweep");
  std::vector<ExperimentSummary> out;
  for (std::size_t m : cfg.sweep_training_sizes) {
    ExperimentConfig one = cfg;
    one.num_training = m;
    out.push_back(run_experiment(one, which, trials, DetectorMethod::Okpca, threads));
  }
  return out;
}

void write_config_header(std::ostream& out, const ExperimentConfig& cfg) {
  out << "# okpca-config\n";
  write_config(out, cfg, "# ");
  out << "# end-config\n";
}

void write_trials_csv(std::ostream& out, const ExperimentConfig& cfg,
                      const ExperimentSummary& summary) {
  write_config_header(out, cfg);
  out << "trial,seed,num_training,threshold,max_training_error,false_positives,false_negatives,"
         "true_positives,true_negatives\n";
  for (std::size_t t = 0; t < summary.outcomes.size(); ++t) {
    const auto& o = summary.outcomes[t];
    out << t << ',' << o.trial_seed << ',' << summary.num_training << ','
        << format_double(o.threshold) << ',' << format_double(o.max_training_error) << ','
        << o.false_positives << ',' << o.false_negatives << ',' << o.true_positives << ','
        << o.true_negatives << '\n';
  }
}

void write_scores_csv(std::ostream& out, const ExperimentConfig& cfg,
                      const ExperimentSummary& summary) {
  write_config_header(out, cfg);
  out << "trial,class,id,reconstruction_error,threshold,verdict\n";
  for (std::size_t t = 0; t < summary.outcomes.size(); ++t) {
    const auto& o = summary.outcomes[t];
    auto emit = [&](const char* cls, const std::vector<DetectionReport>& reports) {
      for (const auto& r : reports)
        out << t << ',' << cls << ',' << r.trajectory_id << ','
            << format_double(r.reconstruction_error) << ',' << format_double(r.threshold) << ','
            << to_string(r.verdict) << '\n';
    };
    emit("normal", o.normal_reports);
    emit("faulty", o.faulty_reports);
  }
}

void write_summary_csv(std::ostream& out, const ExperimentConfig& cfg,
                       const std::vector<SummaryRow>& rows) {
  write_config_header(out, cfg);
  out << "label,num_training,trials,false_positives,false_negatives,true_positives,"
         "true_negatives,false_positive_rate,false_negative_rate\n";
  for (const auto& row : rows) {
    const auto& s = row.summary;
    out << row.label << ',' << s.num_training << ',' << s.trials << ',' << s.false_positives << ','
        << s.false_negatives << ',' << s.true_positives << ',' << s.true_negatives << ','
        << format_double(s.false_positive_rate) << ',' << format_double(s.false_negative_rate)
        << '\n';
  }
}

}  // namespace okpca
