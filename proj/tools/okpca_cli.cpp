// okpca_cli: dataset generation, model fitting, scoring, detection and experiment runs.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "okpca/detector.hpp"
#include "okpca/error.hpp"
#include "okpca/experiment.hpp"
#include "okpca/model_io.hpp"
#include "okpca/okpca.hpp"
#include "okpca/parallel.hpp"
#include "okpca/trajectory_io.hpp"

namespace fs = std::filesystem;
using namespace okpca;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  unsigned threads = 0;
  std::string out = ".";
};

void add_common(CLI::App* cmd, CommonOptions& o, const std::string& default_preset) {
  o.preset_name = default_preset;
  cmd->add_option("--config", o.config_path, "INI config file, or an output file with a config header")
      ->check(CLI::ExistingFile);
  cmd->add_option("--preset", o.preset_name, "named preset used as the base config")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--trials", o.trials, "number of trials");
  cmd->add_option("--threads", o.threads, "worker threads, 0 = hardware concurrency")
      ->capture_default_str();
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
}

ExperimentConfig resolve(const CommonOptions& o) {
  ExperimentConfig cfg = preset(o.preset_name);
  if (!o.config_path.empty()) cfg = read_config_file(o.config_path, cfg);
  if (o.seed) cfg.seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  cfg.validate();
  return cfg;
}

fs::path prepare_out(const CommonOptions& o) {
  fs::path dir(o.out);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  return out;
}

void write_config_file(const fs::path& path, const ExperimentConfig& cfg) {
  auto out = open_out(path);
  write_config(out, cfg);
}

std::vector<Trajectory> select(const Dataset& data, bool only_normal) {
  std::vector<Trajectory> out;
  for (std::size_t i = 0; i < data.trajectories.size(); ++i)
    if (!only_normal || data.entries[i].label != Label::Faulty)
      out.push_back(data.trajectories[i]);
  return out;
}

// --- simulate --------------------------------------------------------------------------------

void add_entries(Dataset& ds, const std::vector<Trajectory>& trajs, Label label,
                 const ExperimentConfig& cfg, bool faulty, std::uint64_t seed) {
  const auto which = cfg.system;
  for (const auto& t : trajs) {
    DatasetEntry e{t.id() + ".csv", label, {}};
    e.metadata["system"] = to_string(which);
    e.metadata["faulty"] = faulty ? "1" : "0";
    if (which != ExperimentKind::Academic) {
      const PidGains& g = !faulty ? cfg.nominal_gains
                          : which == ExperimentKind::QuadrotorMajor ? cfg.major_fault_gains
                                                                    : cfg.minor_fault_gains;
      e.metadata["kp"] = format_double(g.kp);
      e.metadata["ki"] = format_double(g.ki);
      e.metadata["kd"] = format_double(g.kd);
    }
    e.metadata["seed"] = std::to_string(seed);
    e.metadata["noise_sigma"] = format_double(cfg.sim.noise_sigma);
    ds.trajectories.push_back(t);
    ds.entries.push_back(std::move(e));
  }
}

void cmd_simulate(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const fs::path dir = prepare_out(o);
  const std::uint64_t seed = trial_seed(cfg.seed, 0);
  const TrialData data = generate_trial_data(cfg, cfg.system, seed);

  Dataset train, test;
  add_entries(train, data.training, Label::Normal, cfg, false, seed);
  add_entries(test, data.test_normal, Label::Normal, cfg, false, seed);
  add_entries(test, data.test_faulty, Label::Faulty, cfg, true, seed);
  write_dataset(dir / "train", train);
  write_dataset(dir / "test", test);
  write_config_file(dir / "train" / "config.ini", cfg);
  write_config_file(dir / "test" / "config.ini", cfg);
  std::cout << "wrote " << train.trajectories.size() << " training and "
            << test.trajectories.size() << " test trajectories to " << dir.string() << "\n";
}

// --- fit / score / detect --------------------------------------------------------------------

void cmd_fit(const CommonOptions& o, const std::string& data_dir, bool all_labels) {
  const ExperimentConfig cfg = resolve(o);
  const Dataset data = read_dataset(data_dir);
  const auto training = select(data, !all_labels);
  if (training.empty()) throw InputError("dataset '" + data_dir + "' has no normal trajectories");
  const OkpcaModel model =
      OkpcaModel::fit(KernelSpec::gaussian(cfg.mu), cfg.quadrature, training, cfg.num_components,
                      FitOptions{resolve_threads(o.threads)});

  std::stringstream buf;
  save_model(buf, model);
  auto doc = nlohmann::json::parse(buf);
  std::ostringstream cfg_text;
  write_config(cfg_text, cfg);
  doc["config"] = cfg_text.str();

  const fs::path path = prepare_out(o) / "model.json";
  auto out = open_out(path);
  out << doc.dump() << '\n';
  std::cout << "fitted " << model.num_components() << " components on " << training.size()
            << " trajectories -> " << path.string() << "\n";
}

struct Scored {
  OkpcaModel model;
  Dataset data;
  std::vector<double> errors;
};

Scored score_dataset(const CommonOptions& o, const std::string& model_path,
                     const std::string& data_dir) {
  Scored s{load_model(fs::path(model_path)), read_dataset(data_dir), {}};
  s.errors.resize(s.data.trajectories.size());
  parallel_for(s.errors.size(), resolve_threads(o.threads), [&](std::size_t i) {
    s.errors[i] = reconstruction_error(s.model, s.data.trajectories[i]);
  });
  return s;
}

void cmd_score(const CommonOptions& o, const std::string& model_path, const std::string& data_dir) {
  const ExperimentConfig cfg = resolve(o);
  const Scored s = score_dataset(o, model_path, data_dir);
  const fs::path path = prepare_out(o) / "scores.csv";
  auto out = open_out(path);
  write_config_header(out, cfg);
  out << "id,label,reconstruction_error,raw_error\n";
  for (std::size_t i = 0; i < s.errors.size(); ++i)
    out << s.data.trajectories[i].id() << ',' << to_string(s.data.entries[i].label) << ','
        << format_double(std::max(0.0, s.errors[i])) << ',' << format_double(s.errors[i]) << '\n';
  std::cout << "scored " << s.errors.size() << " trajectories -> " << path.string() << "\n";
}

void cmd_detect(const CommonOptions& o, const std::string& model_path, const std::string& data_dir,
                std::optional<double> threshold) {
  const ExperimentConfig cfg = resolve(o);
  const Scored s = score_dataset(o, model_path, data_dir);
  const double eps = threshold ? *threshold
                               : threshold_from_training(s.model, cfg.threshold_multiplier);
  if (!(eps > 0.0)) throw InputError("threshold must be positive");

  std::vector<DetectionReport> reports;
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < s.errors.size(); ++i) {
    reports.push_back(make_report(s.data.trajectories[i].id(), s.errors[i], eps,
                                  s.model.num_components()));
    flagged += reports.back().verdict == Verdict::Faulty;
  }
  const fs::path path = prepare_out(o) / "report.csv";
  auto out = open_out(path);
  write_config_header(out, cfg);
  write_report_csv(out, reports);
  std::cout << flagged << " of " << reports.size() << " flagged faulty at threshold "
            << format_double(eps) << " -> " << path.string() << "\n";
}

// --- experiment / compare-kpca ---------------------------------------------------------------

void print_row(const std::string& label, const ExperimentSummary& s) {
  std::cout << label << ": M=" << s.num_training << " trials=" << s.trials
            << " FP=" << 100.0 * s.false_positive_rate << "% FN=" << 100.0 * s.false_negative_rate
            << "%\n";
}

void cmd_experiment(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const fs::path dir = prepare_out(o);
  const unsigned threads = resolve_threads(o.threads);

  std::vector<SummaryRow> rows;
  if (!cfg.sweep_training_sizes.empty()) {
    const auto sweep = run_training_size_sweep(cfg, cfg.system, cfg.trials, threads);
    for (const auto& s : sweep) {
      const std::string tag = "M" + std::to_string(s.num_training);
      auto trials = open_out(dir / ("trials-" + tag + ".csv"));
      write_trials_csv(trials, cfg, s);
      auto scores = open_out(dir / ("scores-" + tag + ".csv"));
      write_scores_csv(scores, cfg, s);
      rows.push_back({"M=" + std::to_string(s.num_training), s});
    }
  } else {
    const auto s = run_experiment(cfg, cfg.system, cfg.trials, DetectorMethod::Okpca, threads);
    auto trials = open_out(dir / "trials.csv");
    write_trials_csv(trials, cfg, s);
    auto scores = open_out(dir / "scores.csv");
    write_scores_csv(scores, cfg, s);
    rows.push_back({cfg.name, s});
  }
  auto summary = open_out(dir / "summary.csv");
  write_summary_csv(summary, cfg, rows);
  for (const auto& r : rows) print_row(r.label, r.summary);
}

void cmd_compare(const CommonOptions& o, const std::string& noisy_config,
                 const std::string& noisy_preset) {
  const ExperimentConfig clean = resolve(o);
  ExperimentConfig noisy = preset(noisy_preset);
  if (!noisy_config.empty()) noisy = read_config_file(noisy_config, noisy);
  noisy.seed = clean.seed;
  noisy.trials = clean.trials;
  noisy.validate();

  const fs::path dir = prepare_out(o);
  const unsigned threads = resolve_threads(o.threads);
  struct Row {
    const char* label;
    const ExperimentConfig* cfg;
    DetectorMethod method;
  };
  const Row plan[] = {{"okpca-no-noise", &clean, DetectorMethod::Okpca},
                      {"okpca-noise", &noisy, DetectorMethod::Okpca},
                      {"kpca-no-noise", &clean, DetectorMethod::Kpca},
                      {"kpca-noise", &noisy, DetectorMethod::Kpca}};
  std::vector<SummaryRow> rows;
  for (const auto& p : plan) {
    auto s = run_experiment(*p.cfg, p.cfg->system, p.cfg->trials, p.method, threads);
    auto trials = open_out(dir / (std::string("trials-") + p.label + ".csv"));
    write_trials_csv(trials, *p.cfg, s);
    print_row(p.label, s);
    rows.push_back({p.label, std::move(s)});
  }
  // The noisy rows' config is in their trials files; the summary carries the noise-free one.
  auto summary = open_out(dir / "summary.csv");
  write_summary_csv(summary, clean, rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Occupation-kernel PCA fault detection"};
  app.require_subcommand(1);

  std::string presets;
  for (const auto& n : preset_names()) presets += (presets.empty() ? "" : ", ") + n;
  app.footer("presets: " + presets);

  CommonOptions sim_o, fit_o, score_o, detect_o, exp_o, cmp_o;
  std::string fit_data, score_model, score_data, detect_model, detect_data;
  std::string noisy_config, noisy_preset = "exp1-noisy";
  std::optional<double> threshold;
  bool fit_all = false;

  auto* sim = app.add_subcommand("simulate", "write training and test datasets for one trial");
  add_common(sim, sim_o, "exp1");

  auto* fit = app.add_subcommand("fit", "fit a model on the normal trajectories of a dataset");
  add_common(fit, fit_o, "exp1");
  fit->add_option("--data", fit_data, "dataset directory")->required()->check(CLI::ExistingDirectory);
  fit->add_flag("--all-labels", fit_all, "also train on trajectories labelled faulty");

  auto* score = app.add_subcommand("score", "reconstruction errors of a dataset");
  add_common(score, score_o, "exp1");
  score->add_option("--model", score_model, "model JSON")->required()->check(CLI::ExistingFile);
  score->add_option("--data", score_data, "dataset directory")->required()->check(CLI::ExistingDirectory);

  auto* detect = app.add_subcommand("detect", "threshold and verdict per trajectory");
  add_common(detect, detect_o, "exp1");
  detect->add_option("--model", detect_model, "model JSON")->required()->check(CLI::ExistingFile);
  detect->add_option("--data", detect_data, "dataset directory")->required()->check(CLI::ExistingDirectory);
  detect->add_option("--threshold", threshold,
                     "explicit threshold; default is multiplier * max training error");

  auto* exp = app.add_subcommand("experiment", "repeated fault-detection trials");
  add_common(exp, exp_o, "exp1");

  auto* cmp = app.add_subcommand("compare-kpca", "OKPCA vs pointwise KPCA, with and without noise");
  add_common(cmp, cmp_o, "exp1");
  cmp->add_option("--noisy-config", noisy_config, "config for the noisy rows")->check(CLI::ExistingFile);
  cmp->add_option("--noisy-preset", noisy_preset, "preset for the noisy rows")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) cmd_simulate(sim_o);
    else if (*fit) cmd_fit(fit_o, fit_data, fit_all);
    else if (*score) cmd_score(score_o, score_model, score_data);
    else if (*detect) cmd_detect(detect_o, detect_model, detect_data, threshold);
    else if (*exp) cmd_experiment(exp_o);
    else if (*cmp) cmd_compare(cmp_o, noisy_config, noisy_preset);
  } catch (const std::exception& e) {
    std::cerr << "okpca_cli: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
