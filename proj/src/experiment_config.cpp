#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "okpca/error.hpp"
#include "okpca/experiment.hpp"
#include "okpca/trajectory_io.hpp"

namespace okpca {

void ExperimentConfig::validate() const {
  if (num_training < 2) throw InputError("num_training must be at least 2");
  if (num_test_normal + num_test_faulty == 0) throw InputError("no test trajectories requested");
  if (trials < 1) throw InputError("trials must be at least 1");
  if (num_components < 1 || kpca_components < 1)
    throw InputError("component counts must be at least 1");
  if (!(threshold_multiplier > 0.0) || !(kpca_threshold_multiplier > 0.0))
    throw InputError("threshold multipliers must be positive");
  if (kpca_max_points < 2) throw InputError("kpca max_points must be at least 2");
  for (std::size_t m : sweep_training_sizes)
    if (m < 2) throw InputError("sweep training sizes must be at least 2");
  KernelSpec::gaussian(mu);
  KernelSpec::gaussian(kpca_mu);
  sim.validate();
  nominal_gains.validate();
  major_fault_gains.validate();
  minor_fault_gains.validate();
  quadrotor.validate();
}

std::vector<std::string> preset_names() {
  return {"exp1", "exp1-noisy", "exp2-major", "exp2-minor", "table2-sweep"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;  // defaults are the noise-free academic experiment
  cfg.name = name;
  if (name == "exp1") return cfg;
  if (name == "exp1-noisy") {
    cfg.num_training = 150;
    cfg.mu = 0.4;
    cfg.sim.noise_sigma = 0.01;
    return cfg;
  }
  if (name == "table2-sweep") {
    cfg.trials = 20;
    cfg.sweep_training_sizes = {50, 100, 150, 300};
    return cfg;
  }
  if (name == "exp2-major" || name == "exp2-minor") {
    const bool major = name == "exp2-major";
    cfg.system = major ? ExperimentKind::QuadrotorMajor : ExperimentKind::QuadrotorMinor;
    cfg.trials = 10;
    cfg.mu = 1000.0;
    cfg.num_components = 50;
    cfg.threshold_multiplier = major ? 10.0 : 3.0;
    cfg.kpca_threshold_multiplier = cfg.threshold_multiplier;
    cfg.sim.dt_sample = 0.2;
    cfg.sim.duration = 15.2;
    cfg.sim.integrator_substeps = 10;
    cfg.sim.noise_sigma = 0.01;
    return cfg;
  }
  std::string known;
  for (const auto& p : preset_names()) known += (known.empty() ? "" : ", ") + p;
  throw InputError("unknown preset '" + name + "' (known: " + known + ")");
}

namespace {

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) out += (i ? "," : "") + std::to_string(sizes[i]);
  return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& where) {
  T value{};
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) throw InputError(where + ": invalid value '" + text + "'");
  return value;
}

std::vector<std::size_t> parse_sizes(const std::string& text, const std::string& where) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first == std::string::npos) continue;
    out.push_back(parse_number<std::size_t>(item.substr(first, last - first + 1), where));
  }
  return out;
}

/// Binds "section.key" to a field of the config for reading and writing.
struct Field {
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
};

template <typename T>
Field number_field(T ExperimentConfig::*member) {
  return {[member](const ExperimentConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return format_double(c.*member);
            else return std::to_string(c.*member);
          },
          [member](ExperimentConfig& c, const std::string& v, const std::string& where) {
            c.*member = parse_number<T>(v, where);
          }};
}

template <typename Get, typename Set>
Field custom_field(Get get, Set set) {
  return {get, set};
}

#define OKPCA_NESTED_DOUBLE(path)                                                          \
  custom_field([](const ExperimentConfig& c) { return format_double(c.path); },             \
               [](ExperimentConfig& c, const std::string& v, const std::string& w) {        \
                 c.path = parse_number<double>(v, w);                                       \
               })

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"experiment.name",
       custom_field([](const ExperimentConfig& c) { return c.name; },
                    [](ExperimentConfig& c, const std::string& v, const std::string&) { c.name = v; })},
      {"experiment.system",
       custom_field([](const ExperimentConfig& c) { return std::string(to_string(c.system)); },
                    [](ExperimentConfig& c, const std::string& v, const std::string& w) {
                      try {
                        c.system = experiment_kind_from_string(v);
                      } catch (const InputError& e) {
                        throw InputError(w + ": " + e.what());
                      }
                    })},
      {"experiment.num_training", number_field(&ExperimentConfig::num_training)},
      {"experiment.num_test_normal", number_field(&ExperimentConfig::num_test_normal)},
      {"experiment.num_test_faulty", number_field(&ExperimentConfig::num_test_faulty)},
      {"experiment.trials", number_field(&ExperimentConfig::trials)},
      {"experiment.seed", number_field(&ExperimentConfig::seed)},
      {"experiment.sweep_training_sizes",
       custom_field([](const ExperimentConfig& c) { return join_sizes(c.sweep_training_sizes); },
                    [](ExperimentConfig& c, const std::string& v, const std::string& w) {
                      c.sweep_training_sizes = parse_sizes(v, w);
                    })},
      {"okpca.mu", number_field(&ExperimentConfig::mu)},
      {"okpca.components", number_field(&ExperimentConfig::num_components)},
      {"okpca.threshold_multiplier", number_field(&ExperimentConfig::threshold_multiplier)},
      {"okpca.quadrature",
       custom_field([](const ExperimentConfig& c) { return std::string(to_string(c.quadrature.scheme)); },
                    [](ExperimentConfig& c, const std::string& v, const std::string& w) {
                      try {
                        c.quadrature.scheme = quadrature_scheme_from_string(v);
                      } catch (const InputError& e) {
                        throw InputError(w + ": " + e.what());
                      }
                    })},
      {"kpca.mu", number_field(&ExperimentConfig::kpca_mu)},
      {"kpca.components", number_field(&ExperimentConfig::kpca_components)},
      {"kpca.max_points", number_field(&ExperimentConfig::kpca_max_points)},
      {"kpca.threshold_multiplier", number_field(&ExperimentConfig::kpca_threshold_multiplier)},
      {"simulation.dt_sample", OKPCA_NESTED_DOUBLE(sim.dt_sample)},
      {"simulation.duration", OKPCA_NESTED_DOUBLE(sim.duration)},
      {"simulation.integrator_substeps",
       custom_field([](const ExperimentConfig& c) { return std::to_string(c.sim.integrator_substeps); },
                    [](ExperimentConfig& c, const std::string& v, const std::string& w) {
                      c.sim.integrator_substeps = parse_number<int>(v, w);
                    })},
      {"simulation.noise_sigma", OKPCA_NESTED_DOUBLE(sim.noise_sigma)},
      {"quadrotor.nominal_kp", OKPCA_NESTED_DOUBLE(nominal_gains.kp)},
      {"quadrotor.nominal_ki", OKPCA_NESTED_DOUBLE(nominal_gains.ki)},
      {"quadrotor.nominal_kd", OKPCA_NESTED_DOUBLE(nominal_gains.kd)},
      {"quadrotor.major_fault_kp", OKPCA_NESTED_DOUBLE(major_fault_gains.kp)},
      {"quadrotor.major_fault_ki", OKPCA_NESTED_DOUBLE(major_fault_gains.ki)},
      {"quadrotor.major_fault_kd", OKPCA_NESTED_DOUBLE(major_fault_gains.kd)},
      {"quadrotor.minor_fault_kp", OKPCA_NESTED_DOUBLE(minor_fault_gains.kp)},
      {"quadrotor.minor_fault_ki", OKPCA_NESTED_DOUBLE(minor_fault_gains.ki)},
      {"quadrotor.minor_fault_kd", OKPCA_NESTED_DOUBLE(minor_fault_gains.kd)},
      {"quadrotor.gravity", OKPCA_NESTED_DOUBLE(quadrotor.gravity)},
      {"quadrotor.mass", OKPCA_NESTED_DOUBLE(quadrotor.mass)},
      {"quadrotor.inertia_x", OKPCA_NESTED_DOUBLE(quadrotor.inertia_x)},
      {"quadrotor.inertia_y", OKPCA_NESTED_DOUBLE(quadrotor.inertia_y)},
      {"quadrotor.inertia_z", OKPCA_NESTED_DOUBLE(quadrotor.inertia_z)},
      {"quadrotor.attitude_kp", OKPCA_NESTED_DOUBLE(quadrotor.attitude_kp)},
      {"quadrotor.attitude_kd", OKPCA_NESTED_DOUBLE(quadrotor.attitude_kd)},
  };
  return table;
}

#undef OKPCA_NESTED_DOUBLE

}  // namespace

void write_config(std::ostream& out, const ExperimentConfig& cfg, const std::string& line_prefix) {
  std::string section;
  for (const auto& [path, field] : fields()) {
    const auto dot = path.find('.');
    const std::string sec = path.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out << line_prefix << '\n';
      out << line_prefix << '[' << sec << "]\n";
      section = sec;
    }
    out << line_prefix << path.substr(dot + 1) << " = " << field.get(cfg) << '\n';
  }
}

ExperimentConfig read_config(std::istream& in, const std::string& source,
                             const ExperimentConfig& base) {
  std::stringstream text;
  std::string line;
  if (!std::getline(in, line)) throw InputError(source + ": empty config");
  if (line == "# okpca-config") {
    // Embedded header of an output file: strip the comment prefix up to the end marker.
    bool closed = false;
    while (std::getline(in, line)) {
      if (line == "# end-config") {
        closed = true;
        break;
      }
      if (line.rfind('#', 0) != 0) break;
      text << (line.size() > 2 ? line.substr(2) : std::string{}) << '\n';
    }
    if (!closed) throw InputError(source + ": unterminated embedded config header");
  } else {
    text << line << '\n' << in.rdbuf();
  }

  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(text, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InputError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  std::map<std::string, const Field*> lookup;
  for (const auto& [path, field] : fields()) lookup[path] = &field;

  ExperimentConfig cfg = base;
  for (const auto& [section, keys] : tree) {
    if (keys.empty() && !keys.data().empty())
      throw InputError(source + ": key '" + section + "' outside of a section");
    for (const auto& [key, value] : keys) {
      const std::string path = section + "." + key;
      auto it = lookup.find(path);
      if (it == lookup.end())
        throw InputError(source + ": unknown setting [" + section + "] " + key);
      it->second->set(cfg, value.data(), source + ": [" + section + "] " + key);
    }
  }
  try {
    cfg.validate();
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig read_config_file(const std::string& path, const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  return read_config(in, path, base);
}

}  // namespace okpca
