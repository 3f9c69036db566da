#include "okpca/trajectory_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "okpca/error.hpp"

namespace okpca {

namespace fs = std::filesystem;

const char* to_string(Label label) {
  switch (label) {
    case Label::Normal:
      return "normal";
    case Label::Faulty:
      return "faulty";
    case Label::Unknown:
      return "unknown";
  }
  return "unknown";
}

Label label_from_string(const std::string& name) {
  if (name == "normal") return Label::Normal;
  if (name == "faulty") return Label::Faulty;
  if (name == "unknown") return Label::Unknown;
  throw InputError("unknown label '" + name + "' (expected normal, faulty or unknown)");
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    std::size_t first = field.find_first_not_of(' ');
    fields.push_back(first == std::string::npos ? std::string{} : field.substr(first));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, const std::string& where) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw InputError(where + ": cannot parse number '" + text + "'");
  return value;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  out.exceptions(std::ios::badbit);
  return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << 't';
  for (Eigen::Index c = 0; c < traj.dimension(); ++c) out << ",x" << (c + 1);
  out << '\n';
  const auto& states = traj.states();
  for (std::size_t a = 0; a < traj.num_samples(); ++a) {
    out << format_double(traj.times()[a]);
    for (Eigen::Index c = 0; c < traj.dimension(); ++c)
      out << ',' << format_double(states(static_cast<Eigen::Index>(a), c));
    out << '\n';
  }
}

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
  auto out = open_for_write(path);
  write_trajectory_csv(out, traj);
}

Trajectory read_trajectory_csv(std::istream& in, const std::string& source, std::string id) {
  std::string line;
  std::size_t line_no = 0;
  auto where = [&] { return source + ":" + std::to_string(line_no); };

  while (std::getline(in, line)) {
    ++line_no;
    if (!is_blank(line)) break;
  }
  if (is_blank(line)) throw InputError(source + ": empty trajectory file");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "t")
    throw InputError(where() + ": expected header 't,x1,...,xn'");
  for (std::size_t c = 1; c < header.size(); ++c)
    if (header[c] != "x" + std::to_string(c))
      throw InputError(where() + ": expected column 'x" + std::to_string(c) + "', found '" +
                       header[c] + "'");
  const std::size_t n = header.size() - 1;

  std::vector<double> times;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != n + 1)
      throw InputError(where() + ": expected " + std::to_string(n + 1) + " fields, found " +
                       std::to_string(fields.size()));
    const double t = parse_double(fields[0], where());
    if (!times.empty() && !(t > times.back()))
      throw InputError(where() + ": time stamps must be strictly increasing");
    times.push_back(t);
    for (std::size_t c = 1; c <= n; ++c) values.push_back(parse_double(fields[c], where()));
  }
  if (times.size() < 2) throw InputError(source + ": a trajectory needs at least 2 samples");

  Eigen::MatrixXd states(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(n));
  for (Eigen::Index a = 0; a < states.rows(); ++a)
    for (Eigen::Index c = 0; c < states.cols(); ++c)
      states(a, c) = values[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(c)];
  try {
    return Trajectory(std::move(times), std::move(states), std::move(id));
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

Trajectory read_trajectory_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trajectory file '" + path.string() + "'");
  return read_trajectory_csv(in, path.string(), path.stem().string());
}

void write_dataset(const fs::path& dir, const Dataset& dataset) {
  if (dataset.trajectories.size() != dataset.entries.size())
    throw InputError("dataset has " + std::to_string(dataset.trajectories.size()) +
                     " trajectories but " + std::to_string(dataset.entries.size()) +
                     " manifest entries");
  fs::create_directories(dir);

  std::vector<std::string> keys;
  for (const auto& entry : dataset.entries)
    for (const auto& [key, value] : entry.metadata)
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);

  auto manifest = open_for_write(dir / kManifestName);
  manifest << "file,label";
  for (const auto& key : keys) manifest << ',' << key;
  manifest << '\n';
  for (std::size_t i = 0; i < dataset.entries.size(); ++i) {
    const auto& entry = dataset.entries[i];
    if (entry.file.empty() || entry.file.find(',') != std::string::npos)
      throw InputError("invalid dataset file name '" + entry.file + "'");
    write_trajectory_csv(dir / entry.file, dataset.trajectories[i]);
    manifest << entry.file << ',' << to_string(entry.label);
    for (const auto& key : keys) {
      auto it = entry.metadata.find(key);
      manifest << ',' << (it == entry.metadata.end() ? std::string{} : it->second);
    }
    manifest << '\n';
  }
}

Dataset read_dataset(const fs::path& dir) {
  const fs::path manifest_path = dir / kManifestName;
  std::ifstream in(manifest_path);
  if (!in) throw InputError("cannot open dataset manifest '" + manifest_path.string() + "'");

  std::string line;
  std::size_t line_no = 0;
  auto where = [&] { return manifest_path.string() + ":" + std::to_string(line_no); };
  if (!std::getline(in, line)) throw InputError(manifest_path.string() + ": empty manifest");
  ++line_no;
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "file" || header[1] != "label")
    throw InputError(where() + ": manifest header must start with 'file,label'");

  Dataset dataset;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw InputError(where() + ": expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(fields.size()));
    DatasetEntry entry;
    entry.file = fields[0];
    try {
      entry.label = label_from_string(fields[1]);
    } catch (const InputError& e) {
      throw InputError(where() + ": " + e.what());
    }
    for (std::size_t c = 2; c < header.size(); ++c) entry.metadata[header[c]] = fields[c];
    dataset.trajectories.push_back(read_trajectory_csv(dir / entry.file));
    dataset.entries.push_back(std::move(entry));
  }
  if (dataset.trajectories.empty()) throw InputError(manifest_path.string() + ": no trajectories");
  const auto n = dataset.trajectories.front().dimension();
  for (const auto& traj : dataset.trajectories)
    if (traj.dimension() != n)
      throw InputError("dataset '" + dir.string() + "': trajectory '" + traj.id() +
                       "' has dimension " + std::to_string(traj.dimension()) + ", expected " +
                       std::to_string(n));
  return dataset;
}

}  // namespace okpca
