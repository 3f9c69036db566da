#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "okpca/trajectory.hpp"

namespace okpca {

enum class Label { Normal, Faulty, Unknown };

const char* to_string(Label label);
Label label_from_string(const std::string& name);

/// One manifest row. `metadata` holds any extra columns (system, gains, seed, noise ...).
struct DatasetEntry {
  std::string file;
  Label label = Label::Unknown;
  std::map<std::string, std::string> metadata;
};

/// A directory of trajectory CSV files plus `manifest.csv`.
struct Dataset {
  std::vector<Trajectory> trajectories;
  std::vector<DatasetEntry> entries;
};

inline constexpr const char* kManifestName = "manifest.csv";

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Header `t,x1,...,xn` then one `time,state...` row per sample.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

/// Parse errors carry `source:line` context.
Trajectory read_trajectory_csv(std::istream& in, const std::string& source, std::string id);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

/// Writes each trajectory as `<entry.file>` and a manifest whose columns are `file,label`
/// followed by the union of metadata keys in first-seen order.
void write_dataset(const std::filesystem::path& dir, const Dataset& dataset);
Dataset read_dataset(const std::filesystem::path& dir);

}  // namespace okpca
