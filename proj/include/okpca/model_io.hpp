#pragma once

#include <filesystem>
#include <iosfwd>

#include "okpca/okpca.hpp"

namespace okpca {

inline constexpr const char* kModelFormat = "okpca-model";
inline constexpr int kModelFormatVersion = 1;

/// Self-describing JSON document: kernel, quadrature, training trajectories, raw Gram matrix,
/// eigenpairs and centering statistics. Numbers are written with enough digits to round-trip
/// exactly.
void save_model(std::ostream& out, const OkpcaModel& model);
void save_model(const std::filesystem::path& path, const OkpcaModel& model);

OkpcaModel load_model(std::istream& in, const std::string& source = "<stream>");
OkpcaModel load_model(const std::filesystem::path& path);

}  // namespace okpca
