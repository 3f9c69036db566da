#include "okpca/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "okpca/error.hpp"

namespace okpca {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, Eigen::Index expected_cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), expected_cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const auto& row = rows.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != expected_cols)
      throw InputError("matrix row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(expected_cols));
    for (Eigen::Index j = 0; j < expected_cols; ++j)
      m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.begin(), v.end()); }

Eigen::VectorXd vector_from_json(const json& values) {
  const auto v = values.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void save_model(std::ostream& out, const OkpcaModel& model) {
  json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelFormatVersion;
  doc["kernel"] = {{"family", to_string(model.spec().family())}, {"mu", model.spec().mu()}};
  doc["quadrature"] = to_string(model.rule().scheme);
  doc["num_components"] = model.num_components();

  json training = json::array();
  for (const auto& traj : model.training())
    training.push_back(
        {{"id", traj.id()}, {"times", traj.times()}, {"states", matrix_to_json(traj.states())}});
  doc["training"] = std::move(training);

  const auto& basis = model.basis();
  doc["gram_raw"] = matrix_to_json(model.gram_raw().entries());
  doc["row_means"] = vector_to_json(basis.row_means());
  doc["grand_mean"] = basis.grand_mean();
  doc["eigenvalues"] = vector_to_json(basis.eigenvalues());
  // Stored transposed: one coefficient vector per principal component.
  doc["alphas"] = matrix_to_json(basis.alphas().transpose());
  doc["normalization"] = "unit_feature_norm";
  out << doc.dump(1) << '\n';
}

void save_model(const std::filesystem::path& path, const OkpcaModel& model) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  save_model(out, model);
}

OkpcaModel load_model(std::istream& in, const std::string& source) {
  try {
    const json doc = json::parse(in);
    if (doc.at("format") != kModelFormat) throw InputError("not an OKPCA model file");
    if (doc.at("version").get<int>() != kModelFormatVersion)
      throw InputError("unsupported model format version " + doc.at("version").dump());

    const KernelSpec spec(kernel_family_from_string(doc.at("kernel").at("family")),
                          doc.at("kernel").at("mu").get<double>());
    const QuadratureRule rule{quadrature_scheme_from_string(doc.at("quadrature"))};

    std::vector<Trajectory> training;
    for (const auto& item : doc.at("training")) {
      auto times = item.at("times").get<std::vector<double>>();
      const auto& states = item.at("states");
      if (states.empty()) throw InputError("training trajectory without states");
      const auto n = static_cast<Eigen::Index>(states.at(0).size());
      training.emplace_back(std::move(times), matrix_from_json(states, n),
                            item.at("id").get<std::string>());
    }
    const auto m = static_cast<Eigen::Index>(training.size());
    const auto n_comp = doc.at("num_components").get<Eigen::Index>();

    GramMatrix gram(matrix_from_json(doc.at("gram_raw"), m), false);
    Eigen::MatrixXd alphas = matrix_from_json(doc.at("alphas"), m).transpose();
    if (alphas.cols() != n_comp) throw InputError("alphas do not match num_components");
    auto basis = CenteredKernelBasis::from_parts(vector_from_json(doc.at("row_means")),
                                                 doc.at("grand_mean").get<double>(),
                                                 vector_from_json(doc.at("eigenvalues")),
                                                 std::move(alphas));
    return OkpcaModel::from_parts(spec, rule, std::move(training), std::move(gram),
                                  std::move(basis));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(source + ": malformed model file: " + e.what());
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

OkpcaModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file '" + path.string() + "'");
  return load_model(in, path.string());
}

}  // namespace okpca
