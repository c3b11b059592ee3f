#include "sigchoice/serialization.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include "sigchoice/error.hpp"

namespace sigchoice {

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const Json& data = j.at("data");
  if (rows < 0 || cols < 0 || !data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw Error(ErrorKind::Shape, "matrix data does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data.at(static_cast<std::size_t>(r * cols + c)).get<double>();
  }
  return m;
}

Json truth_to_json(const GroundTruth& truth) {
  return Json{{"K", truth.choice_count},
              {"L", truth.attribute_count},
              {"seed", truth.seed},
              {"W", matrix_to_json(truth.weights.values())},
              {"Q", matrix_to_json(truth.preferences.values())},
              {"P", matrix_to_json(truth.choices.values())}};
}

GroundTruth truth_from_json(const Json& j) {
  const int k = j.at("K").get<int>();
  const int l = j.at("L").get<int>();
  auto lattice = std::make_shared<const AttributeLattice>(l);
  StructuredWeightMatrix weights(lattice, matrix_from_json(j.at("W")));
  StochasticMatrix preferences(matrix_from_json(j.at("Q")));
  StochasticMatrix choices(matrix_from_json(j.at("P")));
  if (preferences.rows() != lattice->size() || preferences.cols() != k || choices.rows() != lattice->size() ||
      choices.cols() != k) {
    throw Error(ErrorKind::Shape, "Q and P must be 2^L x K");
  }
  return GroundTruth{std::move(weights), std::move(preferences), std::move(choices), k, l,
                     j.at("seed").get<std::uint64_t>()};
}

Json dataset_to_json(const ChoiceDataset& data) {
  Json bins = Json::array();
  for (const auto& bin : data.bins()) bins.push_back(matrix_to_json(bin.values()));
  return Json{{"K", data.choice_count()},
              {"L", data.attribute_count()},
              {"N", data.bin_count()},
              {"C", data.total_samples()},
              {"seed", data.seed()},
              {"bins", std::move(bins)}};
}

ChoiceDataset dataset_from_json(const Json& j) {
  std::vector<StochasticMatrix> bins;
  for (const Json& b : j.at("bins")) bins.emplace_back(matrix_from_json(b));
  const int n = j.at("N").get<int>();
  const int k = j.at("K").get<int>();
  if (static_cast<int>(bins.size()) != n) {
    throw Error(ErrorKind::Shape, "N = " + std::to_string(n) + " but " + std::to_string(bins.size()) + " bins");
  }
  ChoiceDataset data(std::move(bins), j.at("L").get<int>(), j.at("C").get<long long>(),
                     j.at("seed").get<std::uint64_t>());
  if (data.choice_count() != k) throw Error(ErrorKind::Shape, "bins do not have K columns");
  return data;
}

Json estimates_to_json(const EstimationResult& result) {
  Json stages = Json::array();
  for (const auto& s : result.stages) {
    stages.push_back(Json{{"stage", s.stage},
                          {"support", s.support},
                          {"x", std::vector<double>(s.x.values().begin(), s.x.values().end())},
                          {"residual", s.residual},
                          {"degenerate", s.degenerate}});
  }
  return Json{{"K", result.preferences.cols()},
              {"L", result.weights.lattice().attributes()},
              {"W_hat", matrix_to_json(result.weights.values())},
              {"Q_hat", matrix_to_json(result.preferences.values())},
              {"residuals", result.stage_residuals},
              {"degenerate_stages", result.degenerate_stages},
              {"avg_deviation", result.average_deviation},
              {"tie_break", "minimum-norm optimum"},
              {"stages", std::move(stages)}};
}

EstimationResult estimates_from_json(const Json& j) {
  auto lattice = std::make_shared<const AttributeLattice>(j.at("L").get<int>());
  StructuredWeightMatrix weights(lattice, matrix_from_json(j.at("W_hat")));
  StochasticMatrix preferences(matrix_from_json(j.at("Q_hat")));
  const auto k = static_cast<int>(preferences.cols());
  std::vector<StageSolution> stages;
  for (const Json& s : j.value("stages", Json::array())) {
    const auto x_values = s.at("x").get<std::vector<double>>();
    SimplexVector x(Eigen::Map<const Eigen::VectorXd>(x_values.data(), static_cast<Eigen::Index>(x_values.size())));
    auto support = s.at("support").get<std::vector<int>>();
    StageEstimate estimate = extract_estimates(x, support, k);
    stages.push_back(StageSolution{s.at("stage").get<int>(), std::move(support), std::move(x),
                                   s.at("residual").get<double>(), std::move(estimate.weights),
                                   std::move(estimate.preference), s.at("degenerate").get<bool>()});
  }
  return EstimationResult{std::move(weights),
                          std::move(preferences),
                          j.at("residuals").get<std::vector<double>>(),
                          j.at("degenerate_stages").get<std::vector<int>>(),
                          j.at("avg_deviation").get<double>(),
                          std::move(stages)};
}

Json metrics_to_json(const MetricRecord& metrics) {
  return Json{{"avg_deviation", metrics.average_deviation},
              {"p_err", metrics.p_error},
              {"q_err", metrics.q_error},
              {"w_err", metrics.w_error},
              {"samples_per_bin", metrics.samples_per_bin},
              {"seed", metrics.seed}};
}

MetricRecord metrics_from_json(const Json& j) {
  return MetricRecord{j.at("avg_deviation").get<double>(), j.at("p_err").get<double>(),
                      j.at("q_err").get<double>(),         j.at("w_err").get<double>(),
                      j.at("samples_per_bin").get<long long>(), j.at("seed").get<std::uint64_t>()};
}

Json bench_config_to_json(const BenchConfig& config) {
  return Json{{"K", config.choice_count},         {"L", config.attribute_count},
              {"N", config.bin_count},            {"sample_sweep", config.sample_sweep},
              {"mc_runs", config.mc_runs},        {"master_seed", config.master_seed},
              {"output_path", config.output_path}};
}

BenchConfig bench_config_from_json(const Json& j) {
  BenchConfig config;
  config.choice_count = j.at("K").get<int>();
  config.attribute_count = j.at("L").get<int>();
  config.bin_count = j.at("N").get<int>();
  config.sample_sweep = j.at("sample_sweep").get<std::vector<long long>>();
  config.mc_runs = j.at("mc_runs").get<int>();
  config.master_seed = j.at("master_seed").get<std::uint64_t>();
  config.output_path = j.value("output_path", std::string{});
  config.validate();
  return config;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out.flush()) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

}  // namespace sigchoice
