#pragma once

#include <filesystem>

#include <Eigen/Dense>
#include <json.hpp>

#include "sigchoice/bench.hpp"
#include "sigchoice/choice_model.hpp"
#include "sigchoice/estimation.hpp"

namespace sigchoice {

using Json = nlohmann::json;

// Matrices are {"rows": R, "cols": C, "data": [row-major entries]}.
Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);

// truth.json: K, L, seed, W, Q, P.
Json truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const Json& j);

// dataset.json: K, L, N, C, seed, bins.
Json dataset_to_json(const ChoiceDataset& data);
ChoiceDataset dataset_from_json(const Json& j);

// estimates.json: W_hat, Q_hat, stage residuals, degenerate stages, average deviation.
Json estimates_to_json(const EstimationResult& result);
EstimationResult estimates_from_json(const Json& j);

// metrics.json.
Json metrics_to_json(const MetricRecord& metrics);
MetricRecord metrics_from_json(const Json& j);

// bench.json.
Json bench_config_to_json(const BenchConfig& config);
BenchConfig bench_config_from_json(const Json& j);

/// Reads and parses a JSON file. Throws Error(Io) if it cannot be opened and
/// Error(Parse) if it is not valid JSON.
Json read_json_file(const std::filesystem::path& path);
/// Writes `j` indented by two spaces with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);

/// Parses a file with the given decoder and reports every failure, including
/// invariant violations of the decoded objects, as Error(Parse) naming the file.
template <typename Decoder>
auto load_file(const std::filesystem::path& path, Decoder&& decode) {
  const Json j = read_json_file(path);
  try {
    return decode(j);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.message());
  }
}

}  // namespace sigchoice
