#include <doctest.h>

#include <fstream>

#include "sigchoice/bench.hpp"
#include "sigchoice/estimation.hpp"
#include "sigchoice/serialization.hpp"
#include "test_support.hpp"

using namespace sigchoice;
using test_support::error_kind_of;

TEST_CASE("matrix layout is row-major") {
  const Eigen::MatrixXd m = (Eigen::MatrixXd(2, 3) << 1, 2, 3, 4, 5, 6).finished();
  const Json j = matrix_to_json(m);
  CHECK(j.dump() == R"({"cols":3,"data":[1.0,2.0,3.0,4.0,5.0,6.0],"rows":2})");
  CHECK(matrix_from_json(j) == m);
  CHECK(error_kind_of([] { (void)matrix_from_json(Json{{"rows", 2}, {"cols", 2}, {"data", {1.0}}}); }) ==
        ErrorKind::Shape);
}

TEST_CASE("round trips preserve every bit") {
  const auto truth = sample_ground_truth(4, 2, 17);
  const auto data = sample_dataset(truth, 30, 3, 18);
  const auto result = estimate(data, AttributeLattice(2));
  const auto metrics = compute_metrics(truth, result, data);

  const auto truth2 = truth_from_json(Json::parse(truth_to_json(truth).dump()));
  CHECK(truth2.weights.values() == truth.weights.values());
  CHECK(truth2.preferences == truth.preferences);
  CHECK(truth2.choices == truth.choices);
  CHECK(truth2.seed == 17);

  const auto data2 = dataset_from_json(Json::parse(dataset_to_json(data).dump()));
  REQUIRE(data2.bin_count() == 3);
  for (int n = 0; n < 3; ++n) CHECK(data2.bins()[static_cast<std::size_t>(n)] == data.bins()[static_cast<std::size_t>(n)]);
  CHECK(data2.total_samples() == 30);
  CHECK(data2.seed() == 18);

  const auto result2 = estimates_from_json(Json::parse(estimates_to_json(result).dump()));
  CHECK(result2.weights.values() == result.weights.values());
  CHECK(result2.preferences.values() == result.preferences.values());
  CHECK(result2.stage_residuals == result.stage_residuals);
  CHECK(result2.average_deviation == result.average_deviation);
  REQUIRE(result2.stages.size() == result.stages.size());
  for (std::size_t i = 0; i < result.stages.size(); ++i) {
    CHECK(result2.stages[i].x.values() == result.stages[i].x.values());
    CHECK(result2.stages[i].weights == result.stages[i].weights);
  }

  // Metrics recomputed from the decoded objects are identical.
  const auto recomputed = compute_metrics(truth2, result2, data2);
  const auto metrics2 = metrics_from_json(Json::parse(metrics_to_json(metrics).dump()));
  for (const auto& m : {recomputed, metrics2}) {
    CHECK(m.average_deviation == metrics.average_deviation);
    CHECK(m.p_error == metrics.p_error);
    CHECK(m.q_error == metrics.q_error);
    CHECK(m.w_error == metrics.w_error);
    CHECK(m.samples_per_bin == metrics.samples_per_bin);
    CHECK(m.seed == metrics.seed);
  }

  BenchConfig config;
  config.output_path = "out/results.csv";
  const auto config2 = bench_config_from_json(Json::parse(bench_config_to_json(config).dump()));
  CHECK(config2.sample_sweep == config.sample_sweep);
  CHECK(config2.output_path == config.output_path);
  CHECK(config2.mc_runs == 100);
}

TEST_CASE("file errors") {
  const test_support::TempDir dir("serialization");
  CHECK(error_kind_of([&] { (void)read_json_file(dir / "missing.json"); }) == ErrorKind::Io);
  std::ofstream(dir / "corrupt.json") << "{\"K\": 3,";
  CHECK(error_kind_of([&] { (void)read_json_file(dir / "corrupt.json"); }) == ErrorKind::Parse);
  CHECK(error_kind_of([&] { (void)load_file(dir / "corrupt.json", truth_from_json); }) == ErrorKind::Parse);
  CHECK(error_kind_of([&] { write_json_file(dir / "no" / "dir.json", Json::object()); }) == ErrorKind::Io);

  // Structurally invalid W: an off-support entry.
  Json truth = truth_to_json(sample_ground_truth(3, 2, 1));
  truth["W"]["data"][1 * 4 + 2] = 0.1;
  write_json_file(dir / "bad_w.json", truth);
  CHECK(error_kind_of([&] { (void)load_file(dir / "bad_w.json", truth_from_json); }) == ErrorKind::Parse);

  Json missing = truth_to_json(sample_ground_truth(3, 2, 1));
  missing.erase("Q");
  write_json_file(dir / "missing_q.json", missing);
  CHECK(error_kind_of([&] { (void)load_file(dir / "missing_q.json", truth_from_json); }) == ErrorKind::Parse);

  Json config = bench_config_to_json(BenchConfig{});
  config["mc_runs"] = 0;
  write_json_file(dir / "bench.json", config);
  CHECK(error_kind_of([&] { (void)load_file(dir / "bench.json", bench_config_from_json); }) == ErrorKind::Parse);

  write_json_file(dir / "ok.json", truth);
  CHECK(read_json_file(dir / "ok.json") == truth);
}
