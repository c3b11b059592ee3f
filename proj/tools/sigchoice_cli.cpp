// Command-line front end: generate, sample, estimate, bench.
//
// Exit codes: 0 success, 1 runtime or I/O failure, 2 usage or validation error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "sigchoice/bench.hpp"
#include "sigchoice/choice_model.hpp"
#include "sigchoice/error.hpp"
#include "sigchoice/estimation.hpp"
#include "sigchoice/serialization.hpp"

namespace fs = std::filesystem;
using namespace sigchoice;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parameter:
    case ErrorKind::Partition:
    case ErrorKind::EmptyBin:
    case ErrorKind::Size:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

struct GenerateArgs {
  int choices = 0;
  int attributes = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct SampleArgs {
  std::string truth;
  long long samples = 0;
  int bins = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct EstimateArgs {
  std::string dataset;
  std::string truth;
  std::string out;
  std::string metrics;
};

struct BenchArgs {
  std::string config;
  std::string out;
};

void cmd_generate(const GenerateArgs& args) {
  const GroundTruth truth = sample_ground_truth(args.choices, args.attributes, args.seed);
  const fs::path dir(args.out);
  fs::create_directories(dir);
  write_json_file(dir / "truth.json", truth_to_json(truth));
  std::cout << "K=" << truth.choice_count << " L=" << truth.attribute_count
            << " M=" << truth.choices.rows() << '\n';
}

void cmd_sample(const SampleArgs& args) {
  const GroundTruth truth = load_file(args.truth, truth_from_json);
  const ChoiceDataset data = sample_dataset(truth, args.samples, args.bins, args.seed);
  ensure_parent(args.out);
  write_json_file(args.out, dataset_to_json(data));
  std::cout << "N=" << data.bin_count() << " samples_per_bin=" << data.samples_per_bin() << '\n';
}

void cmd_estimate(const EstimateArgs& args, unsigned threads) {
  const ChoiceDataset data = load_file(args.dataset, dataset_from_json);
  const AttributeLattice lattice(data.attribute_count());
  EstimateOptions options;
  options.threads = threads;
  const EstimationResult result = estimate(data, lattice, options);
  ensure_parent(args.out);
  write_json_file(args.out, estimates_to_json(result));
  std::cout << "avg_deviation=" << result.average_deviation
            << " degenerate_stages=" << result.degenerate_stages.size() << '\n';

  if (!args.truth.empty()) {
    const GroundTruth truth = load_file(args.truth, truth_from_json);
    const MetricRecord metrics = compute_metrics(truth, result, data);
    const fs::path metrics_path =
        args.metrics.empty() ? fs::path(args.out).parent_path() / "metrics.json" : fs::path(args.metrics);
    ensure_parent(metrics_path);
    write_json_file(metrics_path, metrics_to_json(metrics));
  }
}

void cmd_bench(const BenchArgs& args, unsigned threads) {
  BenchConfig config = load_file(args.config, bench_config_from_json);
  if (!args.out.empty()) config.output_path = args.out;
  if (config.output_path.empty()) throw Error(ErrorKind::Parameter, "no output path for the CSV");
  const auto records = run_benchmark(config, threads);
  ensure_parent(config.output_path);
  write_records(records, config.output_path);
  std::cout << "records=" << records.size() << " out=" << config.output_path << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-attribute choice model estimation via stochastic matrix factorization"};
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads (0 = all cores); outputs do not depend on it")
      ->check(CLI::NonNegativeNumber);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Draw a ground-truth (W, Q) and write truth.json");
  generate->add_option("--choices", gen.choices, "Number of choices K")->required()->check(CLI::Range(2, 1 << 20));
  generate->add_option("--attributes", gen.attributes, "Number of attributes L")->required()->check(CLI::Range(0, 10));
  generate->add_option("--seed", gen.seed, "Random seed")->required();
  generate->add_option("--out", gen.out, "Output directory")->required();

  SampleArgs smp;
  auto* sample = app.add_subcommand("sample", "Sample binned choice data from truth.json");
  sample->add_option("--truth", smp.truth, "truth.json path")->required();
  sample->add_option("--samples", smp.samples, "Total samples C per message")->required();
  sample->add_option("--bins", smp.bins, "Number of bins N")->required();
  sample->add_option("--seed", smp.seed, "Random seed")->required();
  sample->add_option("--out", smp.out, "dataset.json path")->required();

  EstimateArgs est;
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate (W, Q) from dataset.json");
  estimate_cmd->add_option("--dataset", est.dataset, "dataset.json path")->required();
  estimate_cmd->add_option("--truth", est.truth, "truth.json path; enables metrics output");
  estimate_cmd->add_option("--out", est.out, "estimates.json path")->required();
  estimate_cmd->add_option("--metrics", est.metrics, "metrics.json path (default: next to --out)");

  BenchArgs bch;
  auto* bench = app.add_subcommand("bench", "Run the Monte Carlo benchmark");
  bench->add_option("--config", bch.config, "bench.json path")->required();
  bench->add_option("--out", bch.out, "results CSV path (overrides output_path)")->required();

  for (auto* sub : {generate, sample, estimate_cmd, bench}) {
    sub->add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*generate) cmd_generate(gen);
    else if (*sample) cmd_sample(smp);
    else if (*estimate_cmd) cmd_estimate(est, threads);
    else if (*bench) cmd_bench(bch, threads);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
