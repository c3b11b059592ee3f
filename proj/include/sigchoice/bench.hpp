#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sigchoice {

struct BenchConfig {
  int choice_count = 5;       // K
  int attribute_count = 2;    // L
  int bin_count = 5;          // N
  std::vector<long long> sample_sweep{20, 100, 500, 2500};  // samples per bin
  int mc_runs = 100;
  std::uint64_t master_seed = 0;
  std::string output_path;

  /// Throws Error(Parameter) unless mc_runs >= 1, the sweep is non-empty,
  /// positive and strictly increasing, and K, L, N satisfy the model preconditions.
  void validate() const;
};

struct BenchRecord {
  int run_id;
  long long samples_per_bin;
  std::uint64_t seed;
  double average_deviation;
  double p_error;
  double q_error;
  double w_error;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

inline constexpr const char* kBenchCsvHeader = "run_id,samples_per_bin,seed,avg_deviation,p_err,q_err,w_err";

/// One record per (run, sweep point), ordered by run then sweep index. Run r
/// uses seed master_seed + r for its ground truth (shared across the sweep) and
/// for its datasets. Runs execute on up to `threads` workers (0 = hardware).
std::vector<BenchRecord> run_benchmark(const BenchConfig& config, unsigned threads = 1);

/// Writes the CSV with the exact header and shortest round-trip floats.
/// Throws Error(Io) if the file cannot be written.
void write_records(const std::vector<BenchRecord>& records, const std::filesystem::path& path);

/// Parses a CSV produced by write_records. Throws Error(Io) or Error(Parse).
std::vector<BenchRecord> read_records(const std::filesystem::path& path);

/// Median of a non-empty sample (mean of the middle pair for even sizes).
double median(std::vector<double> values);

}  // namespace sigchoice
