#include "sigchoice/bench.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "parallel.hpp"
#include "sigchoice/choice_model.hpp"
#include "sigchoice/error.hpp"
#include "sigchoice/estimation.hpp"

namespace sigchoice {

namespace {

std::string context(int run, long long per_bin) {
  return "run " + std::to_string(run) + ", samples_per_bin " + std::to_string(per_bin) + ": ";
}

template <typename T>
void append_number(std::string& out, T value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw Error(ErrorKind::Io, "number formatting failed");
  out.append(buffer, end);
}

template <typename T>
T parse_field(std::string_view field, std::size_t line) {
  T value{};
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || end != field.data() + field.size()) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": bad field '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

void BenchConfig::validate() const {
  if (mc_runs < 1) throw Error(ErrorKind::Parameter, "mc_runs must be at least 1");
  if (sample_sweep.empty()) throw Error(ErrorKind::Parameter, "sample sweep is empty");
  for (std::size_t i = 0; i < sample_sweep.size(); ++i) {
    if (sample_sweep[i] < 1) throw Error(ErrorKind::Parameter, "sweep values must be at least 1");
    if (i > 0 && sample_sweep[i] <= sample_sweep[i - 1]) {
      throw Error(ErrorKind::Parameter, "sweep values must be strictly increasing");
    }
  }
  if (choice_count < 2) throw Error(ErrorKind::Parameter, "K must be at least 2");
  if (attribute_count < 0 || attribute_count > 10) throw Error(ErrorKind::Parameter, "L must lie in [0, 10]");
  if (bin_count < 1) throw Error(ErrorKind::Parameter, "N must be at least 1");
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& config, unsigned threads) {
  config.validate();
  const std::size_t sweep = config.sample_sweep.size();
  std::vector<BenchRecord> records(static_cast<std::size_t>(config.mc_runs) * sweep);
  const AttributeLattice lattice(config.attribute_count);

  detail::parallel_for(static_cast<std::size_t>(config.mc_runs), threads, [&](std::size_t run) {
    const std::uint64_t seed = config.master_seed + run;
    const GroundTruth truth = sample_ground_truth(config.choice_count, config.attribute_count, seed);
    for (std::size_t s = 0; s < sweep; ++s) {
      const long long per_bin = config.sample_sweep[s];
      try {
        const ChoiceDataset data = sample_dataset(truth, per_bin * config.bin_count, config.bin_count, seed);
        const EstimationResult result = estimate(data, lattice);
        const MetricRecord metrics = compute_metrics(truth, result, data);
        records[run * sweep + s] = BenchRecord{static_cast<int>(run), per_bin,           seed,
                                               metrics.average_deviation, metrics.p_error,
                                               metrics.q_error,          metrics.w_error};
      } catch (const ConvergenceError& e) {
        throw ConvergenceError(context(run, per_bin) + e.message(), e.last_iterate(), e.residual(), e.stage());
      } catch (const Error& e) {
        throw Error(e.kind(), context(run, per_bin) + e.message());
      }
    }
  });
  return records;
}

void write_records(const std::vector<BenchRecord>& records, const std::filesystem::path& path) {
  std::string text = kBenchCsvHeader;
  text += '\n';
  for (const auto& r : records) {
    append_number(text, r.run_id);
    text += ',';
    append_number(text, r.samples_per_bin);
    text += ',';
    append_number(text, r.seed);
    for (const double v : {r.average_deviation, r.p_error, r.q_error, r.w_error}) {
      text += ',';
      append_number(text, v);
    }
    text += '\n';
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

std::vector<BenchRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kBenchCsvHeader) {
    throw Error(ErrorKind::Parse, path.string() + ": missing or unexpected header");
  }
  std::vector<BenchRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1)) {
      fields.push_back(rest.substr(0, pos));
    }
    fields.push_back(rest);
    if (fields.size() != 7) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected 7 fields");
    }
    records.push_back(BenchRecord{
        parse_field<int>(fields[0], line_no),
        parse_field<long long>(fields[1], line_no),
        parse_field<std::uint64_t>(fields[2], line_no),
        parse_field<double>(fields[3], line_no),
        parse_field<double>(fields[4], line_no),
        parse_field<double>(fields[5], line_no),
        parse_field<double>(fields[6], line_no),
    });
  }
  return records;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptyData, "median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace sigchoice
