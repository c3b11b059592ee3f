#include "sigchoice/choice_model.hpp"

#include <cmath>
#include <string>

#include "sigchoice/error.hpp"
#include "sigchoice/random.hpp"

namespace sigchoice {

namespace {

// Normalized i.i.d. standard exponentials: a uniform draw from the simplex.
Eigen::VectorXd flat_dirichlet(Engine& engine, Eigen::Index dim) {
  Eigen::VectorXd draws(dim);
  double total = 0.0;
  do {
    total = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k) {
      draws[k] = standard_exponential(engine);
      total += draws[k];
    }
  } while (total <= 0.0);
  return draws / total;
}

}  // namespace

StructuredWeightMatrix::StructuredWeightMatrix(std::shared_ptr<const AttributeLattice> lattice,
                                               Eigen::MatrixXd values)
    : lattice_(std::move(lattice)), values_(std::move(values)) {
  if (!lattice_) throw Error(ErrorKind::Parameter, "weight matrix needs a lattice");
  const Eigen::Index m = lattice_->size();
  if (values_.rows() != m || values_.cols() != m) {
    throw Error(ErrorKind::Shape, "weight matrix must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  if (!values_.allFinite()) throw Error(ErrorKind::Numeric, "weight matrix has a non-finite entry");

  for (int i = 1; i <= m; ++i) {
    const AttributeSubset row_subset = lattice_->subset(i);
    double off_diagonal = 0.0;
    for (int j = 1; j <= m; ++j) {
      const double w = values_(i - 1, j - 1);
      if (j == i) continue;
      if (!is_subset(lattice_->subset(j), row_subset)) {
        if (w != 0.0) {
          throw Error(ErrorKind::Structure, "w(" + std::to_string(i) + "," + std::to_string(j) +
                                                ") must be zero: A_j is not a subset of A_i");
        }
        continue;
      }
      off_diagonal += w;
    }
    const double diagonal = values_(i - 1, i - 1);
    if (std::abs(diagonal - (1.0 - off_diagonal)) > kStochasticTolerance) {
      throw Error(ErrorKind::Structure,
                  "diagonal of row " + std::to_string(i) + " must equal 1 - sum of the row weights");
    }
  }
  if (!is_row_stochastic(values_)) {
    throw Error(ErrorKind::NotStochastic, "weight matrix is not row-stochastic");
  }
}

StructuredWeightMatrix StructuredWeightMatrix::identity(std::shared_ptr<const AttributeLattice> lattice) {
  const Eigen::Index m = lattice ? lattice->size() : 0;
  return StructuredWeightMatrix(std::move(lattice), Eigen::MatrixXd::Identity(m, m));
}

ChoiceDataset::ChoiceDataset(std::vector<StochasticMatrix> bins, int attribute_count,
                             long long total_samples, std::uint64_t seed)
    : bins_(std::move(bins)),
      attribute_count_(attribute_count),
      total_samples_(total_samples),
      seed_(seed) {
  if (bins_.empty()) throw Error(ErrorKind::EmptyData, "dataset has no bins");
  const auto n = static_cast<long long>(bins_.size());
  if (total_samples_ < 0 || total_samples_ % n != 0) {
    throw Error(ErrorKind::Partition, std::to_string(total_samples_) + " samples cannot be split evenly into " +
                                          std::to_string(n) + " bins");
  }
  if (total_samples_ / n < 1) throw Error(ErrorKind::EmptyBin, "each bin needs at least one sample");
  if (attribute_count_ < 0 || attribute_count_ > AttributeLattice::kMaxAttributes) {
    throw Error(ErrorKind::Parameter, "attribute count out of range");
  }
  const Eigen::Index rows = Eigen::Index{1} << attribute_count_;
  const Eigen::Index cols = bins_.front().cols();
  for (const auto& bin : bins_) {
    if (bin.rows() != rows || bin.cols() != cols) {
      throw Error(ErrorKind::Shape, "every bin must be " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
}

bool ChoiceDataset::has_empirical_frequencies() const {
  const auto per_bin = static_cast<double>(samples_per_bin());
  for (const auto& bin : bins_) {
    const Eigen::ArrayXXd counts = bin.values().array() * per_bin;
    if (((counts - counts.round()).abs() > 1e-6).any()) return false;
    for (Eigen::Index r = 0; r < bin.rows(); ++r) {
      if (std::abs(bin.values().row(r).sum() - 1.0) > 1e-12) return false;
    }
  }
  return true;
}

GroundTruth sample_ground_truth(int choice_count, int attribute_count, std::uint64_t seed) {
  if (choice_count < 2) throw Error(ErrorKind::Parameter, "need at least two choices, got " + std::to_string(choice_count));
  if (attribute_count < 0 || attribute_count > 10) {
    throw Error(ErrorKind::Parameter, "attribute count must lie in [0, 10], got " + std::to_string(attribute_count));
  }
  auto lattice = std::make_shared<const AttributeLattice>(attribute_count);
  const int m = lattice->size();

  Eigen::MatrixXd q(m, choice_count);
  for (int row = 0; row < m; ++row) {
    Engine engine(substream_seed(seed, StreamDomain::Preferences, static_cast<std::uint64_t>(row)));
    q.row(row) = flat_dirichlet(engine, choice_count).transpose();
  }

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  for (int stage = 1; stage <= m; ++stage) {
    const std::vector<int> support = lattice->sub_support(stage);
    if (support.empty()) {
      w(stage - 1, stage - 1) = 1.0;
      continue;
    }
    Engine engine(substream_seed(seed, StreamDomain::Weights, static_cast<std::uint64_t>(stage)));
    const Eigen::VectorXd draw = flat_dirichlet(engine, static_cast<Eigen::Index>(support.size()) + 1);
    double off_diagonal = 0.0;
    for (std::size_t k = 0; k < support.size(); ++k) {
      w(stage - 1, support[k] - 1) = draw[static_cast<Eigen::Index>(k)];
      off_diagonal += draw[static_cast<Eigen::Index>(k)];
    }
    w(stage - 1, stage - 1) = std::max(0.0, 1.0 - off_diagonal);
  }

  StructuredWeightMatrix weights(lattice, std::move(w));
  StochasticMatrix preferences(std::move(q));
  StochasticMatrix choices = forward(weights, preferences);
  return GroundTruth{std::move(weights), std::move(preferences), std::move(choices), choice_count,
                     attribute_count, seed};
}

StochasticMatrix forward(const StructuredWeightMatrix& weights, const StochasticMatrix& preferences) {
  if (weights.values().cols() != preferences.rows()) {
    throw Error(ErrorKind::Shape, "W has " + std::to_string(weights.values().cols()) + " columns but Q has " +
                                      std::to_string(preferences.rows()) + " rows");
  }
  return StochasticMatrix(weights.values() * preferences.values());
}

ChoiceDataset sample_dataset(const GroundTruth& truth, long long total_samples, int bin_count,
                             std::uint64_t seed) {
  if (bin_count < 1) throw Error(ErrorKind::Parameter, "need at least one bin");
  if (total_samples < 0 || total_samples % bin_count != 0) {
    throw Error(ErrorKind::Partition, std::to_string(total_samples) + " samples cannot be split evenly into " +
                                          std::to_string(bin_count) + " bins");
  }
  const long long per_bin = total_samples / bin_count;
  if (per_bin < 1) throw Error(ErrorKind::EmptyBin, "each bin needs at least one sample");

  const Eigen::MatrixXd& p = truth.choices.values();
  const Eigen::Index messages = p.rows();
  const Eigen::Index choices = p.cols();

  std::vector<Eigen::MatrixXd> frequencies(static_cast<std::size_t>(bin_count),
                                           Eigen::MatrixXd::Zero(messages, choices));
  std::vector<long long> counts(static_cast<std::size_t>(choices));
  Eigen::VectorXd cdf(choices);
  for (Eigen::Index row = 0; row < messages; ++row) {
    double acc = 0.0;
    Eigen::Index last_positive = 0;
    for (Eigen::Index k = 0; k < choices; ++k) {
      acc += p(row, k);
      cdf[k] = acc;
      if (p(row, k) > 0.0) last_positive = k;
    }
    for (int bin = 0; bin < bin_count; ++bin) {
      Engine engine(substream_seed(seed, StreamDomain::Choices, static_cast<std::uint64_t>(row),
                                   static_cast<std::uint64_t>(bin)));
      std::fill(counts.begin(), counts.end(), 0);
      for (long long draw = 0; draw < per_bin; ++draw) {
        const double u = uniform01(engine);
        Eigen::Index pick = last_positive;
        for (Eigen::Index k = 0; k < choices; ++k) {
          if (u < cdf[k]) {
            pick = k;
            break;
          }
        }
        ++counts[static_cast<std::size_t>(pick)];
      }
      for (Eigen::Index k = 0; k < choices; ++k) {
        frequencies[static_cast<std::size_t>(bin)](row, k) =
            static_cast<double>(counts[static_cast<std::size_t>(k)]) / static_cast<double>(per_bin);
      }
    }
  }

  std::vector<StochasticMatrix> bins;
  bins.reserve(frequencies.size());
  for (auto& f : frequencies) bins.emplace_back(std::move(f));
  return ChoiceDataset(std::move(bins), truth.attribute_count, total_samples, seed);
}

double average_deviation(const StructuredWeightMatrix& weights, const StochasticMatrix& preferences,
                         const ChoiceDataset& data) {
  return average_deviation(weights.values(), preferences.values(), data.bins());
}

}  // namespace sigchoice
