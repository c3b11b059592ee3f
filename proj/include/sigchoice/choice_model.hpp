#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "sigchoice/attribute_lattice.hpp"
#include "sigchoice/stochastic.hpp"

namespace sigchoice {

/// Row-stochastic M x M weight matrix with the subset support of the lattice:
/// w(i, j) is exactly zero unless j == i or A_j is a strict subset of A_i,
/// and the diagonal carries the remaining mass 1 - sum_j w(i, j).
class StructuredWeightMatrix {
 public:
  /// Validates the structure; throws Error(Shape), Error(Structure) or
  /// Error(NotStochastic).
  StructuredWeightMatrix(std::shared_ptr<const AttributeLattice> lattice, Eigen::MatrixXd values);

  /// All mass on the diagonal.
  static StructuredWeightMatrix identity(std::shared_ptr<const AttributeLattice> lattice);

  const AttributeLattice& lattice() const noexcept { return *lattice_; }
  const std::shared_ptr<const AttributeLattice>& lattice_ptr() const noexcept { return lattice_; }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.rows(); }

 private:
  std::shared_ptr<const AttributeLattice> lattice_;
  Eigen::MatrixXd values_;
};

struct GroundTruth {
  StructuredWeightMatrix weights;   // W
  StochasticMatrix preferences;     // Q, M x K
  StochasticMatrix choices;         // P = W Q, M x K
  int choice_count;                 // K
  int attribute_count;              // L
  std::uint64_t seed;
};

/// N empirical choice matrices P(1..N), each M x K.
class ChoiceDataset {
 public:
  /// `total_samples` is C, the number of choices drawn per message across all
  /// bins. Throws Error(EmptyData) for no bins, Error(Partition) when C is not
  /// a multiple of N, Error(EmptyBin) when C / N is zero and Error(Shape) when
  /// a bin is not 2^L x K.
  ChoiceDataset(std::vector<StochasticMatrix> bins, int attribute_count, long long total_samples,
                std::uint64_t seed);

  const std::vector<StochasticMatrix>& bins() const noexcept { return bins_; }
  int bin_count() const noexcept { return static_cast<int>(bins_.size()); }
  int choice_count() const noexcept { return static_cast<int>(bins_.front().cols()); }
  int attribute_count() const noexcept { return attribute_count_; }
  int message_count() const noexcept { return static_cast<int>(bins_.front().rows()); }
  long long total_samples() const noexcept { return total_samples_; }
  long long samples_per_bin() const noexcept { return total_samples_ / bin_count(); }
  std::uint64_t seed() const noexcept { return seed_; }

  /// True when every bin row is a count vector divided by C / N.
  bool has_empirical_frequencies() const;

 private:
  std::vector<StochasticMatrix> bins_;
  int attribute_count_;
  long long total_samples_;
  std::uint64_t seed_;
};

/// Draws Q with flat-Dirichlet rows and W with flat-Dirichlet rows restricted
/// to the subset support. Requires K >= 2 and 0 <= L <= 10; throws
/// Error(Parameter) otherwise.
GroundTruth sample_ground_truth(int choice_count, int attribute_count, std::uint64_t seed);

/// P = W Q. Throws Error(Shape) on a dimension mismatch.
StochasticMatrix forward(const StructuredWeightMatrix& weights, const StochasticMatrix& preferences);

/// For every message m and bin n, draws C / N categorical choices from row m of
/// truth.P using the (m, n) substream and stores the empirical frequencies.
ChoiceDataset sample_dataset(const GroundTruth& truth, long long total_samples, int bin_count,
                             std::uint64_t seed);

/// Average deviation (1/N) sum_n ||W Q - P(n)||_F^2 for typed inputs.
double average_deviation(const StructuredWeightMatrix& weights, const StochasticMatrix& preferences,
                         const ChoiceDataset& data);

}  // namespace sigchoice
