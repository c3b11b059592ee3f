#pragma once

#include <cstdint>
#include <vector>

#include "sigchoice/attribute_lattice.hpp"
#include "sigchoice/choice_model.hpp"
#include "sigchoice/stage_solver.hpp"
#include "sigchoice/stochastic.hpp"

namespace sigchoice {

struct EstimateOptions {
  /// Worker threads per cardinality level; 0 means one per hardware thread.
  unsigned threads = 1;
  /// Non-zero: dispatch the stages of each level in a seeded random order.
  /// Outputs do not depend on it.
  std::uint64_t shuffle_seed = 0;
  SolverOptions solver;
};

struct EstimationResult {
  StructuredWeightMatrix weights;   // W hat
  StochasticMatrix preferences;     // Q hat
  /// Mean-target residual of each stage, stage 1 first.
  std::vector<double> stage_residuals;
  /// 1-based stages whose self-weight vanished.
  std::vector<int> degenerate_stages;
  double average_deviation;
  std::vector<StageSolution> stages;  // stages 2..M
};

/// Runs stage 1 in closed form, then every later stage level by level in
/// lattice order, and assembles W hat (weights on the subset support, diagonal
/// 1 - row sum) and Q hat. Stages of one cardinality level run concurrently.
///
/// Throws Error(Shape) if the dataset does not have 2^L rows, and
/// ConvergenceError tagged with the stage index if a stage solve fails.
EstimationResult estimate(const ChoiceDataset& data, const AttributeLattice& lattice,
                          const EstimateOptions& options = {});

struct MetricRecord {
  double average_deviation;
  double p_error;  // ||P - W hat Q hat||_F
  double q_error;  // ||Q - Q hat||_F
  double w_error;  // ||W - W hat||_F
  long long samples_per_bin;
  std::uint64_t seed;
};

MetricRecord compute_metrics(const GroundTruth& truth, const EstimationResult& result,
                             const ChoiceDataset& data);

}  // namespace sigchoice
