#include "sigchoice/estimation.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <optional>
#include <string>

#include "parallel.hpp"
#include "sigchoice/random.hpp"

namespace sigchoice {

EstimationResult estimate(const ChoiceDataset& data, const AttributeLattice& lattice,
                          const EstimateOptions& options) {
  const int m = lattice.size();
  if (data.message_count() != m) {
    throw Error(ErrorKind::Shape, "dataset has " + std::to_string(data.message_count()) +
                                      " messages, lattice with L = " + std::to_string(lattice.attributes()) +
                                      " needs " + std::to_string(m));
  }
  const int k = data.choice_count();

  std::vector<std::optional<SimplexVector>> estimates(static_cast<std::size_t>(m));
  std::vector<std::optional<StageSolution>> solutions(static_cast<std::size_t>(m));
  estimates[0] = solve_stage1(data);

  const auto levels = lattice.levels();
  for (std::size_t level = 1; level < levels.size(); ++level) {
    std::vector<int> order = levels[level];
    if (options.shuffle_seed != 0) {
      Engine engine(substream_seed(options.shuffle_seed, StreamDomain::Shuffle, level));
      std::shuffle(order.begin(), order.end(), engine);
    }
    // Stages of one level only read estimates of lower levels.
    detail::parallel_for(order.size(), options.threads, [&](std::size_t slot) {
      const int stage = order[slot];
      try {
        StageProblem problem = build_stage_problem(stage, estimates, data, lattice);
        solutions[static_cast<std::size_t>(stage - 1)] = solve_stage(problem, options.solver);
      } catch (const ConvergenceError& e) {
        throw ConvergenceError("stage " + std::to_string(stage) + ": " + e.message(), e.last_iterate(),
                               e.residual(), stage);
      }
    });
    for (const int stage : order) {
      estimates[static_cast<std::size_t>(stage - 1)] = solutions[static_cast<std::size_t>(stage - 1)]->preference;
    }
  }

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd q(m, k);
  std::vector<double> residuals(static_cast<std::size_t>(m), 0.0);
  std::vector<int> degenerate;
  std::vector<StageSolution> stages;

  w(0, 0) = 1.0;
  q.row(0) = estimates[0]->values().transpose();
  {
    Eigen::VectorXd mean_first = Eigen::VectorXd::Zero(k);
    for (const auto& bin : data.bins()) mean_first += bin.values().row(0).transpose();
    mean_first /= static_cast<double>(data.bin_count());
    residuals[0] = (estimates[0]->values() - mean_first).squaredNorm();
  }
  for (int stage = 2; stage <= m; ++stage) {
    StageSolution& s = *solutions[static_cast<std::size_t>(stage - 1)];
    double off_diagonal = 0.0;
    for (std::size_t j = 0; j < s.support.size(); ++j) {
      const double weight = s.weights[static_cast<Eigen::Index>(j)];
      w(stage - 1, s.support[j] - 1) = weight;
      off_diagonal += weight;
    }
    w(stage - 1, stage - 1) = std::max(0.0, 1.0 - off_diagonal);
    q.row(stage - 1) = s.preference.values().transpose();
    residuals[static_cast<std::size_t>(stage - 1)] = s.residual;
    if (s.degenerate) degenerate.push_back(stage);
    stages.push_back(std::move(s));
  }

  StructuredWeightMatrix weights(std::make_shared<const AttributeLattice>(lattice), std::move(w));
  StochasticMatrix preferences(std::move(q));
  const double deviation = average_deviation(weights, preferences, data);
  return EstimationResult{std::move(weights), std::move(preferences), std::move(residuals),
                          std::move(degenerate), deviation, std::move(stages)};
}

MetricRecord compute_metrics(const GroundTruth& truth, const EstimationResult& result,
                             const ChoiceDataset& data) {
  const Eigen::MatrixXd fitted = result.weights.values() * result.preferences.values();
  return MetricRecord{
      average_deviation(result.weights, result.preferences, data),
      frobenius_distance(truth.choices.values(), fitted),
      frobenius_distance(truth.preferences.values(), result.preferences.values()),
      frobenius_distance(truth.weights.values(), result.weights.values()),
      data.samples_per_bin(),
      data.seed(),
  };
}

}  // namespace sigchoice
