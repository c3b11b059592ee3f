#include "sigchoice/stage_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace sigchoice {

namespace {

constexpr double kStepNegligible = 1e-14;
constexpr double kMultiplierTolerance = 1e-12;

// Minimum-norm point of {x >= 0 : Phi x = p} for Phi = [A | I_K].
//
// Writing x = [w; t], the equality forces t = p - A w, so the problem reduces
// to the strictly convex QP
//     minimize  w^T w + ||p - A w||^2
//     s.t.      w >= 0,  A w <= p
// over the |J| weight coordinates only. w = 0 is always feasible since p >= 0,
// which gives the primal active-set method its starting point.
struct FaceSolution {
  Eigen::VectorXd x;
  int iterations;
};

struct ReducedSolution {
  Eigen::VectorXd w;
  int iterations;
  bool terminated;
};

// Active-set pass on a problem whose targets are all positive, so that w = 0
// is a non-degenerate vertex.
ReducedSolution active_set(const Eigen::MatrixXd& columns, const Eigen::VectorXd& target, int iteration_limit) {
  const Eigen::Index m = columns.cols();
  const Eigen::Index k = columns.rows();

  const Eigen::MatrixXd hessian = Eigen::MatrixXd::Identity(m, m) + columns.transpose() * columns;
  const Eigen::VectorXd linear = -columns.transpose() * target;

  // Constraint c in [0, m): w_c >= 0. Constraint m + r: p_r - a_r^T w >= 0.
  const Eigen::Index constraint_count = m + k;
  auto normal = [&](Eigen::Index c) -> Eigen::VectorXd {
    if (c < m) return Eigen::VectorXd::Unit(m, c);
    return -columns.row(c - m).transpose();
  };
  auto slack = [&](Eigen::Index c, const Eigen::VectorXd& w) -> double {
    if (c < m) return w[c];
    return target[c - m] - columns.row(c - m).dot(w);
  };

  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  std::vector<Eigen::Index> working;
  for (Eigen::Index c = 0; c < m; ++c) working.push_back(c);

  const int max_iterations =
      iteration_limit > 0 ? iteration_limit : static_cast<int>(50 * constraint_count + 100);
  int iteration = 0;
  for (; iteration < max_iterations; ++iteration) {
    const auto active = static_cast<Eigen::Index>(working.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + active, m + active);
    kkt.topLeftCorner(m, m) = hessian;
    for (Eigen::Index a = 0; a < active; ++a) {
      const Eigen::VectorXd n = normal(working[static_cast<std::size_t>(a)]);
      kkt.block(0, m + a, m, 1) = n;
      kkt.block(m + a, 0, 1, m) = n.transpose();
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + active);
    rhs.head(m) = -(hessian * w + linear);
    const Eigen::VectorXd solution = kkt.fullPivLu().solve(rhs);
    const Eigen::VectorXd step = solution.head(m);
    // Stationarity reads H s + g + C^T mu = 0, so the multipliers are -mu.
    const Eigen::VectorXd multipliers = -solution.tail(active);

    if (step.lpNorm<Eigen::Infinity>() <= kStepNegligible) {
      // Smallest constraint index with a negative multiplier (Bland's rule).
      Eigen::Index drop = -1;
      for (Eigen::Index a = 0; a < active; ++a) {
        if (multipliers[a] < -kMultiplierTolerance &&
            (drop < 0 || working[static_cast<std::size_t>(a)] < working[static_cast<std::size_t>(drop)])) {
          drop = a;
        }
      }
      if (drop < 0) break;
      working.erase(working.begin() + drop);
      continue;
    }

    double alpha = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index c = 0; c < constraint_count; ++c) {
      if (std::find(working.begin(), working.end(), c) != working.end()) continue;
      const double rate = normal(c).dot(step);
      if (rate >= -std::numeric_limits<double>::epsilon()) continue;
      const double limit = std::max(0.0, slack(c, w)) / -rate;
      if (limit < alpha) {
        alpha = limit;
        blocking = c;
      }
    }
    w += alpha * step;
    if (blocking >= 0) working.push_back(blocking);
  }

  return {w, iteration, iteration < max_iterations};
}

FaceSolution min_norm_on_face(const Eigen::MatrixXd& columns, const Eigen::VectorXd& target, int stage,
                              int iteration_limit) {
  const Eigen::Index m = columns.cols();
  const Eigen::Index k = columns.rows();

  // A zero target entry p_r forces w_j = 0 wherever a_rj > 0, and row r then
  // drops out of the objective.
  std::vector<Eigen::Index> rows, free;
  for (Eigen::Index r = 0; r < k; ++r) {
    if (target[r] > 0.0) rows.push_back(r);
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    bool forced = false;
    for (Eigen::Index r = 0; r < k && !forced; ++r) forced = target[r] <= 0.0 && columns(r, j) > 0.0;
    if (!forced) free.push_back(j);
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  int iterations = 0;
  if (!free.empty()) {
    const ReducedSolution reduced = active_set(columns(rows, free), target(rows), iteration_limit);
    w(free) = reduced.w;
    iterations = reduced.iterations;
    if (!reduced.terminated) {
      Eigen::VectorXd x(m + k);
      x << w.cwiseMax(0.0), (target - columns * w).cwiseMax(0.0);
      throw ConvergenceError("active-set pass did not terminate within " + std::to_string(iterations) +
                                 " iterations",
                             x, std::numeric_limits<double>::quiet_NaN(), stage);
    }
  }
  Eigen::VectorXd x(m + k);
  x << w.cwiseMax(0.0), (target - columns * w).cwiseMax(0.0);
  return {x, iterations};
}

}  // namespace

StageProblem::StageProblem(int stage, std::vector<int> support, std::span<const SimplexVector> columns,
                           SimplexVector mean_target)
    : stage_(stage), support_(std::move(support)), mean_target_(std::move(mean_target)) {
  if (columns.size() != support_.size()) {
    throw Error(ErrorKind::Dimension, "stage " + std::to_string(stage) + " has " +
                                          std::to_string(support_.size()) + " support entries but " +
                                          std::to_string(columns.size()) + " columns");
  }
  const Eigen::Index k = mean_target_.size();
  const auto m = static_cast<Eigen::Index>(support_.size());
  coefficients_.resize(k, m + k);
  for (Eigen::Index j = 0; j < m; ++j) {
    const SimplexVector& column = columns[static_cast<std::size_t>(j)];
    if (column.size() != k) {
      throw Error(ErrorKind::Dimension, "preference column has length " + std::to_string(column.size()) +
                                            ", expected " + std::to_string(k));
    }
    coefficients_.col(j) = column.values();
  }
  coefficients_.rightCols(k).setIdentity();
}

Eigen::VectorXd pseudo_inverse_point(const StageProblem& problem) {
  return problem.coefficients().completeOrthogonalDecomposition().solve(problem.mean_target().values());
}

double max_eigenvalue_ata(const Eigen::MatrixXd& a, int iterations) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(a.cols()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd next = a.transpose() * (a * v);
    lambda = v.dot(next);
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    v = next / norm;
  }
  return lambda;
}

SimplexFit solve_simplex_ls(const StageProblem& problem, const SolverOptions& options) {
  const Eigen::MatrixXd& phi = problem.coefficients();
  const Eigen::VectorXd& target = problem.mean_target().values();

  // Phase one: projected gradient from the projected pseudo-inverse point.
  Eigen::VectorXd x = project_to_simplex(pseudo_inverse_point(problem)).values();
  double residual = squared_residual(phi, x, target);
  // Power iteration can undershoot; the identity block bounds lambda_max below by 1.
  const double lambda = std::max(1.0, max_eigenvalue_ata(phi, options.power_iterations));
  // 1/lambda_max for the residual 1/2 ||Phi x - p||^2, i.e. gradient A^T (A x - b).
  const double step = 1.0 / lambda;
  int iterations = 0;
  while (residual > options.face_residual && iterations < options.max_gradient_iterations) {
    const Eigen::VectorXd gradient = 0.5 * squared_residual_gradient(phi, x, target);
    Eigen::VectorXd next = project_to_simplex(x - step * gradient).values();
    const double change = (next - x).lpNorm<Eigen::Infinity>();
    x = std::move(next);
    residual = squared_residual(phi, x, target);
    ++iterations;
    if (change < options.step_tolerance) break;
  }

  // Phase two: canonical representative of the optimal set.
  const FaceSolution face = min_norm_on_face(phi.leftCols(problem.weight_count()), target, problem.stage(),
                                             options.max_active_set_iterations);
  const double face_residual = squared_residual(phi, face.x, target);
  if (face_residual > options.max_residual || face_residual > residual + options.face_residual) {
    throw ConvergenceError("minimum-norm point has residual " + std::to_string(face_residual) +
                               ", projected gradient reached " + std::to_string(residual),
                           face.x, face_residual, problem.stage());
  }
  return SimplexFit{SimplexVector(face.x), face_residual, residual, iterations, face.iterations};
}

StageEstimate extract_estimates(const SimplexVector& x, std::span<const int> support, int choice_count,
                                double epsilon) {
  const auto m = static_cast<Eigen::Index>(support.size());
  if (x.size() != m + choice_count) {
    throw Error(ErrorKind::Dimension, "solution has " + std::to_string(x.size()) + " entries, expected " +
                                          std::to_string(m + choice_count));
  }
  Eigen::VectorXd weights = x.values().head(m);
  const double weight_mass = weights.sum();
  const double self_weight = 1.0 - weight_mass;
  if (self_weight <= epsilon) {
    if (weight_mass > 0.0) weights /= weight_mass;
    return StageEstimate{std::move(weights), SimplexVector::uniform(choice_count), true};
  }
  Eigen::VectorXd preference = x.values().tail(choice_count) / self_weight;
  // Absorb rounding drift of the division; a no-op in exact arithmetic.
  preference /= preference.sum();
  return StageEstimate{std::move(weights), SimplexVector(std::move(preference)), false};
}

SimplexVector solve_stage1(const ChoiceDataset& data) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(data.choice_count());
  for (const auto& bin : data.bins()) mean += bin.values().row(0).transpose();
  mean /= static_cast<double>(data.bin_count());
  if (std::abs(mean.sum() - 1.0) > 1e-12 || (mean.array() < 0.0).any()) return project_to_simplex(mean);
  return SimplexVector(std::move(mean));
}

StageProblem build_stage_problem(int stage, std::span<const std::optional<SimplexVector>> estimates,
                                 const ChoiceDataset& data, const AttributeLattice& lattice) {
  if (stage < 2 || stage > lattice.size()) {
    throw Error(ErrorKind::Index, "stage " + std::to_string(stage) + " outside [2, " +
                                      std::to_string(lattice.size()) + "]");
  }
  if (data.message_count() != lattice.size()) {
    throw Error(ErrorKind::Shape, "dataset has " + std::to_string(data.message_count()) +
                                      " messages but the lattice has " + std::to_string(lattice.size()));
  }
  std::vector<int> support = lattice.sub_support(stage);
  std::vector<SimplexVector> columns;
  columns.reserve(support.size());
  for (const int j : support) {
    const auto idx = static_cast<std::size_t>(j - 1);
    if (idx >= estimates.size() || !estimates[idx]) {
      throw Error(ErrorKind::Dependency, "stage " + std::to_string(stage) + " needs the estimate of stage " +
                                             std::to_string(j));
    }
    columns.push_back(*estimates[idx]);
  }
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(data.choice_count());
  for (const auto& bin : data.bins()) mean += bin.values().row(stage - 1).transpose();
  mean /= static_cast<double>(data.bin_count());
  return StageProblem(stage, std::move(support), columns, SimplexVector(std::move(mean)));
}

StageSolution solve_stage(const StageProblem& problem, const SolverOptions& options) {
  SimplexFit fit = solve_simplex_ls(problem, options);
  StageEstimate estimate =
      extract_estimates(fit.x, problem.support(), static_cast<int>(problem.choice_count()));
  return StageSolution{problem.stage(),        problem.support(),          std::move(fit.x),
                       fit.residual,           std::move(estimate.weights), std::move(estimate.preference),
                       estimate.degenerate};
}

}  // namespace sigchoice
