#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sigchoice/attribute_lattice.hpp"
#include "sigchoice/choice_model.hpp"
#include "sigchoice/error.hpp"
#include "sigchoice/stochastic.hpp"

namespace sigchoice {

/// One stage of the sequential estimator: fit the mean choice row of stage i as
/// a convex combination of earlier preference estimates plus a free K-vector.
///
/// The coefficient matrix is [q_j for j in support | I_K], a K x (|J| + K)
/// matrix. Coordinates of stages outside the subset support are not variables
/// at all, so their weights stay exactly zero.
class StageProblem {
 public:
  /// Throws Error(Dimension) if a column or the target has the wrong length.
  StageProblem(int stage, std::vector<int> support, std::span<const SimplexVector> columns,
               SimplexVector mean_target);

  int stage() const noexcept { return stage_; }
  const std::vector<int>& support() const noexcept { return support_; }
  const Eigen::MatrixXd& coefficients() const noexcept { return coefficients_; }
  const SimplexVector& mean_target() const noexcept { return mean_target_; }
  Eigen::Index weight_count() const noexcept { return static_cast<Eigen::Index>(support_.size()); }
  Eigen::Index choice_count() const noexcept { return mean_target_.size(); }
  Eigen::Index variable_count() const noexcept { return coefficients_.cols(); }

 private:
  int stage_;
  std::vector<int> support_;
  Eigen::MatrixXd coefficients_;
  SimplexVector mean_target_;
};

struct SolverOptions {
  int power_iterations = 100;
  int max_gradient_iterations = 50'000;
  /// Projected gradient stops once the iterate moves less than this (max-norm).
  double step_tolerance = 1e-12;
  /// Residual at which the zero-residual face is considered reached.
  double face_residual = 1e-10;
  /// Largest residual a converged solve may report.
  double max_residual = 1e-8;
  /// Active-set iteration cap; 0 selects 50 (|J| + K) + 100.
  int max_active_set_iterations = 0;
};

/// Thrown when a stage solve fails; carries the last iterate and its residual.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd last_iterate, double residual, int stage = 0)
      : Error(ErrorKind::Convergence, what),
        last_iterate_(std::move(last_iterate)),
        residual_(residual),
        stage_(stage) {}

  const Eigen::VectorXd& last_iterate() const noexcept { return last_iterate_; }
  double residual() const noexcept { return residual_; }
  /// 1-based stage index, 0 when not attributed to a stage.
  int stage() const noexcept { return stage_; }

 private:
  Eigen::VectorXd last_iterate_;
  double residual_;
  int stage_;
};

struct SimplexFit {
  SimplexVector x;
  /// ||Phi x - p||^2 at x.
  double residual;
  /// ||Phi x - p||^2 at the last projected-gradient iterate.
  double gradient_residual;
  /// Projected-gradient iterations spent certifying the zero-residual level.
  int gradient_iterations;
  /// Active-set iterations of the minimum-norm pass.
  int active_set_iterations;
};

/// Unconstrained minimum-norm least-squares point pinv(Phi) p.
Eigen::VectorXd pseudo_inverse_point(const StageProblem& problem);

/// Largest eigenvalue of A^T A by power iteration from the all-ones vector.
double max_eigenvalue_ata(const Eigen::MatrixXd& a, int iterations);

/// Minimizes ||Phi x - p||^2 over the simplex and returns the minimum-norm
/// minimizer.
///
/// Phase one runs projected gradient (step 1 / lambda_max(Phi^T Phi)) from the
/// projected pseudo-inverse point until the residual reaches
/// `options.face_residual`, the iterate stops moving, or the iteration cap is
/// hit. Because Phi carries an identity block and p is on the simplex, the
/// optimal residual is zero and the optimal set is {x >= 0 : Phi x = p}.
/// Phase two finds the minimum-norm point of that set exactly with a primal
/// active-set method.
///
/// Throws ConvergenceError if the active-set pass does not terminate, or if its
/// point has a residual above `options.max_residual` or above the phase-one
/// residual plus `options.face_residual`.
SimplexFit solve_simplex_ls(const StageProblem& problem, const SolverOptions& options = {});

struct StageEstimate {
  /// w(i, j) for j in the support, in support order.
  Eigen::VectorXd weights;
  SimplexVector preference;
  /// Self-weight 1 - sum(weights) fell to the degeneracy tolerance; the
  /// preference is a uniform placeholder and the weights were rescaled to sum to one.
  bool degenerate;
};

inline constexpr double kDegeneracyTolerance = 1e-8;

/// Splits x = [w; s q] into the weights w and the preference q = tail / s with
/// s = 1 - sum(w).
StageEstimate extract_estimates(const SimplexVector& x, std::span<const int> support, int choice_count,
                                double epsilon = kDegeneracyTolerance);

struct StageSolution {
  int stage;
  std::vector<int> support;
  SimplexVector x;
  double residual;
  Eigen::VectorXd weights;
  SimplexVector preference;
  bool degenerate;
};

/// Closed-form first stage: the bin mean of the first rows.
SimplexVector solve_stage1(const ChoiceDataset& data);

/// Builds the problem for `stage` (2 <= stage <= 2^L). `estimates[j - 1]` holds
/// the preference estimate of stage j; every stage in the support must be filled.
StageProblem build_stage_problem(int stage, std::span<const std::optional<SimplexVector>> estimates,
                                 const ChoiceDataset& data, const AttributeLattice& lattice);

/// solve_simplex_ls followed by extract_estimates.
StageSolution solve_stage(const StageProblem& problem, const SolverOptions& options = {});

}  // namespace sigchoice
