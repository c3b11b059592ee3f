#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sigchoice {

/// Absolute tolerance for entry bounds and row sums of stochastic objects.
inline constexpr double kStochasticTolerance = 1e-9;

/// Non-negative vector summing to one.
class SimplexVector {
 public:
  /// Throws Error(Dimension) for an empty vector, Error(Numeric) for non-finite
  /// entries and Error(NotStochastic) when off the simplex by more than the tolerance.
  explicit SimplexVector(Eigen::VectorXd values);

  static SimplexVector uniform(Eigen::Index dim);

  Eigen::Index size() const noexcept { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }
  const Eigen::VectorXd& values() const noexcept { return values_; }

 private:
  Eigen::VectorXd values_;
};

/// Row-stochastic matrix: entries in [0, 1] and unit row sums, both up to
/// kStochasticTolerance.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Eigen::MatrixXd values);

  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }
  double operator()(Eigen::Index r, Eigen::Index c) const { return values_(r, c); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }

  friend bool operator==(const StochasticMatrix& a, const StochasticMatrix& b) {
    return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
           a.values_ == b.values_;
  }

 private:
  Eigen::MatrixXd values_;
};

/// Checks the stochastic-matrix invariants without constructing one.
bool is_row_stochastic(const Eigen::MatrixXd& m, double tol = kStochasticTolerance);

/// Euclidean projection onto the probability simplex via the sort-based exact
/// algorithm (O(d log d)).
SimplexVector project_to_simplex(const Eigen::VectorXd& v);

/// ||a - b||_F. Throws Error(Shape) when the dimensions differ.
double frobenius_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// (1/N) sum_n ||W Q - P(n)||_F^2 over the bins P(1..N).
double average_deviation(const Eigen::MatrixXd& weights, const Eigen::MatrixXd& preferences,
                         std::span<const StochasticMatrix> bins);

/// ||A x - b||^2.
double squared_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b);

/// Gradient of x -> ||A x - b||^2, i.e. 2 A^T (A x - b).
Eigen::VectorXd squared_residual_gradient(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& b);

/// Entrywise mean of the bins.
Eigen::MatrixXd bin_mean(std::span<const StochasticMatrix> bins);

/// (1/N) sum_n ||P(n) - mean||_F^2, the floor of the average deviation.
double within_bin_variance(std::span<const StochasticMatrix> bins);

}  // namespace sigchoice
