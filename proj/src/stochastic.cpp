#include "sigchoice/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "sigchoice/error.hpp"

namespace sigchoice {

namespace {

std::string describe(Eigen::Index rows, Eigen::Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorKind::Numeric, std::string(what) + " has a non-finite entry");
}

void require_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::Shape, describe(a.rows(), a.cols()) + " vs " + describe(b.rows(), b.cols()));
  }
}

}  // namespace

bool is_row_stochastic(const Eigen::MatrixXd& m, double tol) {
  if (!m.allFinite()) return false;
  if ((m.array() < -tol).any() || (m.array() > 1.0 + tol).any()) return false;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (std::abs(m.row(r).sum() - 1.0) > tol) return false;
  }
  return true;
}

SimplexVector::SimplexVector(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() == 0) throw Error(ErrorKind::Dimension, "empty simplex vector");
  require_finite(values_, "simplex vector");
  if ((values_.array() < -kStochasticTolerance).any() ||
      std::abs(values_.sum() - 1.0) > kStochasticTolerance) {
    throw Error(ErrorKind::NotStochastic, "vector is not on the probability simplex");
  }
}

SimplexVector SimplexVector::uniform(Eigen::Index dim) {
  if (dim <= 0) throw Error(ErrorKind::Dimension, "uniform vector needs a positive dimension");
  return SimplexVector(Eigen::VectorXd::Constant(dim, 1.0 / static_cast<double>(dim)));
}

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  require_finite(values_, "stochastic matrix");
  if (!is_row_stochastic(values_)) {
    throw Error(ErrorKind::NotStochastic,
                describe(values_.rows(), values_.cols()) + " matrix is not row-stochastic");
  }
}

SimplexVector project_to_simplex(const Eigen::VectorXd& v) {
  if (v.size() == 0) throw Error(ErrorKind::Dimension, "cannot project an empty vector");
  require_finite(v, "projection input");

  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  // Largest rho with sorted[rho] - (cumsum[rho] - 1) / (rho + 1) > 0.
  double cumsum = 0.0;
  double threshold = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumsum += sorted[j];
    const double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) threshold = candidate;
  }
  Eigen::VectorXd out = (v.array() - threshold).max(0.0);
  return SimplexVector(std::move(out));
}

double frobenius_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  require_same_shape(a, b);
  return (a - b).norm();
}

double average_deviation(const Eigen::MatrixXd& weights, const Eigen::MatrixXd& preferences,
                         std::span<const StochasticMatrix> bins) {
  if (bins.empty()) throw Error(ErrorKind::EmptyData, "average deviation needs at least one bin");
  if (weights.cols() != preferences.rows()) {
    throw Error(ErrorKind::Shape, "W is " + describe(weights.rows(), weights.cols()) + ", Q is " +
                                      describe(preferences.rows(), preferences.cols()));
  }
  const Eigen::MatrixXd product = weights * preferences;
  double total = 0.0;
  for (const auto& bin : bins) {
    require_same_shape(product, bin.values());
    total += (product - bin.values()).squaredNorm();
  }
  return total / static_cast<double>(bins.size());
}

double squared_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  if (a.cols() != x.size() || a.rows() != b.size()) throw Error(ErrorKind::Shape, "least-squares operands disagree");
  return (a * x - b).squaredNorm();
}

Eigen::VectorXd squared_residual_gradient(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& b) {
  if (a.cols() != x.size() || a.rows() != b.size()) throw Error(ErrorKind::Shape, "least-squares operands disagree");
  return 2.0 * a.transpose() * (a * x - b);
}

Eigen::MatrixXd bin_mean(std::span<const StochasticMatrix> bins) {
  if (bins.empty()) throw Error(ErrorKind::EmptyData, "mean of zero bins");
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(bins.front().rows(), bins.front().cols());
  for (const auto& bin : bins) {
    require_same_shape(sum, bin.values());
    sum += bin.values();
  }
  return sum / static_cast<double>(bins.size());
}

double within_bin_variance(std::span<const StochasticMatrix> bins) {
  const Eigen::MatrixXd mean = bin_mean(bins);
  double total = 0.0;
  for (const auto& bin : bins) total += (bin.values() - mean).squaredNorm();
  return total / static_cast<double>(bins.size());
}

}  // namespace sigchoice
