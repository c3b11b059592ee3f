#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's solver or projection code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Power set of {1..L} as member lists, cardinality ascending, ties by
/// ascending mask value, built by scanning all masks once per cardinality.
inline std::vector<std::vector<int>> power_set(int attributes) {
  std::vector<std::vector<int>> out;
  const std::uint32_t count = 1U << attributes;
  for (int size = 0; size <= attributes; ++size) {
    for (std::uint32_t mask = 0; mask < count; ++mask) {
      std::vector<int> members;
      for (int a = 1; a <= attributes; ++a) {
        if (mask & (1U << (a - 1))) members.push_back(a);
      }
      if (static_cast<int>(members.size()) == size) out.push_back(std::move(members));
    }
  }
  return out;
}

inline bool includes(const std::vector<int>& inner, const std::vector<int>& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

/// Nearest point of the 2-simplex {(t, 1 - t)} to v, by grid search over t.
inline Eigen::Vector2d grid_project_2(const Eigen::Vector2d& v, double step = 1e-5) {
  double best = std::numeric_limits<double>::infinity();
  double best_t = 0.0;
  const auto steps = static_cast<long>(std::llround(1.0 / step));
  for (long i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * step;
    const double d = (t - v[0]) * (t - v[0]) + (1.0 - t - v[1]) * (1.0 - t - v[1]);
    if (d < best) {
      best = d;
      best_t = t;
    }
  }
  return {best_t, 1.0 - best_t};
}

/// Exhaustive grid minimum of ||Phi x - p||^2 over the simplex for K = 2 and
/// Phi = [A | I_2], with every coordinate of x on the grid of spacing `step`.
///
/// The weight coordinates are enumerated explicitly. For fixed weights the
/// objective is a convex quadratic in the first tail coordinate, so the grid
/// minimum along that axis is attained at one of the two grid points
/// bracketing the (clamped) continuous minimizer; both are evaluated.
inline double grid_min_residual_k2(const Eigen::MatrixXd& weights_block, const Eigen::Vector2d& target,
                                   double step = 1e-3) {
  const Eigen::Index m = weights_block.cols();
  const auto steps = static_cast<long>(std::llround(1.0 / step));
  double best = std::numeric_limits<double>::infinity();

  auto evaluate_tail = [&](const Eigen::Vector2d& fixed, long mass_steps) {
    // fixed = A w; tail = (t, s - t) with s = mass_steps * step.
    const double s = static_cast<double>(mass_steps) * step;
    const Eigen::Vector2d r = target - fixed - Eigen::Vector2d(0.0, s);
    // residual = fixed + (t, s - t) - target = (t - r0, -t - r1).
    const double t_star = std::clamp(0.5 * (r[0] - r[1]), 0.0, s);
    const long lo = std::clamp(static_cast<long>(std::floor(t_star / step)), 0L, mass_steps);
    for (long i : {lo, std::min(lo + 1, mass_steps)}) {
      const double t = static_cast<double>(i) * step;
      const double e0 = t - r[0];
      const double e1 = -t - r[1];
      best = std::min(best, e0 * e0 + e1 * e1);
    }
  };

  if (m == 0) {
    evaluate_tail(Eigen::Vector2d::Zero(), steps);
  } else if (m == 1) {
    for (long a = 0; a <= steps; ++a) {
      evaluate_tail(weights_block.col(0) * (static_cast<double>(a) * step), steps - a);
    }
  } else if (m == 2) {
    for (long a = 0; a <= steps; ++a) {
      for (long b = 0; a + b <= steps; ++b) {
        const Eigen::Vector2d fixed = weights_block.col(0) * (static_cast<double>(a) * step) +
                                      weights_block.col(1) * (static_cast<double>(b) * step);
        evaluate_tail(fixed, steps - a - b);
      }
    }
  }
  return best;
}

struct MinNormPoint {
  Eigen::VectorXd weights;
  double squared_norm;
};

/// Minimum of ||w||^2 + ||p - A w||^2 over grid points w >= 0 with A w <= p,
/// i.e. the minimum-norm zero-residual point of [A | I], for |J| <= 2.
inline MinNormPoint grid_min_norm(const Eigen::MatrixXd& weights_block, const Eigen::VectorXd& target,
                                  double step) {
  const Eigen::Index m = weights_block.cols();
  const auto steps = static_cast<long>(std::llround(1.0 / step));
  MinNormPoint best{Eigen::VectorXd::Zero(m), std::numeric_limits<double>::infinity()};
  auto consider = [&](const Eigen::VectorXd& w) {
    const Eigen::VectorXd tail = target - weights_block * w;
    if ((tail.array() < 0.0).any()) return;
    const double value = w.squaredNorm() + tail.squaredNorm();
    if (value < best.squared_norm) best = {w, value};
  };
  if (m == 0) {
    consider(Eigen::VectorXd::Zero(0));
  } else if (m == 1) {
    for (long a = 0; a <= steps; ++a) consider(Eigen::VectorXd::Constant(1, static_cast<double>(a) * step));
  } else {
    for (long a = 0; a <= steps; ++a) {
      for (long b = 0; a + b <= steps; ++b) {
        consider(Eigen::Vector2d(static_cast<double>(a) * step, static_cast<double>(b) * step));
      }
    }
  }
  return best;
}

/// Uniform draw from the simplex by sorting uniforms (spacings), a different
/// route from the library's exponential normalization.
inline Eigen::VectorXd random_simplex(std::mt19937_64& rng, Eigen::Index dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> cuts{0.0, 1.0};
  for (Eigen::Index i = 0; i + 1 < dim; ++i) cuts.push_back(u(rng));
  std::sort(cuts.begin(), cuts.end());
  Eigen::VectorXd out(dim);
  for (Eigen::Index i = 0; i < dim; ++i) out[i] = cuts[static_cast<std::size_t>(i) + 1] - cuts[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace oracle
