#pragma once

#include "combilab/error.hpp"
#include "combilab/types.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace combilab {

/// Mean and variance of <q, v> for q uniform over 0/1 vectors with d ones.
struct RowMoments {
  double mu = 0.0;
  double sigma2 = 0.0;
};

/// mu = p sum v_i, sigma2 = p(1-p) [sum v_i^2 - ((sum v_i)^2 - sum v_i^2)/(n-1)], p = d/n.
/// Accumulated in long double.
template <typename Derived>
RowMoments row_inner_moments(const Eigen::MatrixBase<Derived>& v, int d) {
  const auto n = static_cast<int>(v.size());
  if (n < 1 || d < 1 || d > n) throw ParameterError("row_inner_moments: need 1 <= d <= n");
  long double s1 = 0.0L;
  long double s2 = 0.0L;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto x = static_cast<long double>(v(i));
    s1 += x;
    s2 += x * x;
  }
  const long double p = static_cast<long double>(d) / static_cast<long double>(n);
  RowMoments out;
  out.mu = static_cast<double>(p * s1);
  out.sigma2 = n == 1 ? 0.0
                      : static_cast<double>(p * (1.0L - p) *
                                            (s2 - (s1 * s1 - s2) / static_cast<long double>(n - 1)));
  return out;
}

/// Plug-in Levy concentration sup_x P(|X - x| < eps) of an empirical sample.
struct LevyEstimate {
  double width = 0.0;
  double value = 0.0;
  std::size_t sample_count = 0;
};

/// Sorted-anchor estimator: max over anchors i of #{j : x_i <= x_j < x_i + 2 eps} / N.
/// Throws ParameterError for an empty sample or negative eps.
LevyEstimate levy_estimate(std::vector<double> samples, double eps);

struct SmallBallRhs {
  double value = 0.0;
  /// min(1, value)
  double clamped = 0.0;
};

/// 4 sqrt2 eps/(gamma delta rho) + 28 sqrt2/(gamma delta^{3/2} rho sqrt d) + 2 exp(-4 mu^2 d).
/// Throws ParameterError unless 0 < gamma < delta rho / 12 and the rest are positive.
SmallBallRhs small_ball_rhs(double eps, double gamma, double delta, double rho, int d, double mu_const);

/// One empirical probability set against a bound.
struct TailReport {
  double threshold = 0.0;
  double empirical_prob = 0.0;
  /// Absent when no analytic bound is asserted.
  std::optional<double> bound;
  std::size_t trials = 0;
  double standard_error = 0.0;
  /// empirical_prob > bound + 4 standard errors.
  bool violation = false;
};

/// Bernoulli standard error sqrt(p(1-p)/N).
double rate_standard_error(double p, std::size_t trials);

/// Fraction of sampled rows q with |<q,v> - mu| >= t, against 2 exp(-t^2 / (8 sum v_i^2)).
TailReport slice_tail_check(const VectorXd& v, int d, double t, std::size_t trials, std::uint64_t seed);

/// Fraction of sampled m x n matrices with ||M v|| <= c sqrt(p n). No bound attached.
/// Requires n/2 <= m <= n.
TailReport direction_rate(const VectorXd& v, int m, int d, double c, std::size_t trials,
                          std::uint64_t seed);

/// Levy concentration of <q, v> at width eps sqrt(d/n) against min(1, small_ball_rhs).
struct SmallBallComparison {
  LevyEstimate levy;
  SmallBallRhs rhs;
  double standard_error = 0.0;
  bool violation = false;
};

SmallBallComparison small_ball_comparison(const VectorXd& v, int d, double eps, double gamma,
                                          double delta, double rho, double mu_const,
                                          std::size_t trials, std::uint64_t seed);

/// Finite distribution on nonnegative reals.
struct DiscreteDistribution {
  std::vector<double> values;
  std::vector<double> probs;

  static DiscreteDistribution uniform(std::vector<double> values);
};

struct MarkovCheck {
  /// P((1/n) sum Z_k <= eps)
  double lhs = 0.0;
  /// (2/n) sum P(Z_k <= 2 eps)
  double rhs = 0.0;
  bool exact = true;
  /// Zero in the exact regime.
  double standard_error = 0.0;
  std::size_t trials = 0;
  /// lhs > rhs (+ 4 standard errors when sampled).
  bool violation = false;
};

inline constexpr std::uint64_t kJointSupportBudget = 1'000'000;

/// Exact over the product measure when the joint support fits the budget,
/// Monte Carlo with mc_trials draws otherwise.
MarkovCheck markov_avg_check(const std::vector<DiscreteDistribution>& dists, double eps,
                             std::size_t mc_trials = 200'000, std::uint64_t seed = 1);

}  // namespace combilab
