#pragma once

#include "combilab/concentration.hpp"
#include "combilab/error.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>

namespace combilab {

struct SecondMoment {
  /// (n-d)/(n-1) * (d/n + (d-1)/(n-1))
  double value = 0.0;
  /// 3d/n
  double cap = 0.0;
};

/// Closed form for E ||x||^2, x the residual of X_1 against span{X_2..X_n}.
/// Throws ParameterError unless 2 <= n and 1 <= d <= n, NumericalError if value > cap.
SecondMoment x_second_moment(int n, int d);

/// (n-1)(d/n)(1-d/n): variance of one column sum over rows 2..n.
double column_sum_variance(int n, int d);

struct MomentReport {
  int n = 0;
  int d = 0;
  double formula_value = 0.0;
  double cap = 0.0;
  std::optional<double> oracle_value;
  std::optional<double> abs_diff;
  /// True for full enumeration, false for the Monte Carlo fallback.
  bool exact = true;
  /// Set when the exact route was requested but exceeded its budget.
  bool capacity_fallback = false;
  std::size_t samples = 0;
  /// Zero in the exact regime.
  double standard_error = 0.0;
  /// Probability that rank span{X_2..X_n} < n-1.
  double degenerate_mass = 0.0;
  /// Mean of dist^2 restricted to full-rank spans; absent if there are none.
  std::optional<double> conditional_mean;
  /// Exact: abs_diff < 1e-10 max(1, formula). Sampled: abs_diff <= 4 standard errors.
  bool pass = false;
};

/// dist(X_1, span{X_2..X_n})^2 for the rows of a square model matrix, via the
/// rank-revealing QR used by the spectral routines. Also reports whether the
/// span had full dimension n-1.
struct ResidualSquare {
  double value = 0.0;
  bool full_rank = true;
};
ResidualSquare first_row_residual_square(const MatrixXd& a);

/// Brute-force mean of dist(X_1, span{X_2..X_n})^2 over all C(n,d)^n matrices
/// when that count is within kMatrixEnumerationBudget. Otherwise falls back to
/// mc_trials sampled matrices and sets capacity_fallback.
MomentReport x_second_moment_oracle(int n, int d, std::size_t mc_trials = 100'000,
                                    std::uint64_t seed = 1);

/// Monte Carlo only.
MomentReport x_second_moment_mc(int n, int d, std::size_t trials, std::uint64_t seed);

/// Empirical P(||x|| >= u) over sampled matrices against 3d/(u^2 n).
TailReport x_norm_tail_check(int n, int d, double u, std::size_t trials, std::uint64_t seed);

struct VarianceEstimate {
  double mean = 0.0;
  double variance = 0.0;
  /// Delta-method standard error of the sample variance.
  double standard_error = 0.0;
  std::size_t trials = 0;
};

/// Sample variance of the first column sum over rows 2..n.
VarianceEstimate column_sum_variance_mc(int n, int d, std::size_t trials, std::uint64_t seed);

}  // namespace combilab
