#include "combilab/moments.hpp"

#include "combilab/linalg.hpp"
#include "combilab/parallel.hpp"
#include "combilab/sampler.hpp"
#include "combilab/seed.hpp"

#include <cmath>
#include <vector>

namespace combilab {

namespace {

void check_nd(const char* who, int n, int d) {
  if (n < 2 || d < 1 || d > n)
    throw ParameterError(std::string(who) + ": need n >= 2 and 1 <= d <= n");
}

bool moment_pass(const MomentReport& r) {
  if (!r.abs_diff) return false;
  if (r.exact) return *r.abs_diff < 1e-10 * std::max(1.0, r.formula_value);
  return *r.abs_diff <= 4.0 * r.standard_error;
}

struct BlockSums {
  long double total = 0.0L;
  long double full_rank_total = 0.0L;
  std::uint64_t full_rank_count = 0;
  std::uint64_t degenerate_count = 0;
};

}  // namespace

SecondMoment x_second_moment(int n, int d) {
  check_nd("x_second_moment", n, d);
  const long double nn = n;
  const long double dd = d;
  SecondMoment out;
  out.value = static_cast<double>((nn - dd) / (nn - 1) * (dd / nn + (dd - 1) / (nn - 1)));
  out.cap = 3.0 * d / n;
  if (out.value > out.cap) throw NumericalError("x_second_moment: value exceeds 3d/n");
  return out;
}

double column_sum_variance(int n, int d) {
  check_nd("column_sum_variance", n, d);
  const double p = static_cast<double>(d) / n;
  return (n - 1) * p * (1.0 - p);
}

ResidualSquare first_row_residual_square(const MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (n < 2 || a.cols() != n) throw ParameterError("first_row_residual_square: need a square matrix, n >= 2");
  const auto f = factor_span(a.bottomRows(n - 1).transpose());
  const double dist = distance_to(f, a.row(0).transpose());
  return {dist * dist, f.rank == n - 1};
}

MomentReport x_second_moment_oracle(int n, int d, std::size_t mc_trials, std::uint64_t seed) {
  check_nd("x_second_moment_oracle", n, d);
  const std::uint64_t choices = binomial(n, d);
  if (choices > kRowEnumerationBudget || saturating_pow(choices, n) > kMatrixEnumerationBudget) {
    MomentReport r = x_second_moment_mc(n, d, mc_trials, seed);
    r.capacity_fallback = true;
    return r;
  }

  const std::vector<RowVector> rows = enumerate_rows(n, d);
  std::vector<VectorXd> dense_rows;
  dense_rows.reserve(rows.size());
  for (const auto& r : rows) dense_rows.push_back(r.dense());
  const std::uint64_t inner = saturating_pow(choices, n - 2);

  // Block b fixes X_2; blocks are reduced in index order.
  std::vector<BlockSums> blocks(static_cast<std::size_t>(choices));
  parallel_for(blocks.size(), [&](std::size_t b) {
    BlockSums acc;
    MatrixXd w(n, n - 1);
    w.col(0) = dense_rows[b];
    for (std::uint64_t t = 0; t < inner; ++t) {
      std::uint64_t rest = t;
      for (int c = n - 2; c >= 1; --c) {
        w.col(c) = dense_rows[static_cast<std::size_t>(rest % choices)];
        rest /= choices;
      }
      const auto f = factor_span(w);
      const bool full = f.rank == n - 1;
      long double tuple_sum = 0.0L;
      for (const auto& x1 : dense_rows) {
        const double dist = distance_to(f, x1);
        tuple_sum += static_cast<long double>(dist) * dist;
      }
      acc.total += tuple_sum;
      if (full) {
        acc.full_rank_total += tuple_sum;
        acc.full_rank_count += choices;
      } else {
        acc.degenerate_count += choices;
      }
    }
    blocks[b] = acc;
  });

  BlockSums sum;
  for (const auto& b : blocks) {
    sum.total += b.total;
    sum.full_rank_total += b.full_rank_total;
    sum.full_rank_count += b.full_rank_count;
    sum.degenerate_count += b.degenerate_count;
  }
  const auto count = static_cast<long double>(sum.full_rank_count + sum.degenerate_count);

  MomentReport r;
  r.n = n;
  r.d = d;
  const SecondMoment closed = x_second_moment(n, d);
  r.formula_value = closed.value;
  r.cap = closed.cap;
  r.exact = true;
  r.samples = static_cast<std::size_t>(count);
  r.oracle_value = static_cast<double>(sum.total / count);
  r.abs_diff = std::abs(r.formula_value - *r.oracle_value);
  r.degenerate_mass = static_cast<double>(static_cast<long double>(sum.degenerate_count) / count);
  if (sum.full_rank_count > 0)
    r.conditional_mean =
        static_cast<double>(sum.full_rank_total / static_cast<long double>(sum.full_rank_count));
  r.pass = moment_pass(r);
  return r;
}

MomentReport x_second_moment_mc(int n, int d, std::size_t trials, std::uint64_t seed) {
  check_nd("x_second_moment_mc", n, d);
  if (trials < 2) throw ParameterError("x_second_moment_mc: need at least 2 trials");
  std::vector<ResidualSquare> vals(trials);
  const SeedSpec spec{seed, label_hash("x-second-moment"), 0};
  parallel_for(trials, [&](std::size_t t) {
    vals[t] = first_row_residual_square(sample_matrix(n, n, d, spec.with_trial(t)).dense());
  });

  long double s = 0.0L;
  long double s2 = 0.0L;
  long double full_sum = 0.0L;
  std::size_t full = 0;
  for (const auto& v : vals) {
    s += v.value;
    s2 += static_cast<long double>(v.value) * v.value;
    if (v.full_rank) {
      full_sum += v.value;
      ++full;
    }
  }
  const auto nt = static_cast<long double>(trials);
  const long double mean = s / nt;
  const long double var = std::max(0.0L, (s2 - nt * mean * mean) / (nt - 1));

  MomentReport r;
  r.n = n;
  r.d = d;
  const SecondMoment closed = x_second_moment(n, d);
  r.formula_value = closed.value;
  r.cap = closed.cap;
  r.exact = false;
  r.samples = trials;
  r.oracle_value = static_cast<double>(mean);
  r.standard_error = static_cast<double>(std::sqrt(var / nt));
  r.abs_diff = std::abs(r.formula_value - *r.oracle_value);
  r.degenerate_mass = static_cast<double>(trials - full) / static_cast<double>(trials);
  if (full > 0) r.conditional_mean = static_cast<double>(full_sum / static_cast<long double>(full));
  r.pass = moment_pass(r);
  return r;
}

TailReport x_norm_tail_check(int n, int d, double u, std::size_t trials, std::uint64_t seed) {
  check_nd("x_norm_tail_check", n, d);
  if (!(u > 0.0)) throw ParameterError("x_norm_tail_check: u must be positive");
  if (trials < 1) throw ParameterError("x_norm_tail_check: trials must be positive");
  std::vector<char> hit(trials, 0);
  const SeedSpec spec{seed, label_hash("x-norm-tail"), 0};
  parallel_for(trials, [&](std::size_t t) {
    const double sq = first_row_residual_square(sample_matrix(n, n, d, spec.with_trial(t)).dense()).value;
    hit[t] = std::sqrt(sq) >= u ? 1 : 0;
  });
  std::size_t hits = 0;
  for (char h : hit) hits += static_cast<std::size_t>(h);

  TailReport rep;
  rep.threshold = u;
  rep.trials = trials;
  rep.empirical_prob = static_cast<double>(hits) / static_cast<double>(trials);
  rep.standard_error = rate_standard_error(rep.empirical_prob, trials);
  rep.bound = 3.0 * d / (u * u * n);
  rep.violation = rep.empirical_prob > *rep.bound + 4.0 * rep.standard_error;
  return rep;
}

VarianceEstimate column_sum_variance_mc(int n, int d, std::size_t trials, std::uint64_t seed) {
  check_nd("column_sum_variance_mc", n, d);
  if (trials < 2) throw ParameterError("column_sum_variance_mc: need at least 2 trials");
  const SeedSpec spec{seed, label_hash("column-sum"), 0};
  std::vector<double> sums(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    int count = 0;
    for (int r = 1; r < n; ++r) {
      const RowVector q = sample_row(n, d, derive_seed(spec.with_trial(t), static_cast<std::uint64_t>(r)));
      if (q.support().front() == 0) ++count;
    }
    sums[t] = count;
  }
  const auto nt = static_cast<double>(trials);
  double mean = 0.0;
  for (double s : sums) mean += s;
  mean /= nt;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double s : sums) {
    const double c = (s - mean) * (s - mean);
    m2 += c;
    m4 += c * c;
  }
  VarianceEstimate out;
  out.trials = trials;
  out.mean = mean;
  out.variance = m2 / (nt - 1);
  const double pop2 = m2 / nt;
  out.standard_error = std::sqrt(std::max(0.0, m4 / nt - pop2 * pop2) / nt);
  return out;
}

}  // namespace combilab
