#include "combilab/concentration.hpp"

#include "combilab/sampler.hpp"
#include "combilab/seed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace combilab {

namespace {

double inner_with_row(const RowVector& q, const VectorXd& v) {
  double s = 0.0;
  for (int j : q.support()) s += v(j);
  return s;
}

}  // namespace

LevyEstimate levy_estimate(std::vector<double> samples, double eps) {
  if (samples.empty()) throw ParameterError("levy_estimate: empty sample");
  if (!(eps >= 0.0)) throw ParameterError("levy_estimate: eps must be nonnegative");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  std::size_t best = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    j = std::max(j, i);
    while (j < n && samples[j] < samples[i] + 2.0 * eps) ++j;
    best = std::max(best, j - i);
  }
  return {eps, static_cast<double>(best) / static_cast<double>(n), n};
}

SmallBallRhs small_ball_rhs(double eps, double gamma, double delta, double rho, int d, double mu_const) {
  if (!(delta > 0.0 && rho > 0.0 && d >= 1 && mu_const > 0.0 && eps >= 0.0))
    throw ParameterError("small_ball_rhs: eps >= 0 and positive delta, rho, d, mu required");
  if (!(gamma > 0.0 && gamma < delta * rho / 12.0))
    throw ParameterError("small_ball_rhs: gamma must lie in (0, delta*rho/12)");
  const double root2 = std::sqrt(2.0);
  const double dd = static_cast<double>(d);
  SmallBallRhs out;
  out.value = 4.0 * root2 * eps / (gamma * delta * rho) +
              28.0 * root2 / (gamma * std::pow(delta, 1.5) * rho * std::sqrt(dd)) +
              2.0 * std::exp(-4.0 * mu_const * mu_const * dd);
  out.clamped = std::min(1.0, out.value);
  return out;
}

double rate_standard_error(double p, std::size_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

TailReport slice_tail_check(const VectorXd& v, int d, double t, std::size_t trials, std::uint64_t seed) {
  const int n = static_cast<int>(v.size());
  if (trials < 1) throw ParameterError("slice_tail_check: trials must be positive");
  if (!(t >= 0.0)) throw ParameterError("slice_tail_check: t must be nonnegative");
  const RowMoments mom = row_inner_moments(v, d);
  const SeedSpec spec{seed, label_hash("slice-check"), 0};
  std::size_t hits = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    const RowVector q = sample_row(n, d, derive_seed(spec.with_trial(k), 0));
    if (std::abs(inner_with_row(q, v) - mom.mu) >= t) ++hits;
  }
  const double w2 = v.squaredNorm();
  TailReport rep;
  rep.threshold = t;
  rep.trials = trials;
  rep.empirical_prob = static_cast<double>(hits) / static_cast<double>(trials);
  rep.standard_error = rate_standard_error(rep.empirical_prob, trials);
  rep.bound = w2 > 0.0 ? 2.0 * std::exp(-t * t / (8.0 * w2)) : (t > 0.0 ? 0.0 : 2.0);
  rep.violation = rep.empirical_prob > *rep.bound + 4.0 * rep.standard_error;
  return rep;
}

TailReport direction_rate(const VectorXd& v, int m, int d, double c, std::size_t trials,
                          std::uint64_t seed) {
  const int n = static_cast<int>(v.size());
  if (trials < 1) throw ParameterError("direction_rate: trials must be positive");
  if (2 * m < n || m > n) throw ParameterError("direction_rate: need n/2 <= m <= n");
  if (d < 1 || d > n) throw ParameterError("direction_rate: need 1 <= d <= n");
  const double p = static_cast<double>(d) / static_cast<double>(n);
  const double threshold = c * std::sqrt(p * n);
  const SeedSpec spec{seed, label_hash("direction-rate"), 0};
  std::size_t hits = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    const CombMatrix mat = sample_matrix(m, n, d, spec.with_trial(k));
    double sq = 0.0;
    for (const auto& row : mat.row_list()) {
      const double f = inner_with_row(row, v);
      sq += f * f;
    }
    if (std::sqrt(sq) <= threshold) ++hits;
  }
  TailReport rep;
  rep.threshold = threshold;
  rep.trials = trials;
  rep.empirical_prob = static_cast<double>(hits) / static_cast<double>(trials);
  rep.standard_error = rate_standard_error(rep.empirical_prob, trials);
  return rep;
}

SmallBallComparison small_ball_comparison(const VectorXd& v, int d, double eps, double gamma,
                                          double delta, double rho, double mu_const,
                                          std::size_t trials, std::uint64_t seed) {
  const int n = static_cast<int>(v.size());
  if (trials < 1) throw ParameterError("small_ball_comparison: trials must be positive");
  SmallBallComparison out;
  out.rhs = small_ball_rhs(eps, gamma, delta, rho, d, mu_const);
  const SeedSpec spec{seed, label_hash("small-ball"), 0};
  std::vector<double> samples;
  samples.reserve(trials);
  for (std::size_t k = 0; k < trials; ++k)
    samples.push_back(inner_with_row(sample_row(n, d, derive_seed(spec.with_trial(k), 0)), v));
  out.levy = levy_estimate(std::move(samples), eps * std::sqrt(static_cast<double>(d) / n));
  out.standard_error = rate_standard_error(out.levy.value, trials);
  out.violation = out.levy.value > out.rhs.clamped + 4.0 * out.standard_error;
  return out;
}

DiscreteDistribution DiscreteDistribution::uniform(std::vector<double> values) {
  DiscreteDistribution d;
  d.probs.assign(values.size(), 1.0 / static_cast<double>(values.size()));
  d.values = std::move(values);
  return d;
}

MarkovCheck markov_avg_check(const std::vector<DiscreteDistribution>& dists, double eps,
                             std::size_t mc_trials, std::uint64_t seed) {
  if (dists.empty()) throw ParameterError("markov_avg_check: need at least one variable");
  if (!(eps >= 0.0)) throw ParameterError("markov_avg_check: eps must be nonnegative");
  std::uint64_t joint = 1;
  for (const auto& z : dists) {
    if (z.values.empty() || z.values.size() != z.probs.size())
      throw ParameterError("markov_avg_check: malformed distribution");
    double total = 0.0;
    for (std::size_t i = 0; i < z.values.size(); ++i) {
      if (z.values[i] < 0.0) throw ParameterError("markov_avg_check: negative support value");
      if (z.probs[i] < 0.0) throw ParameterError("markov_avg_check: negative probability");
      total += z.probs[i];
    }
    if (std::abs(total - 1.0) > 1e-9) throw ParameterError("markov_avg_check: probabilities must sum to 1");
    joint = std::min<std::uint64_t>(joint * z.values.size(), kJointSupportBudget + 1);
  }

  const auto n = dists.size();
  const double level = static_cast<double>(n) * eps;
  MarkovCheck out;
  for (const auto& z : dists) {
    double p = 0.0;
    for (std::size_t i = 0; i < z.values.size(); ++i)
      if (z.values[i] <= 2.0 * eps) p += z.probs[i];
    out.rhs += p;
  }
  out.rhs *= 2.0 / static_cast<double>(n);

  if (joint <= kJointSupportBudget) {
    std::vector<std::size_t> digit(n, 0);
    long double lhs = 0.0L;
    while (true) {
      double sum = 0.0;
      long double prob = 1.0L;
      for (std::size_t k = 0; k < n; ++k) {
        sum += dists[k].values[digit[k]];
        prob *= dists[k].probs[digit[k]];
      }
      if (sum <= level) lhs += prob;
      std::size_t k = 0;
      while (k < n && ++digit[k] == dists[k].values.size()) digit[k++] = 0;
      if (k == n) break;
    }
    out.lhs = static_cast<double>(lhs);
    out.exact = true;
    out.trials = static_cast<std::size_t>(joint);
    out.violation = out.lhs > out.rhs + 1e-12;
    return out;
  }

  if (mc_trials < 1) throw ParameterError("markov_avg_check: mc_trials must be positive");
  Rng rng(mix64(seed ^ label_hash("markov-check")));
  std::size_t hits = 0;
  for (std::size_t t = 0; t < mc_trials; ++t) {
    double sum = 0.0;
    for (const auto& z : dists) {
      double u = rng.uniform01();
      std::size_t i = 0;
      while (i + 1 < z.values.size() && u >= z.probs[i]) u -= z.probs[i++];
      sum += z.values[i];
    }
    if (sum <= level) ++hits;
  }
  out.exact = false;
  out.trials = mc_trials;
  out.lhs = static_cast<double>(hits) / static_cast<double>(mc_trials);
  out.standard_error = rate_standard_error(out.lhs, mc_trials);
  out.violation = out.lhs > out.rhs + 4.0 * out.standard_error;
  return out;
}

}  // namespace combilab
