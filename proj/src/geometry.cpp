#include "combilab/geometry.hpp"

#include "combilab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace combilab {

void AlmostConstParams::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0,1)");
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("rho must lie in (0,1)");
}

ClcdParams ClcdParams::defaults(int n, const AlmostConstParams& ac) {
  ClcdParams p;
  p.gamma = ac.delta * ac.rho / 24.0;
  p.alpha = 0.1 * n;
  p.theta_max = 4.0 * std::sqrt(static_cast<double>(n));
  p.grid_step = 1e-3 * p.theta_max;
  return p;
}

void ClcdParams::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in (0,1)");
  if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
  if (!(theta_max > 0.0)) throw ParameterError("theta_max must be positive");
  if (!(grid_step > 0.0)) throw ParameterError("grid_step must be positive");
}

AlmostConstantVerdict is_almost_constant(const VectorXd& v, const AlmostConstParams& params) {
  params.validate();
  const auto n = static_cast<std::size_t>(v.size());
  if (n == 0) throw ParameterError("is_almost_constant: empty vector");
  if (std::abs(v.norm() - 1.0) > 1e-10) throw ParameterError("is_almost_constant: vector is not unit");

  std::vector<double> s(v.data(), v.data() + n);
  std::sort(s.begin(), s.end());
  const double width = 2.0 * params.rho / std::sqrt(static_cast<double>(n));
  const double slack = 4.0 * std::numeric_limits<double>::epsilon();
  const double needed = (1.0 - params.delta) * static_cast<double>(n);

  std::size_t best = 0;
  std::size_t best_i = 0;
  std::size_t best_j = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    j = std::max(j, i);
    while (j + 1 < n && s[j + 1] - s[i] <= width + slack) ++j;
    if (j - i + 1 > best) {
      best = j - i + 1;
      best_i = i;
      best_j = j;
    }
  }
  AlmostConstantVerdict out;
  if (static_cast<double>(best) >= needed - 1e-9) {
    out.almost_constant = true;
    out.level = 0.5 * (s[best_i] + s[best_j]);
  }
  return out;
}

ClcdEstimate clcd_estimate(const VectorXd& v, const ClcdParams& params) {
  params.validate();
  ClcdEstimate est;
  est.resolution = params.grid_step;
  const VectorXd diff = difference_vector(v);
  const double norm = diff.norm();
  if (norm == 0.0) {
    est.lower = ExtReal::infinity();
    est.upper = ExtReal::infinity();
    return est;
  }
  const double sup_norm = diff.cwiseAbs().maxCoeff();
  auto rhs = [&](double theta) { return std::min(params.gamma * theta * norm, params.alpha); };

  // (0, safe] is excluded analytically.
  const double safe = std::min(0.5 / sup_norm, params.theta_max);
  double certified = safe;
  bool chain_intact = true;
  double prev_theta = safe;
  double prev_dist = lattice_distance(safe * diff);

  const auto steps = static_cast<long long>(std::floor(params.theta_max / params.grid_step + 1e-9));
  for (long long j = 1; j <= steps; ++j) {
    const double theta = static_cast<double>(j) * params.grid_step;
    if (theta <= safe) continue;
    const double dist = lattice_distance(theta * diff);
    const double bound = rhs(theta);
    if (dist < bound) {
      est.upper = ExtReal(theta);
      est.witness_theta = theta;
      break;
    }
    if (chain_intact) {
      const double tent = 0.5 * (prev_dist + dist - (theta - prev_theta) * norm);
      if (tent >= bound) {
        certified = theta;
      } else {
        chain_intact = false;
      }
    }
    prev_theta = theta;
    prev_dist = dist;
  }
  if (!est.witness_theta) est.upper = ExtReal::infinity();
  est.lower = ExtReal(certified);
  return est;
}

VectorXd random_unit_vector(int n, Rng& rng) {
  if (n < 1) throw ParameterError("random_unit_vector: n must be positive");
  VectorXd v(n);
  do {
    for (int i = 0; i < n; ++i) v(i) = rng.normal();
  } while (v.norm() == 0.0);
  return v / v.norm();
}

VectorXd sample_almost_constant(int n, const AlmostConstParams& params, std::uint64_t seed) {
  params.validate();
  if (n < 2) throw ParameterError("sample_almost_constant: need n >= 2");
  Rng rng(seed);
  const double root_n = std::sqrt(static_cast<double>(n));
  const auto max_outliers = static_cast<std::uint64_t>(std::floor(params.delta * n));
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double sign = rng.below(2) == 0 ? 1.0 : -1.0;
    const double level = sign * rng.uniform(0.5, 1.0) / root_n;
    VectorXd w(n);
    for (int i = 0; i < n; ++i) w(i) = level + rng.uniform(-0.5, 0.5) * params.rho / root_n;
    const auto outliers = static_cast<int>(rng.below(max_outliers + 1));
    if (outliers > 0) {
      const RowVector positions = sample_row(n, outliers, rng);
      for (int i : positions.support()) w(i) = 3.0 * rng.normal() / root_n;
    }
    const double norm = w.norm();
    if (norm == 0.0) continue;
    VectorXd v = w / norm;
    if (is_almost_constant(v, params).almost_constant) return v;
  }
  return VectorXd::Constant(n, 1.0 / root_n);
}

}  // namespace combilab
