#pragma once

#include "combilab/error.hpp"
#include "combilab/seed.hpp"
#include "combilab/types.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace combilab {

/// Parameters of the almost-constant set Cons_{delta,rho}.
struct AlmostConstParams {
  double delta = 0.05;
  double rho = 0.05;

  void validate() const;

  friend bool operator==(const AlmostConstParams&, const AlmostConstParams&) = default;
};

/// Parameters of CLCD_{alpha,gamma} and of its grid search.
struct ClcdParams {
  double gamma = 0.0;
  double alpha = 0.0;
  double theta_max = 0.0;
  double grid_step = 0.0;

  /// gamma = delta*rho/24, alpha = 0.1 n, theta_max = 4 sqrt(n), step = theta_max / 1000.
  static ClcdParams defaults(int n, const AlmostConstParams& ac = {});
  void validate() const;
};

/// Certified interval [lower, upper] containing CLCD_{alpha,gamma}(v).
struct ClcdEstimate {
  ExtReal lower;
  ExtReal upper;
  /// Grid point satisfying the defining strict inequality; equals upper when present.
  std::optional<double> witness_theta;
  double resolution = 0.0;
};

inline constexpr std::uint64_t kDifferenceBudget = 10'000'000;

/// D(v) = (v_i - v_j)_{i<j}, ordered lexicographically by (i, j).
template <typename Derived>
Vector<typename Derived::Scalar> difference_vector(const Eigen::MatrixBase<Derived>& v) {
  const Eigen::Index n = v.size();
  if (n < 2) throw ParameterError("difference_vector: need n >= 2");
  const auto k = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
  if (k > kDifferenceBudget)
    throw CapacityError("difference_vector: C(n,2) = " + std::to_string(k) + " exceeds budget");
  Vector<typename Derived::Scalar> out(static_cast<Eigen::Index>(k));
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) out(idx++) = v(i) - v(j);
  return out;
}

/// Euclidean distance from x to the integer lattice, coordinatewise.
template <typename Derived>
typename Derived::Scalar lattice_distance(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  Scalar acc = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar frac = x(i) - std::floor(x(i));
    const Scalar r = std::min(frac, Scalar(1) - frac);
    acc += r * r;
  }
  return std::sqrt(acc);
}

struct AlmostConstantVerdict {
  bool almost_constant = false;
  /// A level lambda witnessing membership.
  std::optional<double> level;
};

/// Decides v in Cons_{delta,rho}: some lambda has |v_i - lambda| <= rho/sqrt(n) for
/// at least (1-delta) n indices. Sorted sliding window of width 2 rho/sqrt(n);
/// lambda is the midpoint of the extreme covered values.
/// Throws ParameterError unless | ||v|| - 1 | <= 1e-10.
AlmostConstantVerdict is_almost_constant(const VectorXd& v, const AlmostConstParams& params = {});

/// Grid scan of theta over (0, theta_max] at spacing grid_step. The lower end is
/// certified: (0, 1/(2 max|D_i|)] cannot satisfy the condition since there
/// dist(theta D, Z^k) = theta ||D||, and each further grid interval [a, b] is
/// excluded when (dist(aD) + dist(bD) - (b-a)||D||)/2 >= min(gamma b ||D||, alpha).
ClcdEstimate clcd_estimate(const VectorXd& v, const ClcdParams& params);

/// Unit vector in Cons_{delta,rho}; verified with is_almost_constant before returning.
VectorXd sample_almost_constant(int n, const AlmostConstParams& params, std::uint64_t seed);

/// Uniform point on the unit sphere.
VectorXd random_unit_vector(int n, Rng& rng);

}  // namespace combilab
