#include "combilab/error.hpp"
#include "combilab/moments.hpp"
#include "combilab/sampler.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace combilab;
using testsupport::Rational;

namespace {

struct ExactMoment {
  Rational total;           // E dist^2 over all matrices
  Rational full_rank_mean;  // E dist^2 given rank span{X_2..X_n} = n-1
  Rational degenerate_mass;
};

// Rational Gram-Schmidt over every matrix of the model.
ExactMoment exact_moment(int n, int d) {
  const auto rows = enumerate_rows(n, d);
  std::vector<testsupport::RVec> r;
  for (const auto& q : rows) r.push_back(testsupport::to_rvec(q));
  const long long c = static_cast<long long>(rows.size());
  long long tuples = 1;
  for (int i = 1; i < n; ++i) tuples *= c;

  Rational sum, full_sum;
  long long full = 0;
  for (long long t = 0; t < tuples; ++t) {
    std::vector<testsupport::RVec> w;
    long long rest = t;
    for (int i = 1; i < n; ++i) {
      w.push_back(r[static_cast<std::size_t>(rest % c)]);
      rest /= c;
    }
    Rational inner;
    int rank = 0;
    for (const auto& x1 : r) inner = inner + testsupport::exact_dist2(x1, w, &rank);
    sum = sum + inner;
    if (rank == n - 1) {
      full_sum = full_sum + inner;
      ++full;
    }
  }
  const long long all = tuples * c;
  ExactMoment out;
  out.total = sum / Rational(all);
  out.full_rank_mean = full > 0 ? full_sum / Rational(full * c) : Rational(0);
  out.degenerate_mass = Rational(all - full * c) / Rational(all);
  return out;
}

}  // namespace

TEST(SecondMoment, Examples) {
  EXPECT_DOUBLE_EQ(x_second_moment(2, 1).value, 0.5);
  EXPECT_DOUBLE_EQ(x_second_moment(3, 2).value, 7.0 / 12.0);
  for (int n : {2, 5, 17, 300}) EXPECT_EQ(x_second_moment(n, n).value, 0.0);
  EXPECT_THROW(x_second_moment(1, 1), ParameterError);
  EXPECT_THROW(x_second_moment(4, 0), ParameterError);
  EXPECT_THROW(x_second_moment(4, 5), ParameterError);
}

TEST(SecondMoment, BetweenZeroAndCapUpToOneThousand) {
  for (int n = 2; n <= 1000; ++n)
    for (int d = 1; d <= n; ++d) {
      const SecondMoment m = x_second_moment(n, d);
      ASSERT_GE(m.value, 0.0);
      ASSERT_LE(m.value, m.cap);
      ASSERT_DOUBLE_EQ(m.cap, 3.0 * d / n);
    }
}

TEST(SecondMomentOracle, TwoByTwoIsOneHalf) {
  const MomentReport r = x_second_moment_oracle(2, 1);
  EXPECT_TRUE(r.exact);
  EXPECT_FALSE(r.capacity_fallback);
  EXPECT_EQ(r.samples, 4u);
  EXPECT_EQ(*r.oracle_value, 0.5);
  EXPECT_EQ(*r.abs_diff, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(SecondMomentOracle, AllOnesIsZero) {
  const MomentReport r = x_second_moment_oracle(3, 3);
  EXPECT_NEAR(*r.oracle_value, 0.0, 1e-15);
  EXPECT_EQ(r.degenerate_mass, 1.0);
  EXPECT_FALSE(r.conditional_mean.has_value());
  EXPECT_TRUE(r.pass);
}

TEST(SecondMomentOracle, MatchesRationalEnumeration) {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}, {3, 3}, {4, 1}, {4, 2}, {4, 3}}) {
    const ExactMoment e = exact_moment(n, d);
    const MomentReport r = x_second_moment_oracle(n, d);
    ASSERT_TRUE(r.exact);
    EXPECT_NEAR(*r.oracle_value, e.total.to_double(), 1e-12) << n << "," << d;
    EXPECT_NEAR(r.degenerate_mass, e.degenerate_mass.to_double(), 1e-15) << n << "," << d;
    if (r.conditional_mean) EXPECT_NEAR(*r.conditional_mean, e.full_rank_mean.to_double(), 1e-12) << n << "," << d;
    EXPECT_NEAR(*r.abs_diff, std::abs(r.formula_value - e.total.to_double()), 1e-12);
  }
}

TEST(SecondMomentOracle, KnownRationalValues) {
  // Unconditional means include rank-deficient spans of X_2..X_n.
  EXPECT_TRUE(exact_moment(2, 1).total == Rational(1, 2));
  EXPECT_TRUE(exact_moment(3, 1).total == Rational(4, 9));
  EXPECT_TRUE(exact_moment(3, 2).total == Rational(17, 27));
  EXPECT_TRUE(exact_moment(4, 2).total == Rational(11, 18));
  // On full-rank spans the mean equals the closed form for d = 1.
  EXPECT_TRUE(exact_moment(3, 1).full_rank_mean == Rational(1, 3));
  EXPECT_TRUE(exact_moment(4, 1).full_rank_mean == Rational(1, 4));
}

TEST(SecondMomentOracle, ClosedFormBoundsFullRankMean) {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {4, 1}, {4, 2}, {4, 3}}) {
    const MomentReport r = x_second_moment_oracle(n, d);
    ASSERT_TRUE(r.conditional_mean.has_value());
    EXPECT_LE(*r.conditional_mean, r.formula_value + 1e-12) << n << "," << d;
    EXPECT_GT(r.degenerate_mass, 0.0);
  }
}

TEST(SecondMomentOracle, FallsBackToMonteCarlo) {
  const MomentReport r = x_second_moment_oracle(12, 6, 2000, 3);
  EXPECT_FALSE(r.exact);
  EXPECT_TRUE(r.capacity_fallback);
  EXPECT_EQ(r.samples, 2000u);
  EXPECT_GT(r.standard_error, 0.0);
}

TEST(SecondMomentMc, DeterministicAndConsistent) {
  const MomentReport a = x_second_moment_mc(40, 20, 3000, 9);
  const MomentReport b = x_second_moment_mc(40, 20, 3000, 9);
  EXPECT_EQ(*a.oracle_value, *b.oracle_value);
  EXPECT_EQ(a.pass, *a.abs_diff <= 4 * a.standard_error);
  EXPECT_LE(*a.oracle_value, a.cap);
}

TEST(ResidualSquare, MatchesGramSchmidt) {
  for (std::uint64_t t = 0; t < 200; ++t) {
    const int n = 2 + static_cast<int>(t % 5);
    const int d = 1 + static_cast<int>((t / 5) % static_cast<std::uint64_t>(n));
    const CombMatrix m = sample_matrix(n, n, d, SeedSpec{1, 2, t});
    std::vector<testsupport::RVec> w;
    for (int i = 1; i < n; ++i) w.push_back(testsupport::to_rvec(m.row(i)));
    int rank = 0;
    const double exact = testsupport::exact_dist2(testsupport::to_rvec(m.row(0)), w, &rank).to_double();
    const ResidualSquare r = first_row_residual_square(m.dense());
    ASSERT_NEAR(r.value, exact, 1e-12);
    ASSERT_EQ(r.full_rank, rank == n - 1);
  }
}

TEST(ColumnSumVariance, ThreeOneByEnumeration) {
  EXPECT_NEAR(column_sum_variance(3, 1), 4.0 / 9.0, 1e-15);
  // Rows 2 and 3 each pick one of three columns; count hits of column 0.
  double s = 0, s2 = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const double c = (a == 0) + (b == 0);
      s += c;
      s2 += c * c;
    }
  EXPECT_NEAR(s2 / 9 - (s / 9) * (s / 9), column_sum_variance(3, 1), 1e-15);
  EXPECT_EQ(column_sum_variance(7, 7), 0.0);
}

TEST(ColumnSumVariance, MonteCarloFiftyTwentyFive) {
  const VarianceEstimate e = column_sum_variance_mc(50, 25, 100000, 4);
  EXPECT_NEAR(e.mean, 49 * 0.5, 4 * std::sqrt(column_sum_variance(50, 25) / 100000));
  EXPECT_NEAR(e.variance, column_sum_variance(50, 25), 4 * e.standard_error);
}

TEST(NormTail, ChebyshevAtHundredFifty) {
  for (double u : {1.0, 2.0}) {
    const TailReport r = x_norm_tail_check(100, 50, u, 2000, 6);
    EXPECT_NEAR(*r.bound, 1.5 / (u * u), 1e-15);
    EXPECT_FALSE(r.violation) << "u=" << u << " p=" << r.empirical_prob;
  }
}
