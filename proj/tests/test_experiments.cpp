#include "combilab/error.hpp"
#include "combilab/exact_rank.hpp"
#include "combilab/experiments.hpp"
#include "combilab/report.hpp"
#include "combilab/sampler.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace combilab;

namespace {

ExperimentConfig grid_of(std::vector<std::pair<int, DRule>> entries, std::size_t trials = 50, std::uint64_t seed = 1) {
  ExperimentConfig cfg;
  for (auto& [n, rule] : entries) cfg.grid.push_back({n, rule, std::nullopt});
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

ExperimentConfig exact_point(int n, int d) {
  ExperimentConfig cfg = grid_of({{n, DRule::fixed(d)}});
  cfg.exact = true;
  return cfg;
}

double mean_of(const PointResult& p, const std::string& stat) { return p.stat(stat).mean.value(); }

}  // namespace

TEST(DRuleApply, Values) {
  EXPECT_EQ(DRule::fixed(5).apply(100), 5);
  EXPECT_EQ(DRule::proportional(0.5).apply(128), 64);
  EXPECT_EQ(DRule::proportional(0.5).apply(129), 64);
  EXPECT_EQ(DRule::power(1.0 / 3.0).apply(1000), 10);
  EXPECT_EQ(DRule::power(1.0 / 3.0).apply(128), 5);
  EXPECT_EQ(DRule::power(1.0 / 3.0).apply(1024), 10);
  EXPECT_EQ(DRule::log(5).apply(128), 20);
  EXPECT_EQ(DRule::log(5).apply(1024), 30);
  EXPECT_EQ(DRule::log(5).apply(2), 0);
}

TEST(Config, ValidationNamesField) {
  ExperimentConfig cfg = grid_of({{2, DRule::log(5)}});
  try {
    cfg.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("grid[0].d_rule"), std::string::npos) << e.what();
  }
  cfg = grid_of({{8, DRule::fixed(2)}}, 0);
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = grid_of({});
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Config, DefaultGrid) {
  const auto g = ExperimentConfig::default_grid();
  ASSERT_EQ(g.size(), 8u);
  ExperimentConfig cfg;
  cfg.grid = g;
  const auto pts = cfg.points();
  EXPECT_EQ(pts[0].d, 5);
  EXPECT_EQ(pts[3].d, 10);
  EXPECT_EQ(pts[4].d, 20);
  EXPECT_EQ(pts[7].d, 30);
}

TEST(FitLogLog, ExactPowerLaw) {
  std::vector<std::pair<double, double>> pts;
  for (double x : {1.0, 2.0, 5.0, 10.0, 40.0}) pts.emplace_back(x, std::pow(x, 1.5));
  const FitResult f = fit_loglog(pts);
  EXPECT_NEAR(f.slope, 1.5, 1e-12);
  EXPECT_NEAR(f.intercept, 0.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(FitLogLog, TwoPointsInterpolate) {
  const FitResult f = fit_loglog({{2.0, 3.0}, {8.0, 5.0}});
  EXPECT_NEAR(f.slope, std::log(5.0 / 3.0) / std::log(4.0), 1e-12);
  EXPECT_EQ(f.r_squared, 1.0);
}

TEST(FitLogLog, NoisyQuadratic) {
  Rng rng(10);
  std::vector<std::pair<double, double>> pts;
  for (int i = 1; i <= 20; ++i) {
    const double x = i;
    pts.emplace_back(x, 3.0 * x * x * (1.0 + 0.01 * rng.normal()));
  }
  const FitResult f = fit_loglog(pts);
  EXPECT_NEAR(f.slope, 2.0, 0.05);
  EXPECT_GE(f.r_squared, 0.0);
  EXPECT_LE(f.r_squared, 1.0);
}

TEST(FitLogLog, Errors) {
  EXPECT_THROW(fit_loglog({{1.0, 1.0}}), FitError);
  EXPECT_THROW(fit_loglog({{1.0, 1.0}, {1.0, 2.0}}), FitError);
  EXPECT_THROW(fit_loglog({{1.0, 0.0}, {2.0, 1.0}}), ParameterError);
  EXPECT_THROW(fit_loglog({{-1.0, 1.0}, {2.0, 1.0}}), ParameterError);
}

TEST(Summarize, RateAndSampleStandardErrors) {
  const StatSummary r = summarize("rate", {1, 0, 0, 1, 1}, true);
  EXPECT_DOUBLE_EQ(r.mean.value(), 0.6);
  EXPECT_DOUBLE_EQ(r.median.value(), 1.0);
  EXPECT_DOUBLE_EQ(r.std_error.value(), std::sqrt(0.6 * 0.4 / 5));
  const StatSummary s = summarize("x", {1, 2, 3, 4}, false);
  EXPECT_DOUBLE_EQ(s.mean.value(), 2.5);
  EXPECT_DOUBLE_EQ(s.median.value(), 2.5);
  EXPECT_DOUBLE_EQ(s.std_error.value(), std::sqrt(5.0 / 3.0 / 4.0));
  const StatSummary inf = summarize("k", std::vector<ExtReal>{ExtReal(1.0), ExtReal::infinity(), ExtReal::infinity()});
  EXPECT_TRUE(inf.mean.is_infinite());
  EXPECT_TRUE(inf.median.is_infinite());
}

TEST(ScalingStudy, InjectedExactLine) {
  ExperimentConfig cfg = grid_of({{128, DRule::power(1.0 / 3)}, {256, DRule::power(1.0 / 3)},
                                  {512, DRule::power(1.0 / 3)}, {1024, DRule::power(1.0 / 3)}});
  StudyHooks hooks;
  hooks.inject_sn = [](int n, int d) { return std::sqrt(static_cast<double>(d)) / n; };
  const StudyResult r = run_scaling_study(cfg, hooks);
  ASSERT_TRUE(r.fit.has_value());
  EXPECT_NEAR(r.fit->slope, 1.0, 1e-12);
  EXPECT_NEAR(r.fit->r_squared, 1.0, 1e-12);
}

TEST(ScalingStudy, SinglePointFitError) {
  ExperimentConfig cfg = grid_of({{10, DRule::fixed(5)}}, 20);
  const StudyResult r = run_scaling_study(cfg);
  EXPECT_FALSE(r.fit.has_value());
  ASSERT_TRUE(r.fit_error.has_value());
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_EQ(r.points[0].trials, 20u);
  EXPECT_NE(r.points[0].find_stat("sn"), nullptr);
}

TEST(ScalingStudy, ExactTwoByTwo) {
  const StudyResult r = run_scaling_study(exact_point(2, 1));
  const PointResult& p = r.points[0];
  EXPECT_TRUE(p.exact);
  EXPECT_EQ(p.trials, 4u);
  EXPECT_DOUBLE_EQ(mean_of(p, "sn"), 0.5);
  EXPECT_DOUBLE_EQ(mean_of(p, "singular_rate"), 0.5);
  EXPECT_DOUBLE_EQ(p.stat("singular_rate").std_error.value(), std::sqrt(0.25 / 4));
}

TEST(ScalingStudy, PiggybackCertificatesHold) {
  ExperimentConfig cfg = grid_of({{20, DRule::fixed(10)}, {30, DRule::fixed(6)}}, 300);
  const StudyResult r = run_scaling_study(cfg);
  for (const auto& p : r.points) {
    EXPECT_GE(p.extras.at("certificate_checks"), 2.0);
    EXPECT_EQ(p.extras.at("certificate_violations"), 0.0);
  }
  EXPECT_TRUE(r.warnings.empty());
}

TEST(ScalingStudy, FastRouteMatchesSvdRoute) {
  ExperimentConfig svd = grid_of({{40, DRule::fixed(20)}, {48, DRule::fixed(4)}}, 100, 3);
  ExperimentConfig lu = svd;
  lu.fast_threshold = 16;
  const StudyResult a = run_scaling_study(svd);
  const StudyResult b = run_scaling_study(lu);
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    EXPECT_EQ(a.points[k].extras.at("svd_crosschecks"), 0.0);
    EXPECT_EQ(b.points[k].extras.at("svd_crosschecks"), 2.0);
    EXPECT_EQ(b.points[k].extras.at("svd_crosscheck_failures"), 0.0);
    const double sa = mean_of(a.points[k], "sn");
    EXPECT_NEAR(mean_of(b.points[k], "sn"), sa, 1e-6 * sa);
    EXPECT_EQ(mean_of(b.points[k], "singular_rate"), mean_of(a.points[k], "singular_rate"));
  }
}

TEST(ScalingStudy, RequiresSquare) {
  ExperimentConfig cfg = grid_of({{10, DRule::fixed(5)}});
  cfg.grid[0].m = 8;
  EXPECT_THROW(run_scaling_study(cfg), ParameterError);
}

TEST(TailStudy, ExactTwoByTwo) {
  ExperimentConfig cfg = exact_point(2, 1);
  cfg.epsilons = {1.0};
  const StudyResult r = run_tail_study(cfg);
  const PointResult& p = r.points[0];
  EXPECT_DOUBLE_EQ(p.extras.at("tau_upper_eps_1"), 0.5);
  EXPECT_DOUBLE_EQ(mean_of(p, "p_upper_eps_1"), 0.5);
}

TEST(TailStudy, TinyEpsilonGivesSingularRate) {
  ExperimentConfig cfg = grid_of({{6, DRule::fixed(2)}, {8, DRule::fixed(4)}}, 300);
  cfg.epsilons = {1e-12};
  const StudyResult r = run_tail_study(cfg);
  for (const auto& p : r.points) EXPECT_EQ(mean_of(p, "p_lower_eps_1e-12"), mean_of(p, "singular_rate"));
}

TEST(TailStudy, ProbabilitiesMonotoneInThreshold) {
  ExperimentConfig cfg = grid_of({{12, DRule::fixed(3)}, {16, DRule::fixed(8)}}, 200);
  cfg.epsilons = {0.1, 0.25, 0.5, 1.0, 2.0, 4.0};
  const StudyResult r = run_tail_study(cfg);
  for (const auto& p : r.points) {
    std::vector<std::pair<double, double>> curve;
    for (const auto& [key, tau] : p.extras) {
      if (key.rfind("tau_", 0) != 0) continue;
      const std::string stat = "p_" + key.substr(4);
      curve.emplace_back(tau, mean_of(p, stat));
    }
    ASSERT_EQ(curve.size(), 12u);
    std::sort(curve.begin(), curve.end());
    for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LE(curve[i - 1].second, curve[i].second);
  }
}

TEST(ConditionStudy, ExactThreeTwo) {
  const StudyResult r = run_condition_study(exact_point(3, 2));
  const PointResult& p = r.points[0];
  EXPECT_EQ(p.trials, 27u);
  EXPECT_NEAR(p.stat("kappa").median.value(), 2.0, 1e-12);
  EXPECT_NEAR(mean_of(p, "kappa"), 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(mean_of(p, "invertible_rate"), 6.0 / 27.0);
  EXPECT_EQ(p.extras.at("s1_below_d"), 0.0);
}

TEST(ConditionStudy, InjectedPowerLaw) {
  ExperimentConfig cfg = grid_of({{16, DRule::proportional(0.5)}, {32, DRule::proportional(0.5)},
                                  {64, DRule::proportional(0.5)}});
  StudyHooks hooks;
  hooks.inject_kappa = [](int n, int) { return std::pow(static_cast<double>(n), 1.5); };
  const StudyResult r = run_condition_study(cfg, hooks);
  ASSERT_TRUE(r.fit.has_value());
  EXPECT_NEAR(r.fit->slope, 1.5, 1e-12);
  EXPECT_NEAR(r.fit->r_squared, 1.0, 1e-12);
}

TEST(ConditionStudy, AllSingularPointIsExcluded) {
  ExperimentConfig cfg = grid_of({{4, DRule::fixed(4)}, {8, DRule::fixed(4)}, {12, DRule::fixed(6)}}, 30);
  const StudyResult r = run_condition_study(cfg);
  EXPECT_TRUE(r.points[0].stat("kappa").median.is_infinite());
  EXPECT_FALSE(r.warnings.empty());
  ASSERT_TRUE(r.fit.has_value());
  for (const auto& p : r.points) EXPECT_EQ(p.extras.at("s1_below_d"), 0.0);
}

TEST(OpnormStudy, ExactTwoByTwoAndFull) {
  const StudyResult a = run_opnorm_study(exact_point(2, 1));
  EXPECT_NEAR(mean_of(a.points[0], "opnorm_ratio"), 1.0, 1e-14);
  EXPECT_NEAR(a.points[0].extras.at("ratio_max"), 1.0, 1e-14);
  const StudyResult b = run_opnorm_study(grid_of({{7, DRule::fixed(7)}}, 10));
  EXPECT_NEAR(b.points[0].extras.at("ratio_max"), 0.0, 1e-14);
}

TEST(OpnormStudy, IdentityHoldsAndRectangularAllowed) {
  ExperimentConfig cfg = grid_of({{40, DRule::fixed(20)}, {60, DRule::fixed(30)}}, 60);
  cfg.grid[1].m = 35;
  const StudyResult r = run_opnorm_study(cfg);
  for (const auto& p : r.points) {
    EXPECT_EQ(p.extras.at("identity_violations"), 0.0);
    EXPECT_LT(p.extras.at("identity_residual_max"), 1e-8);
    EXPECT_LE(p.extras.at("ratio_q50"), p.extras.at("ratio_q90"));
    EXPECT_LE(p.extras.at("ratio_q99"), p.extras.at("ratio_max"));
  }
  EXPECT_EQ(r.points[1].m, 35);
}

TEST(SingularityStudy, ExactTinyRates) {
  ExperimentConfig cfg = grid_of({{2, DRule::fixed(1)}, {3, DRule::fixed(1)}, {3, DRule::fixed(2)}});
  cfg.exact = true;
  const StudyResult r = run_singularity_study(cfg);
  EXPECT_DOUBLE_EQ(mean_of(r.points[0], "singular_rate"), 0.5);
  EXPECT_DOUBLE_EQ(mean_of(r.points[0], "zero_column_rate"), 0.5);
  EXPECT_DOUBLE_EQ(mean_of(r.points[1], "singular_rate"), 7.0 / 9.0);
  EXPECT_DOUBLE_EQ(mean_of(r.points[2], "singular_rate"), 7.0 / 9.0);
}

TEST(SingularityStudy, EnumerationMatchesIntegerDeterminants) {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {4, 1}, {4, 2}, {4, 3}}) {
    std::size_t singular = 0, zero_col = 0, total = 0;
    for (const CombMatrix& m : enumerate_matrices(n, n, d)) {
      singular += testsupport::integer_det(m) == 0;
      const auto sums = m.column_sums();
      zero_col += std::find(sums.begin(), sums.end(), 0) != sums.end();
      ++total;
    }
    const StudyResult r = run_singularity_study(exact_point(n, d));
    EXPECT_DOUBLE_EQ(mean_of(r.points[0], "singular_rate"), static_cast<double>(singular) / total) << n << "," << d;
    EXPECT_DOUBLE_EQ(mean_of(r.points[0], "zero_column_rate"), static_cast<double>(zero_col) / total) << n << "," << d;
  }
}

TEST(SingularityStudy, AutoEnumeratesSmallPoints) {
  const StudyResult r = run_singularity_study(grid_of({{2, DRule::fixed(1)}, {10, DRule::fixed(3)}}, 200));
  EXPECT_TRUE(r.points[0].exact);
  EXPECT_EQ(r.points[0].trials, 4u);
  EXPECT_FALSE(r.points[1].exact);
  EXPECT_EQ(r.points[1].trials, 200u);
}

TEST(ConsStudy, EnvelopePositiveAndStable) {
  ExperimentConfig cfg = grid_of({{32, DRule::proportional(0.5)}, {64, DRule::proportional(0.5)},
                                  {128, DRule::proportional(0.5)}}, 250);
  const StudyResult r = run_cons_invertibility_study(cfg);
  EXPECT_EQ(r.points[1].extras.at("vector_matrix_pairs"), 1000.0);
  for (const auto& p : r.points) EXPECT_GT(p.extras.at("envelope"), 0.0);
  const double base = r.points[0].extras.at("envelope");
  for (const auto& p : r.points) EXPECT_GE(p.extras.at("envelope"), 0.5 * base);
}

TEST(ConsStudy, RowRange) {
  ExperimentConfig cfg = grid_of({{20, DRule::fixed(5)}});
  cfg.grid[0].m = 9;
  EXPECT_THROW(run_cons_invertibility_study(cfg), ParameterError);
}

TEST(Determinism, WorkerCountDoesNotChangeOutput) {
  ExperimentConfig cfg = grid_of({{24, DRule::fixed(12)}, {30, DRule::power(1.0 / 3)}}, 120, 77);
  cfg.fast_threshold = 26;
  for (const char* study : {"scaling", "tail", "condition", "opnorm", "singularity", "cons"}) {
    std::string csv1, json1, csv4, json4;
    {
      testsupport::ThreadsEnv env(1);
      const StudyResult r = run_study(study, cfg);
      csv1 = emit_csv(r);
      json1 = emit_json(r);
    }
    {
      testsupport::ThreadsEnv env(4);
      const StudyResult r = run_study(study, cfg);
      csv4 = emit_csv(r);
      json4 = emit_json(r);
    }
    EXPECT_EQ(csv1, csv4) << study;
    EXPECT_EQ(json1, json4) << study;
  }
}

TEST(Determinism, SeedChangesResults) {
  ExperimentConfig a = grid_of({{20, DRule::fixed(10)}}, 50, 1);
  ExperimentConfig b = a;
  b.seed = 2;
  EXPECT_NE(emit_csv(run_scaling_study(a)), emit_csv(run_scaling_study(b)));
  EXPECT_NE(run_scaling_study(a).config_hash, run_scaling_study(b).config_hash);
}

TEST(RunStudy, UnknownName) {
  EXPECT_THROW(run_study("bogus", grid_of({{4, DRule::fixed(2)}})), ParameterError);
}
