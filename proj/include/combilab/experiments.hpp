#pragma once

#include "combilab/error.hpp"
#include "combilab/geometry.hpp"
#include "combilab/types.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace combilab {

/// How d is derived from n at a grid point.
struct DRule {
  enum class Kind { Fixed, Proportional, Power, Log };

  Kind kind = Kind::Fixed;
  /// k for Fixed, p for Proportional, a for Power, c for Log.
  double param = 1.0;

  static DRule fixed(int k) { return {Kind::Fixed, static_cast<double>(k)}; }
  static DRule proportional(double p) { return {Kind::Proportional, p}; }
  static DRule power(double a) { return {Kind::Power, a}; }
  static DRule log(double c) { return {Kind::Log, c}; }

  /// k, floor(p n), floor(n^a) or c floor(ln n). Floors absorb 1e-9 of rounding
  /// so that 1000^(1/3) gives 10. No range check.
  int apply(int n) const;

  friend bool operator==(const DRule&, const DRule&) = default;
};

struct GridEntry {
  int n = 0;
  DRule rule;
  /// Row count for rectangular studies; square when absent.
  std::optional<int> m;

  friend bool operator==(const GridEntry&, const GridEntry&) = default;
};

struct GridPoint {
  int m = 0;
  int n = 0;
  int d = 0;
};

inline constexpr int kConfigVersion = 1;

struct ExperimentConfig {
  int version = kConfigVersion;
  std::vector<GridEntry> grid;
  /// True when grid was filled from default_grid() rather than given.
  bool default_grid_used = false;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  std::vector<double> epsilons{0.25, 0.5, 1.0, 2.0};
  /// c in the direction rate threshold c sqrt(pn).
  double direction_c = 0.5;
  /// Exceedance levels t for ||M - EM|| >= t sqrt(pn).
  std::vector<double> opnorm_t{1.5, 2.0, 2.5, 3.0};
  AlmostConstParams cons;
  int cons_vectors = 4;
  /// Enumerate every matrix of each grid point instead of sampling.
  bool exact = false;
  /// Square matrices with n above this use the LU route for s_n.
  int fast_threshold = 512;
  std::string out_dir = ".";

  /// d = floor(n^{1/3}) and d = 5 floor(ln n) over n in {128, 256, 512, 1024}.
  static std::vector<GridEntry> default_grid();

  /// Throws ConfigError naming the offending field.
  void validate() const;
  /// Validated (m, n, d) per grid entry, in grid order.
  std::vector<GridPoint> points() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct StatSummary {
  std::string name;
  ExtReal mean;
  ExtReal median;
  ExtReal std_error;
  bool is_rate = false;
};

struct PointResult {
  int m = 0;
  int n = 0;
  int d = 0;
  /// Draws aggregated (the enumeration size in exact mode).
  std::size_t trials = 0;
  bool exact = false;
  /// Sorted by name.
  std::vector<StatSummary> stats;
  std::map<std::string, double> extras;

  const StatSummary& stat(const std::string& name) const;
  const StatSummary* find_stat(const std::string& name) const;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// What the log-log figure of a study shows.
struct PlotSpec {
  std::string stat;
  std::string x_label;
  std::string y_label;
  std::string reference_label;
  /// Plot medians instead of means (whiskers stay at the standard error).
  bool use_median = false;
  /// Abscissa per grid point (same order as points).
  std::vector<double> x;
  /// Reference curve value per grid point, drawn with slope 1 in log-log.
  std::vector<double> reference;
};

struct StudyResult {
  std::string study;
  std::vector<PointResult> points;
  std::string config_hash;
  std::uint64_t master_seed = 0;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> metadata;
  std::optional<FitResult> fit;
  std::optional<std::string> fit_error;
  std::optional<PlotSpec> plot;
};

/// Ordinary least squares of log y on log x. Throws ParameterError on a
/// nonpositive coordinate and FitError with fewer than 2 distinct abscissae.
FitResult fit_loglog(const std::vector<std::pair<double, double>>& points);

/// Mean, median and standard error. Rates take stderr sqrt(p(1-p)/N); other
/// statistics take sample std / sqrt(N).
StatSummary summarize(std::string name, const std::vector<double>& values, bool is_rate);
StatSummary summarize(std::string name, const std::vector<ExtReal>& values);

/// Test hooks replacing sampled values by a deterministic function of (n, d).
struct StudyHooks {
  std::function<double(int n, int d)> inject_sn;
  std::function<double(int n, int d)> inject_kappa;
};

/// Mean s_n per point; fit of log mean(s_n) against log(sqrt(d)/n).
StudyResult run_scaling_study(const ExperimentConfig& cfg, const StudyHooks& hooks = {});
/// P(s_n <= sqrt(d)/(eps^2 n)) and P(s_n <= eps/sqrt(n)) per configured eps.
StudyResult run_tail_study(const ExperimentConfig& cfg);
/// Median kappa over invertible draws; fit of log median(kappa) against log n.
StudyResult run_condition_study(const ExperimentConfig& cfg, const StudyHooks& hooks = {});
/// ||M - EM|| / sqrt(pn) summary, quantiles, exceedance rates and the
/// zero-sum hyperplane identity residual. Rectangular points allowed.
StudyResult run_opnorm_study(const ExperimentConfig& cfg);
/// Exact singularity and zero-column rates. Points whose enumeration has at
/// most `trials` matrices are enumerated even without cfg.exact.
StudyResult run_singularity_study(const ExperimentConfig& cfg);
/// Minimum of ||M v|| / sqrt(pn) over almost-constant unit vectors v.
StudyResult run_cons_invertibility_study(const ExperimentConfig& cfg);

/// Runs a study by CLI name ("scaling", "tail", "condition", "opnorm",
/// "singularity", "cons"). Throws ParameterError on an unknown name.
StudyResult run_study(const std::string& name, const ExperimentConfig& cfg);

}  // namespace combilab
