#include "combilab/experiments.hpp"

#include "combilab/config.hpp"
#include "combilab/exact_rank.hpp"
#include "combilab/linalg.hpp"
#include "combilab/parallel.hpp"
#include "combilab/sampler.hpp"
#include "combilab/seed.hpp"
#include "combilab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace combilab {

namespace {

constexpr std::size_t kCrossCheckPeriod = 50;   // 2% of trials
constexpr std::size_t kCertificatePeriod = 100;  // 1% of trials
constexpr double kCrossCheckTolerance = 1e-6;
constexpr double kCertificateSlack = 1e-8;

std::string tagged(const char* prefix, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%g", prefix, value);
  return buf;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

/// Linear interpolation between order statistics.
double quantile_of(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

SeedSpec point_seed(const ExperimentConfig& cfg, const char* study, std::size_t point_index) {
  return {cfg.seed, mix64(label_hash(study) ^ mix64(point_index + 1)), 0};
}

/// Applies fn to every draw of a grid point, either all C(n,d)^m matrices or
/// cfg.trials sampled ones. Records land in trial order.
template <typename Record, typename Fn>
std::vector<Record> collect(const ExperimentConfig& cfg, const GridPoint& pt, std::size_t point_index,
                            const char* study, bool exact, Fn fn) {
  std::vector<Record> out;
  if (exact) {
    const MatrixEnumeration all = enumerate_matrices(pt.m, pt.n, pt.d);
    out.resize(static_cast<std::size_t>(all.size()));
    parallel_for(out.size(), [&](std::size_t t) { out[t] = fn(all.at(t), t); });
  } else {
    const SeedSpec base = point_seed(cfg, study, point_index);
    out.resize(cfg.trials);
    parallel_for(out.size(), [&](std::size_t t) {
      out[t] = fn(sample_matrix(pt.m, pt.n, pt.d, base.with_trial(t)), t);
    });
  }
  return out;
}

struct SquareRecord {
  double s1 = 0.0;
  double sn = 0.0;
  bool singular = false;
  bool zero_column = false;
  bool cross_checked = false;
  bool cross_check_failed = false;
  bool certificate_checked = false;
  bool certificate_violated = false;
};

SquareRecord square_extremes(const CombMatrix& m, std::size_t t, const ExperimentConfig& cfg) {
  SquareRecord r;
  r.zero_column = m.has_zero_column();
  ExtremeSingularValues ev;
  if (m.cols() > cfg.fast_threshold) {
    ev = extreme_singular_values_lu(m);
    if (t % kCrossCheckPeriod == 0) {
      const ExtremeSingularValues ref = extreme_singular_values_svd(m);
      r.cross_checked = true;
      const bool agree =
          ref.exactly_singular == ev.exactly_singular &&
          (ev.exactly_singular || std::abs(ev.sn - ref.sn) <= kCrossCheckTolerance * ref.sn) &&
          std::abs(ev.s1 - ref.s1) <= kCrossCheckTolerance * ref.s1;
      if (!agree) {
        r.cross_check_failed = true;
        ev = ref;
      }
    }
  } else {
    ev = extreme_singular_values_svd(m);
  }
  r.s1 = ev.s1;
  r.sn = ev.exactly_singular ? 0.0 : ev.sn;
  r.singular = ev.exactly_singular;

  if (!r.singular && t % kCertificatePeriod == 0) {
    try {
      const auto cert = certificate_from_dense(m.dense());
      r.certificate_checked = true;
      r.certificate_violated = cert.bound < r.sn - kCertificateSlack * r.s1;
    } catch (const SingularityError&) {
      // Rows 2..n numerically dependent although M is invertible; no certificate.
    }
  }
  return r;
}

template <typename Record, typename Get>
std::vector<double> column(const std::vector<Record>& recs, Get get) {
  std::vector<double> v;
  v.reserve(recs.size());
  for (const auto& r : recs) v.push_back(static_cast<double>(get(r)));
  return v;
}

void add_square_bookkeeping(PointResult& pr, const std::vector<SquareRecord>& recs) {
  std::size_t cc = 0, ccf = 0, cert = 0, certv = 0;
  for (const auto& r : recs) {
    cc += r.cross_checked;
    ccf += r.cross_check_failed;
    cert += r.certificate_checked;
    certv += r.certificate_violated;
  }
  pr.extras["svd_crosschecks"] = static_cast<double>(cc);
  pr.extras["svd_crosscheck_failures"] = static_cast<double>(ccf);
  pr.extras["certificate_checks"] = static_cast<double>(cert);
  pr.extras["certificate_violations"] = static_cast<double>(certv);
}

void note_square_warnings(StudyResult& res, const PointResult& pr) {
  char buf[160];
  if (pr.extras.at("svd_crosscheck_failures") > 0) {
    std::snprintf(buf, sizeof buf, "n=%d d=%d: %g LU/SVD cross-check disagreements; SVD values used",
                  pr.n, pr.d, pr.extras.at("svd_crosscheck_failures"));
    res.warnings.emplace_back(buf);
  }
  if (pr.extras.at("certificate_violations") > 0) {
    std::snprintf(buf, sizeof buf, "n=%d d=%d: %g certificate bounds below s_n", pr.n, pr.d,
                  pr.extras.at("certificate_violations"));
    res.warnings.emplace_back(buf);
  }
}

void sort_stats(PointResult& pr) {
  std::sort(pr.stats.begin(), pr.stats.end(),
            [](const StatSummary& a, const StatSummary& b) { return a.name < b.name; });
}

StudyResult start_result(const char* study, const ExperimentConfig& cfg) {
  cfg.validate();
  StudyResult res;
  res.study = study;
  res.config_hash = config_hash(cfg);
  res.master_seed = cfg.seed;
  if (cfg.default_grid_used)
    res.metadata["grid_source"] =
        "default grid: d = floor(n^(1/3)) and d = 5 floor(ln n), n in {128, 256, 512, 1024}; "
        "a reconstruction, since the figure regimes do not state n ranges or trial counts";
  else
    res.metadata["grid_source"] = "config";
  return res;
}

PointResult start_point(const GridPoint& pt, std::size_t draws, bool exact) {
  PointResult pr;
  pr.m = pt.m;
  pr.n = pt.n;
  pr.d = pt.d;
  pr.trials = draws;
  pr.exact = exact;
  return pr;
}

void require_square(const GridPoint& pt, const char* study) {
  if (pt.m != pt.n) throw ParameterError(std::string(study) + " study requires square matrices");
}

double sqrt_d_over_n(const GridPoint& pt) { return std::sqrt(static_cast<double>(pt.d)) / pt.n; }

void fit_into(StudyResult& res, const std::vector<std::pair<double, double>>& pts) {
  try {
    res.fit = fit_loglog(pts);
  } catch (const Error& e) {
    res.fit_error = e.what();
  }
}

}  // namespace

int DRule::apply(int n) const {
  const double nn = n;
  switch (kind) {
    case Kind::Fixed:
      return static_cast<int>(param);
    case Kind::Proportional:
      return static_cast<int>(std::floor(param * nn + 1e-9));
    case Kind::Power:
      return static_cast<int>(std::floor(std::pow(nn, param) + 1e-9));
    case Kind::Log:
      return static_cast<int>(param * std::floor(std::log(nn) + 1e-12));
  }
  return 0;
}

std::vector<GridEntry> ExperimentConfig::default_grid() {
  std::vector<GridEntry> g;
  for (const DRule rule : {DRule::power(1.0 / 3.0), DRule::log(5.0)})
    for (int n : {128, 256, 512, 1024}) g.push_back({n, rule, std::nullopt});
  return g;
}

void ExperimentConfig::validate() const {
  if (version != kConfigVersion) throw ConfigError("version: unsupported schema version " + std::to_string(version));
  if (grid.empty()) throw ConfigError("grid: must be nonempty");
  if (trials < 1) throw ConfigError("trials: must be at least 1");
  for (double e : epsilons)
    if (!(e > 0.0)) throw ConfigError("epsilons: every entry must be positive");
  if (!(direction_c > 0.0)) throw ConfigError("direction_c: must be positive");
  for (double t : opnorm_t)
    if (!(t > 0.0)) throw ConfigError("opnorm_t: every entry must be positive");
  if (!(cons.delta > 0.0 && cons.delta < 1.0)) throw ConfigError("cons.delta: must lie in (0,1)");
  if (!(cons.rho > 0.0 && cons.rho < 1.0)) throw ConfigError("cons.rho: must lie in (0,1)");
  if (cons_vectors < 1) throw ConfigError("cons.vectors: must be at least 1");
  if (fast_threshold < 1) throw ConfigError("fast_threshold: must be positive");
  (void)points();
}

std::vector<GridPoint> ExperimentConfig::points() const {
  std::vector<GridPoint> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const GridEntry& g = grid[i];
    const std::string where = "grid[" + std::to_string(i) + "]";
    if (g.n < 1 || g.n > 4096) throw ConfigError(where + ".n: must lie in [1, 4096]");
    const int d = g.rule.apply(g.n);
    if (d < 1 || d > g.n)
      throw ConfigError(where + ".d_rule: derived d = " + std::to_string(d) + " outside [1, " +
                        std::to_string(g.n) + "]");
    const int m = g.m.value_or(g.n);
    if (m < 1 || m > g.n) throw ConfigError(where + ".m: must lie in [1, n]");
    out.push_back({m, g.n, d});
  }
  return out;
}

const StatSummary* PointResult::find_stat(const std::string& name) const {
  for (const auto& s : stats)
    if (s.name == name) return &s;
  return nullptr;
}

const StatSummary& PointResult::stat(const std::string& name) const {
  const StatSummary* s = find_stat(name);
  if (!s) throw ParameterError("no statistic named " + name);
  return *s;
}

FitResult fit_loglog(const std::vector<std::pair<double, double>>& points) {
  for (const auto& [x, y] : points)
    if (!(x > 0.0) || !(y > 0.0)) throw ParameterError("fit_loglog: coordinates must be positive");
  std::vector<double> xs;
  for (const auto& p : points) xs.push_back(p.first);
  std::sort(xs.begin(), xs.end());
  if (std::unique(xs.begin(), xs.end()) - xs.begin() < 2)
    throw FitError("fit_loglog: need at least 2 distinct abscissae");

  const auto k = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += std::log(x);
    my += std::log(y);
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    const double dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (const auto& [x, y] : points) {
    const double r = std::log(y) - (f.intercept + f.slope * std::log(x));
    ss_res += r * r;
  }
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return f;
}

StatSummary summarize(std::string name, const std::vector<double>& values, bool is_rate) {
  StatSummary s;
  s.name = std::move(name);
  s.is_rate = is_rate;
  const std::size_t n = values.size();
  if (n == 0) {
    s.mean = s.median = s.std_error = ExtReal::infinity();
    return s;
  }
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const double mean = static_cast<double>(sum / static_cast<long double>(n));
  s.mean = ExtReal(mean);
  s.median = ExtReal(median_of(values));
  if (is_rate) {
    s.std_error = ExtReal(std::sqrt(std::max(0.0, mean * (1.0 - mean)) / static_cast<double>(n)));
  } else if (n > 1) {
    long double ss = 0.0L;
    for (double v : values) ss += static_cast<long double>(v - mean) * (v - mean);
    s.std_error = ExtReal(static_cast<double>(std::sqrt(ss / (n - 1) / n)));
  } else {
    s.std_error = ExtReal(0.0);
  }
  return s;
}

StatSummary summarize(std::string name, const std::vector<ExtReal>& values) {
  const bool any_inf = std::any_of(values.begin(), values.end(), [](const ExtReal& v) { return v.is_infinite(); });
  if (!any_inf) {
    std::vector<double> plain;
    for (const auto& v : values) plain.push_back(v.value());
    return summarize(std::move(name), plain, false);
  }
  StatSummary s;
  s.name = std::move(name);
  s.mean = s.std_error = ExtReal::infinity();
  std::vector<ExtReal> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t h = sorted.size() / 2;
  if (sorted.size() % 2 == 1) {
    s.median = sorted[h];
  } else if (sorted[h].is_infinite()) {
    s.median = ExtReal::infinity();
  } else {
    s.median = ExtReal(0.5 * (sorted[h - 1].value() + sorted[h].value()));
  }
  return s;
}

StudyResult run_scaling_study(const ExperimentConfig& cfg, const StudyHooks& hooks) {
  StudyResult res = start_result("scaling", cfg);
  const auto pts = cfg.points();
  PlotSpec plot{"sn", "sqrt(d)/n", "mean s_n", "sqrt(d)/n", false, {}, {}};
  std::vector<std::pair<double, double>> fit_pts;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const GridPoint& pt = pts[k];
    require_square(pt, "scaling");
    PointResult pr;
    if (hooks.inject_sn) {
      pr = start_point(pt, cfg.trials, false);
      pr.stats.push_back(summarize("sn", std::vector<double>(cfg.trials, hooks.inject_sn(pt.n, pt.d)), false));
    } else {
      const auto recs = collect<SquareRecord>(cfg, pt, k, "scaling", cfg.exact,
                                              [&](const CombMatrix& m, std::size_t t) { return square_extremes(m, t, cfg); });
      pr = start_point(pt, recs.size(), cfg.exact);
      pr.stats.push_back(summarize("sn", column(recs, [](const SquareRecord& r) { return r.sn; }), false));
      pr.stats.push_back(summarize("s1", column(recs, [](const SquareRecord& r) { return r.s1; }), false));
      pr.stats.push_back(summarize("singular_rate", column(recs, [](const SquareRecord& r) { return r.singular; }), true));
      pr.stats.push_back(summarize("zero_column_rate", column(recs, [](const SquareRecord& r) { return r.zero_column; }), true));
      add_square_bookkeeping(pr, recs);
      note_square_warnings(res, pr);
    }
    sort_stats(pr);
    const double x = sqrt_d_over_n(pt);
    plot.x.push_back(x);
    plot.reference.push_back(x);
    const ExtReal mean = pr.stat("sn").mean;
    if (mean.is_finite() && mean.value() > 0.0) fit_pts.emplace_back(x, mean.value());
    res.points.push_back(std::move(pr));
  }
  fit_into(res, fit_pts);
  res.plot = plot;
  return res;
}

StudyResult run_tail_study(const ExperimentConfig& cfg) {
  StudyResult res = start_result("tail", cfg);
  const auto pts = cfg.points();
  PlotSpec plot{"sn", "sqrt(d)/n", "mean s_n", "sqrt(d)/n", false, {}, {}};
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const GridPoint& pt = pts[k];
    require_square(pt, "tail");
    const auto recs = collect<SquareRecord>(cfg, pt, k, "tail", cfg.exact,
                                            [&](const CombMatrix& m, std::size_t t) { return square_extremes(m, t, cfg); });
    PointResult pr = start_point(pt, recs.size(), cfg.exact);
    const std::vector<double> sn = column(recs, [](const SquareRecord& r) { return r.sn; });
    pr.stats.push_back(summarize("sn", sn, false));
    pr.stats.push_back(summarize("singular_rate", column(recs, [](const SquareRecord& r) { return r.singular; }), true));
    for (double eps : cfg.epsilons) {
      const double upper = std::sqrt(static_cast<double>(pt.d)) / (eps * eps * pt.n);
      const double lower = eps / std::sqrt(static_cast<double>(pt.n));
      std::vector<double> hu, hl;
      for (double s : sn) {
        hu.push_back(s <= upper ? 1.0 : 0.0);
        hl.push_back(s <= lower ? 1.0 : 0.0);
      }
      pr.stats.push_back(summarize(tagged("p_upper_eps_", eps), hu, true));
      pr.stats.push_back(summarize(tagged("p_lower_eps_", eps), hl, true));
      pr.extras[tagged("tau_upper_eps_", eps)] = upper;
      pr.extras[tagged("tau_lower_eps_", eps)] = lower;
    }
    add_square_bookkeeping(pr, recs);
    note_square_warnings(res, pr);
    sort_stats(pr);
    plot.x.push_back(sqrt_d_over_n(pt));
    plot.reference.push_back(sqrt_d_over_n(pt));
    res.points.push_back(std::move(pr));
  }
  res.plot = plot;
  return res;
}

StudyResult run_condition_study(const ExperimentConfig& cfg, const StudyHooks& hooks) {
  StudyResult res = start_result("condition", cfg);
  const auto pts = cfg.points();
  PlotSpec plot{"kappa", "n", "median kappa", "n^(3/2)", true, {}, {}};
  std::vector<std::pair<double, double>> fit_pts;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const GridPoint& pt = pts[k];
    require_square(pt, "condition");
    PointResult pr;
    if (hooks.inject_kappa) {
      pr = start_point(pt, cfg.trials, false);
      pr.stats.push_back(summarize("kappa", std::vector<double>(cfg.trials, hooks.inject_kappa(pt.n, pt.d)), false));
      pr.stats.push_back(summarize("invertible_rate", std::vector<double>(cfg.trials, 1.0), true));
    } else {
      const auto recs = collect<SquareRecord>(cfg, pt, k, "condition", cfg.exact,
                                              [&](const CombMatrix& m, std::size_t t) { return square_extremes(m, t, cfg); });
      pr = start_point(pt, recs.size(), cfg.exact);
      std::vector<double> kappa;
      std::size_t below_d = 0;
      for (const auto& r : recs) {
        if (!r.singular) kappa.push_back(r.s1 / r.sn);
        if (r.s1 < pt.d * (1.0 - 1e-12)) ++below_d;
      }
      pr.stats.push_back(summarize("kappa", kappa, false));
      pr.stats.push_back(summarize("invertible_rate", column(recs, [](const SquareRecord& r) { return !r.singular; }), true));
      pr.stats.push_back(summarize("s1", column(recs, [](const SquareRecord& r) { return r.s1; }), false));
      pr.stats.push_back(summarize("sn", column(recs, [](const SquareRecord& r) { return r.sn; }), false));
      pr.extras["s1_below_d"] = static_cast<double>(below_d);
      add_square_bookkeeping(pr, recs);
      note_square_warnings(res, pr);
      if (kappa.empty())
        res.warnings.push_back("n=" + std::to_string(pt.n) + " d=" + std::to_string(pt.d) +
                               ": every draw singular; point excluded from the fit");
    }
    sort_stats(pr);
    plot.x.push_back(pt.n);
    plot.reference.push_back(std::pow(static_cast<double>(pt.n), 1.5));
    const ExtReal med = pr.stat("kappa").median;
    if (med.is_finite() && med.value() > 0.0) fit_pts.emplace_back(pt.n, med.value());
    res.points.push_back(std::move(pr));
  }
  fit_into(res, fit_pts);
  res.plot = plot;
  return res;
}

StudyResult run_opnorm_study(const ExperimentConfig& cfg) {
  StudyResult res = start_result("opnorm", cfg);
  const auto pts = cfg.points();
  PlotSpec plot{"opnorm_ratio", "n", "mean ||M - EM|| / sqrt(pn)", "constant", false, {}, {}};
  struct Rec {
    double ratio = 0.0;
    double residual = 0.0;
    bool violated = false;
  };
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const GridPoint& pt = pts[k];
    const double p = static_cast<double>(pt.d) / pt.n;
    const double scale = std::sqrt(p * pt.n);
    const auto recs = collect<Rec>(cfg, pt, k, "opnorm", cfg.exact, [&](const CombMatrix& m, std::size_t) {
      const MatrixXd a = m.dense();
      const double centered = operator_norm((a.array() - p).matrix());
      const double restricted = restricted_opnorm(a);
      Rec r;
      r.ratio = centered / scale;
      const double denom = std::max(std::max(centered, restricted), 1.0);
      r.residual = std::abs(centered - restricted) / denom;
      r.violated = centered > restricted + 1e-8 * denom;
      return r;
    });
    PointResult pr = start_point(pt, recs.size(), cfg.exact);
    const std::vector<double> ratio = column(recs, [](const Rec& r) { return r.ratio; });
    pr.stats.push_back(summarize("opnorm_ratio", ratio, false));
    for (double t : cfg.opnorm_t) {
      std::vector<double> hit;
      for (double r : ratio) hit.push_back(r >= t ? 1.0 : 0.0);
      pr.stats.push_back(summarize(tagged("exceed_t_", t), hit, true));
    }
    pr.extras["ratio_max"] = *std::max_element(ratio.begin(), ratio.end());
    pr.extras["ratio_q50"] = quantile_of(ratio, 0.5);
    pr.extras["ratio_q90"] = quantile_of(ratio, 0.9);
    pr.extras["ratio_q99"] = quantile_of(ratio, 0.99);
    double worst = 0.0;
    std::size_t violations = 0;
    for (const auto& r : recs) {
      worst = std::max(worst, r.residual);
      violations += r.violated;
    }
    pr.extras["identity_residual_max"] = worst;
    pr.extras["identity_violations"] = static_cast<double>(violations);
    sort_stats(pr);
    plot.x.push_back(pt.n);
    plot.reference.push_back(1.0);
    res.points.push_back(std::move(pr));
  }
  res.plot = plot;
  return res;
}

StudyResult run_singularity_study(const ExperimentConfig& cfg) {
  StudyResult res = start_result("singularity", cfg);
  const auto pts = cfg.points();
  PlotSpec plot{"singular_rate", "n", "singularity rate", "constant", false, {}, {}};
  struct Rec {
    bool singular = false;
    bool zero_column = false;
  };
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const GridPoint& pt = pts[k];
    require_square(pt, "singularity");
    const bool exact = cfg.exact || saturating_pow(binomial(pt.n, pt.d), pt.m) <= cfg.trials;
    const auto recs = collect<Rec>(cfg, pt, k, "singularity", exact, [](const CombMatrix& m, std::size_t) {
      return Rec{is_singular_exact(m), m.has_zero_column()};
    });
    PointResult pr = start_point(pt, recs.size(), exact);
    pr.stats.push_back(summarize("singular_rate", column(recs, [](const Rec& r) { return r.singular; }), true));
    pr.stats.push_back(summarize("zero_column_rate", column(recs, [](const Rec& r) { return r.zero_column; }), true));
    sort_stats(pr);
    plot.x.push_back(pt.n);
    plot.reference.push_back(1.0);
    res.points.push_back(std::move(pr));
  }
  res.plot = plot;
  return res;
}

StudyResult run_cons_invertibility_study(const ExperimentConfig& cfg) {
  StudyResult res = start_result("cons", cfg);
  const auto pts = cfg.points();
  PlotSpec plot{"cons_min_ratio", "n", "min ||Mv|| / sqrt(pn)", "constant", false, {}, {}};
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const GridPoint& pt = pts[k];
    if (2 * pt.m < pt.n) throw ParameterError("cons study requires n/2 <= m <= n");
    if (pt.n < 2) throw ParameterError("cons study requires n >= 2");
    const double scale = std::sqrt(static_cast<double>(pt.d));
    const SeedSpec vec_seed = point_seed(cfg, "cons-vector", k);
    const auto recs = collect<double>(cfg, pt, k, "cons", cfg.exact, [&](const CombMatrix& m, std::size_t t) {
      const MatrixXd a = m.dense();
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < cfg.cons_vectors; ++j) {
        const VectorXd v = sample_almost_constant(pt.n, cfg.cons, derive_seed(vec_seed.with_trial(t), j));
        best = std::min(best, (a * v).norm() / scale);
      }
      return best;
    });
    PointResult pr = start_point(pt, recs.size(), cfg.exact);
    pr.stats.push_back(summarize("cons_min_ratio", recs, false));
    pr.extras["envelope"] = *std::min_element(recs.begin(), recs.end());
    pr.extras["vector_matrix_pairs"] = static_cast<double>(recs.size()) * cfg.cons_vectors;
    sort_stats(pr);
    plot.x.push_back(pt.n);
    plot.reference.push_back(1.0);
    res.points.push_back(std::move(pr));
  }
  res.plot = plot;
  return res;
}

StudyResult run_study(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "scaling") return run_scaling_study(cfg);
  if (name == "tail") return run_tail_study(cfg);
  if (name == "condition") return run_condition_study(cfg);
  if (name == "opnorm") return run_opnorm_study(cfg);
  if (name == "singularity") return run_singularity_study(cfg);
  if (name == "cons") return run_cons_invertibility_study(cfg);
  throw ParameterError("unknown study: " + name);
}

}  // namespace combilab
