#pragma once

#include "combilab/experiments.hpp"

#include <optional>
#include <string>

namespace combilab {

/// Header `n,d,trials,stat,mean,median,stderr`, then one row per (grid point,
/// statistic) in grid order and statistic-name order. Reals use 12 significant
/// digits; an infinite value prints as `inf`.
std::string emit_csv(const StudyResult& result);

/// Full result as pretty-printed JSON, including extras, warnings and the fit.
std::string emit_json(const StudyResult& result);

/// Standalone log-log SVG of result.plot: one <circle> per plotted point with a
/// +-stderr whisker, a dashed reference <line> through the geometric mean of the
/// points, and the fitted <line> when a fit is given. Throws NumericalError
/// naming the statistic when no point has a positive finite value.
std::string emit_svg_loglog(const StudyResult& result, const std::optional<FitResult>& fit,
                            const std::string& reference_slope_label);

/// Geometry of the plot area, exposed so tests can check pixel positions.
struct LogAxes {
  double x_lo = 0.0, x_hi = 0.0;  // log10 bounds
  double y_lo = 0.0, y_hi = 0.0;
  double left = 80.0, right = 620.0, top = 30.0, bottom = 400.0;

  double px(double x) const;
  double py(double y) const;
};

}  // namespace combilab
