#include "combilab/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace combilab {

namespace {

using nlohmann::ordered_json;

constexpr double kWidth = 640.0;
constexpr double kHeight = 470.0;

ordered_json real_json(const ExtReal& v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Marker {
  double x, y, lo, hi;
};

/// Decade-aligned bounds covering [lo, hi] in log10, padded by 5%.
std::pair<double, double> log_range(double lo, double hi) {
  double a = std::log10(lo);
  double b = std::log10(hi);
  if (b - a < 1e-9) {
    a -= 0.5;
    b += 0.5;
  }
  const double pad = 0.05 * (b - a);
  return {a - pad, b + pad};
}

}  // namespace

double LogAxes::px(double x) const { return left + (std::log10(x) - x_lo) / (x_hi - x_lo) * (right - left); }
double LogAxes::py(double y) const { return bottom - (std::log10(y) - y_lo) / (y_hi - y_lo) * (bottom - top); }

std::string emit_csv(const StudyResult& result) {
  std::string out = "n,d,trials,stat,mean,median,stderr\n";
  for (const auto& p : result.points) {
    for (const auto& s : p.stats) {
      out += std::to_string(p.n) + "," + std::to_string(p.d) + "," + std::to_string(p.trials) + "," + s.name +
             "," + format_real(s.mean) + "," + format_real(s.median) + "," + format_real(s.std_error) + "\n";
    }
  }
  return out;
}

std::string emit_json(const StudyResult& result) {
  ordered_json doc;
  doc["study"] = result.study;
  doc["config_hash"] = result.config_hash;
  doc["master_seed"] = result.master_seed;
  doc["metadata"] = result.metadata;
  doc["warnings"] = result.warnings;
  ordered_json pts = ordered_json::array();
  for (const auto& p : result.points) {
    ordered_json jp;
    jp["m"] = p.m;
    jp["n"] = p.n;
    jp["d"] = p.d;
    jp["trials"] = p.trials;
    jp["exact"] = p.exact;
    ordered_json stats = ordered_json::object();
    for (const auto& s : p.stats) {
      stats[s.name] = {{"mean", real_json(s.mean)},
                       {"median", real_json(s.median)},
                       {"stderr", real_json(s.std_error)},
                       {"is_rate", s.is_rate}};
    }
    jp["stats"] = stats;
    ordered_json extras = ordered_json::object();
    for (const auto& [k, v] : p.extras) extras[k] = real_json(ExtReal::from_double(v));
    jp["extras"] = extras;
    pts.push_back(jp);
  }
  doc["points"] = pts;
  if (result.fit) {
    doc["fit"] = {{"slope", result.fit->slope},
                  {"intercept", result.fit->intercept},
                  {"r_squared", result.fit->r_squared}};
  } else {
    doc["fit"] = nullptr;
  }
  if (result.fit_error) doc["fit_error"] = *result.fit_error;
  return doc.dump(2) + "\n";
}

std::string emit_svg_loglog(const StudyResult& result, const std::optional<FitResult>& fit,
                            const std::string& reference_slope_label) {
  if (!result.plot) throw ParameterError("emit_svg_loglog: result carries no plot description");
  const PlotSpec& plot = *result.plot;
  if (plot.x.size() != result.points.size() || plot.reference.size() != result.points.size())
    throw ParameterError("emit_svg_loglog: plot abscissae do not match the grid");

  std::vector<Marker> marks;
  std::vector<double> ref_at;
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const StatSummary* s = result.points[i].find_stat(plot.stat);
    if (!s) continue;
    const ExtReal y = plot.use_median ? s->median : s->mean;
    if (y.is_infinite() || !(y.value() > 0.0) || !(plot.x[i] > 0.0) || !(plot.reference[i] > 0.0)) continue;
    const double se = s->std_error.is_finite() ? s->std_error.value() : 0.0;
    const double lo = y.value() - se > 0.0 ? y.value() - se : y.value();
    marks.push_back({plot.x[i], y.value(), lo, y.value() + se});
    ref_at.push_back(plot.reference[i]);
  }
  if (marks.empty())
    throw NumericalError("emit_svg_loglog: statistic '" + plot.stat + "' has no positive values to plot");

  // Reference c * ref(x) through the geometric mean of the markers.
  double log_c = 0.0;
  for (std::size_t i = 0; i < marks.size(); ++i) log_c += std::log(marks[i].y) - std::log(ref_at[i]);
  const double c = std::exp(log_c / static_cast<double>(marks.size()));
  const auto first = static_cast<std::size_t>(
      std::min_element(marks.begin(), marks.end(), [](const Marker& a, const Marker& b) { return a.x < b.x; }) -
      marks.begin());
  const auto last = static_cast<std::size_t>(
      std::max_element(marks.begin(), marks.end(), [](const Marker& a, const Marker& b) { return a.x < b.x; }) -
      marks.begin());
  const double rx0 = marks[first].x, ry0 = c * ref_at[first];
  const double rx1 = marks[last].x, ry1 = c * ref_at[last];
  double fy0 = 0.0, fy1 = 0.0;
  if (fit) {
    fy0 = std::exp(fit->intercept) * std::pow(rx0, fit->slope);
    fy1 = std::exp(fit->intercept) * std::pow(rx1, fit->slope);
  }

  double xmin = rx0, xmax = rx1;
  double ymin = std::min(ry0, ry1), ymax = std::max(ry0, ry1);
  for (const auto& m : marks) {
    ymin = std::min(ymin, m.lo);
    ymax = std::max(ymax, m.hi);
  }
  if (fit) {
    ymin = std::min({ymin, fy0, fy1});
    ymax = std::max({ymax, fy0, fy1});
  }
  LogAxes ax;
  std::tie(ax.x_lo, ax.x_hi) = log_range(xmin, xmax);
  std::tie(ax.y_lo, ax.y_hi) = log_range(ymin, ymax);

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
      << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(result.study + ": " + plot.y_label) << "</text>\n";

  // Axes box.
  svg << "<path d=\"M" << fmt(ax.left) << " " << fmt(ax.top) << " V" << fmt(ax.bottom) << " H" << fmt(ax.right)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Decade ticks plus minor ticks at 2 and 5.
  std::string ticks;
  std::string labels;
  auto add_ticks = [&](double lo, double hi, bool horizontal) {
    for (int e = static_cast<int>(std::floor(lo)); e <= static_cast<int>(std::ceil(hi)); ++e) {
      for (int mant : {1, 2, 5}) {
        const double v = mant * std::pow(10.0, e);
        const double lv = std::log10(v);
        if (lv < lo || lv > hi) continue;
        const double len = mant == 1 ? 8.0 : 4.0;
        if (horizontal) {
          const double x = ax.px(v);
          ticks += "M" + fmt(x) + " " + fmt(ax.bottom) + " v" + fmt(len) + " ";
          if (mant == 1)
            labels += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(ax.bottom + 22) +
                      "\" text-anchor=\"middle\" font-size=\"11\">" + tick_label(v) + "</text>\n";
        } else {
          const double y = ax.py(v);
          ticks += "M" + fmt(ax.left) + " " + fmt(y) + " h" + fmt(-len) + " ";
          if (mant == 1)
            labels += "<text x=\"" + fmt(ax.left - 12) + "\" y=\"" + fmt(y + 4) +
                      "\" text-anchor=\"end\" font-size=\"11\">" + tick_label(v) + "</text>\n";
        }
      }
    }
  };
  add_ticks(ax.x_lo, ax.x_hi, true);
  add_ticks(ax.y_lo, ax.y_hi, false);
  if (!ticks.empty()) svg << "<path d=\"" << ticks << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << labels;
  svg << "<text x=\"" << fmt((ax.left + ax.right) / 2) << "\" y=\"" << fmt(ax.bottom + 45)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xml_escape(plot.x_label) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << fmt((ax.top + ax.bottom) / 2) << "\" text-anchor=\"middle\" font-size=\"12\" "
      << "transform=\"rotate(-90 18 " << fmt((ax.top + ax.bottom) / 2) << ")\">" << xml_escape(plot.y_label)
      << "</text>\n";

  svg << "<line x1=\"" << fmt(ax.px(rx0)) << "\" y1=\"" << fmt(ax.py(ry0)) << "\" x2=\"" << fmt(ax.px(rx1))
      << "\" y2=\"" << fmt(ax.py(ry1)) << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
  if (fit) {
    svg << "<line x1=\"" << fmt(ax.px(rx0)) << "\" y1=\"" << fmt(ax.py(fy0)) << "\" x2=\"" << fmt(ax.px(rx1))
        << "\" y2=\"" << fmt(ax.py(fy1)) << "\" stroke=\"steelblue\"/>\n";
  }

  std::string whiskers;
  for (const auto& m : marks) {
    const double x = ax.px(m.x);
    whiskers += "M" + fmt(x) + " " + fmt(ax.py(m.lo)) + " V" + fmt(ax.py(m.hi)) + " ";
  }
  svg << "<path d=\"" << whiskers << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (const auto& m : marks)
    svg << "<circle cx=\"" << fmt(ax.px(m.x)) << "\" cy=\"" << fmt(ax.py(m.y)) << "\" r=\"3.5\" fill=\"black\"/>\n";

  svg << "<text x=\"" << fmt(ax.left + 10) << "\" y=\"" << fmt(ax.top + 16) << "\" font-size=\"11\">"
      << xml_escape("dashed: proportional to " + reference_slope_label) << "</text>\n";
  if (fit) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "fit: slope %.3f, r^2 %.3f", fit->slope, fit->r_squared);
    svg << "<text x=\"" << fmt(ax.left + 10) << "\" y=\"" << fmt(ax.top + 32) << "\" font-size=\"11\">" << buf
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace combilab
