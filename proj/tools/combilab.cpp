// Command-line front end for the combilab library.

#include "combilab/concentration.hpp"
#include "combilab/config.hpp"
#include "combilab/experiments.hpp"
#include "combilab/geometry.hpp"
#include "combilab/moments.hpp"
#include "combilab/report.hpp"
#include "combilab/sampler.hpp"
#include "combilab/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace combilab;
using nlohmann::ordered_json;

enum ExitCode { kOk = 0, kConfig = 2, kCapacity = 3, kNumerical = 4 };

ordered_json real_json(const ExtReal& v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParameterError("not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw ParameterError("empty number list");
  return out;
}

VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// --vector gives explicit coordinates; otherwise a seeded random unit vector of length --dim.
struct VectorSource {
  std::string values;
  int dim = 0;
  std::uint64_t seed = 1;

  void attach(CLI::App* app) {
    app->add_option("--vector", values, "Comma-separated coordinates");
    app->add_option("--dim", dim, "Length of a random unit vector (when --vector is absent)");
  }
  VectorXd get() const {
    if (!values.empty()) return to_vector(parse_list(values));
    if (dim < 1) throw ParameterError("give --vector or a positive --dim");
    Rng rng(mix64(seed ^ label_hash("cli-vector")));
    return random_unit_vector(dim, rng);
  }
};

ordered_json matrix_json(const CombMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : m.row_list()) rows.push_back(r.support());
  return {{"m", m.rows()}, {"n", m.cols()}, {"d", m.ones_per_row()}, {"rows", rows}};
}

CombMatrix matrix_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("n") || !j.contains("d") || !j.contains("rows"))
    throw ConfigError("matrix file must be an object with n, d and rows");
  const int n = j["n"].get<int>();
  std::vector<RowVector> rows;
  for (const auto& r : j["rows"]) rows.emplace_back(n, r.get<std::vector<int>>());
  return CombMatrix(n, j["d"].get<int>(), std::move(rows));
}

ordered_json tail_json(const TailReport& r) {
  ordered_json j{{"threshold", r.threshold},
                 {"empirical_prob", r.empirical_prob},
                 {"trials", r.trials},
                 {"standard_error", r.standard_error}};
  j["bound"] = r.bound ? ordered_json(*r.bound) : ordered_json(nullptr);
  j["violation"] = r.violation;
  return j;
}

DiscreteDistribution parse_distribution(const std::string& text) {
  // "v1,v2,..." is uniform; "v1:p1,v2:p2,..." is weighted.
  if (text.find(':') == std::string::npos) return DiscreteDistribution::uniform(parse_list(text));
  DiscreteDistribution d;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ParameterError("mixed weighted and unweighted entries: " + text);
    d.values.push_back(parse_list(item.substr(0, colon)).front());
    d.probs.push_back(parse_list(item.substr(colon + 1)).front());
  }
  return d;
}

struct StudyOptions {
  std::string config_path;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  bool exact = false;
  std::optional<int> fast_threshold;
  std::optional<std::string> out_dir;
};

int run_study_command(const std::string& study, const StudyOptions& opt) {
  ExperimentConfig cfg = opt.config_path.empty() ? parse_config("{}") : parse_config(read_file(opt.config_path));
  if (opt.trials) cfg.trials = *opt.trials;
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.exact) cfg.exact = true;
  if (opt.fast_threshold) cfg.fast_threshold = *opt.fast_threshold;
  if (opt.out_dir) cfg.out_dir = *opt.out_dir;
  cfg.validate();

  const StudyResult res = run_study(study, cfg);
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / (study + ".csv"), emit_csv(res));
  write_file(dir / (study + ".json"), emit_json(res));
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  if (res.fit)
    std::printf("%s: fit slope %.6g, r^2 %.6g\n", study.c_str(), res.fit->slope, res.fit->r_squared);
  else if (res.fit_error)
    std::printf("%s: no fit (%s)\n", study.c_str(), res.fit_error->c_str());
  write_file(dir / (study + ".svg"), emit_svg_loglog(res, res.fit, res.plot ? res.plot->reference_label : ""));
  std::printf("wrote %s/%s.{csv,json,svg}\n", cfg.out_dir.c_str(), study.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combilab: random 0/1 matrices with fixed row sums"};
  app.require_subcommand(1);
  std::function<int()> action;

  // sample
  int n = 0, d = 0, m = 0;
  std::uint64_t seed = 1, trial = 0;
  bool as_json = false;
  auto* sample = app.add_subcommand("sample", "Draw one matrix and print it as 0/1 text rows");
  sample->add_option("--n", n, "Columns")->required();
  sample->add_option("--d", d, "Ones per row")->required();
  sample->add_option("--m", m, "Rows (default n)");
  sample->add_option("--seed", seed, "Master seed");
  sample->add_option("--trial", trial, "Trial index");
  sample->add_flag("--json", as_json, "Print row supports as JSON (readable by `spectrum --matrix`)");
  sample->callback([&] {
    action = [&] {
      const CombMatrix mat = sample_matrix(m > 0 ? m : n, n, d, SeedSpec{seed, label_hash("cli-sample"), trial});
      if (as_json) {
        std::cout << matrix_json(mat).dump() << "\n";
        return kOk;
      }
      const MatrixXd a = mat.dense();
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        std::string line;
        for (Eigen::Index j = 0; j < a.cols(); ++j) line += a(i, j) != 0.0 ? '1' : '0';
        std::cout << line << "\n";
      }
      return kOk;
    };
  });

  // spectrum
  std::string matrix_file;
  auto* spec = app.add_subcommand("spectrum", "Extreme singular values, condition number and ||M - EM||");
  spec->add_option("--n", n, "Columns");
  spec->add_option("--d", d, "Ones per row");
  spec->add_option("--m", m, "Rows (default n)");
  spec->add_option("--seed", seed, "Master seed");
  spec->add_option("--trial", trial, "Trial index");
  spec->add_option("--matrix", matrix_file, "Matrix JSON as printed by `sample --json`");
  spec->callback([&] {
    action = [&] {
      const CombMatrix mat = !matrix_file.empty()
                                 ? matrix_from_json(read_file(matrix_file))
                                 : sample_matrix(m > 0 ? m : n, n, d, SeedSpec{seed, label_hash("cli-sample"), trial});
      const SpectralSummary s = spectrum(mat);
      ordered_json j{{"m", s.m}, {"n", s.n}, {"d", s.d}, {"s1", s.s1}, {"sn", s.sn},
                     {"kappa", real_json(s.kappa)}, {"centered_opnorm", s.centered_opnorm},
                     {"exactly_singular", s.exactly_singular}};
      if (mat.is_square() && !s.exactly_singular) {
        try {
          const auto cert = witness_certificate(mat);
          j["certificate_bound"] = cert.bound;
        } catch (const SingularityError&) {
          j["certificate_bound"] = nullptr;
        }
      }
      std::cout << j.dump(2) << "\n";
      return kOk;
    };
  });

  // clcd
  VectorSource vec;
  AlmostConstParams ac;
  double gamma = -1.0, alpha = -1.0, theta_max = -1.0, step = -1.0;
  std::string vector_file;
  auto* clcd = app.add_subcommand("clcd", "Certified bracket for CLCD of a vector; one JSON line per vector");
  vec.attach(clcd);
  clcd->add_option("--vector-file", vector_file, "One whitespace-separated vector per line");
  clcd->add_option("--seed", vec.seed, "Seed for a random vector");
  clcd->add_option("--delta", ac.delta, "Almost-constant delta");
  clcd->add_option("--rho", ac.rho, "Almost-constant rho");
  clcd->add_option("--gamma", gamma, "gamma (default delta*rho/24)");
  clcd->add_option("--alpha", alpha, "alpha (default 0.1 n)");
  clcd->add_option("--theta-max", theta_max, "Scan limit (default 4 sqrt(n))");
  clcd->add_option("--step", step, "Grid step (default theta_max/1000)");
  clcd->callback([&] {
    action = [&] {
      std::vector<VectorXd> inputs;
      if (!vector_file.empty()) {
        std::istringstream lines(read_file(vector_file));
        std::string line;
        while (std::getline(lines, line)) {
          std::istringstream in(line);
          std::vector<double> xs;
          double x;
          while (in >> x) xs.push_back(x);
          if (!in.eof()) throw ParameterError("non-numeric entry in " + vector_file);
          if (!xs.empty()) inputs.push_back(to_vector(xs));
        }
      } else {
        inputs.push_back(vec.get());
      }
      for (const VectorXd& v : inputs) {
        ClcdParams p = ClcdParams::defaults(static_cast<int>(v.size()), ac);
        if (gamma > 0) p.gamma = gamma;
        if (alpha > 0) p.alpha = alpha;
        if (theta_max > 0) {
          p.theta_max = theta_max;
          if (step <= 0) p.grid_step = 1e-3 * theta_max;
        }
        if (step > 0) p.grid_step = step;
        const ClcdEstimate e = clcd_estimate(v, p);
        ordered_json j{{"lower", real_json(e.lower)}, {"upper", real_json(e.upper)}, {"resolution", e.resolution}};
        j["witness_theta"] = e.witness_theta ? ordered_json(*e.witness_theta) : ordered_json(nullptr);
        if (std::abs(v.norm() - 1.0) <= 1e-10) j["almost_constant"] = is_almost_constant(v, ac).almost_constant;
        std::cout << j.dump() << "\n";
      }
      return kOk;
    };
  });

  // levy
  std::string values, values_file;
  double eps = 0.0;
  auto* levy = app.add_subcommand("levy", "Levy concentration of an empirical sample");
  levy->add_option("--values", values, "Comma-separated sample");
  levy->add_option("--file", values_file, "Whitespace-separated sample");
  levy->add_option("--eps", eps, "Half-width")->required();
  levy->callback([&] {
    action = [&] {
      std::vector<double> xs;
      if (!values_file.empty()) {
        std::istringstream in(read_file(values_file));
        double x;
        while (in >> x) xs.push_back(x);
      } else if (!values.empty()) {
        xs = parse_list(values);
      }
      const LevyEstimate e = levy_estimate(xs, eps);
      std::cout << ordered_json{{"width", e.width}, {"value", e.value}, {"sample_count", e.sample_count}}.dump(2)
                << "\n";
      return kOk;
    };
  });

  // slice-check
  double t = 1.0;
  std::size_t trials = 10'000;
  auto* slice = app.add_subcommand("slice-check", "Empirical tail of <q, v> - mu against 2 exp(-t^2/(8||v||^2))");
  vec.attach(slice);
  slice->add_option("--d", d, "Ones per row")->required();
  slice->add_option("--t", t, "Deviation");
  slice->add_option("--trials", trials, "Sampled rows");
  slice->add_option("--seed", vec.seed, "Seed");
  slice->callback([&] {
    action = [&] {
      const VectorXd v = vec.get();
      std::cout << tail_json(slice_tail_check(v, d, t, trials, vec.seed)).dump(2) << "\n";
      return kOk;
    };
  });

  // direction-rate
  double c = 0.5;
  auto* dir = app.add_subcommand("direction-rate", "Empirical P(||M v|| <= c sqrt(pn)) for a fixed direction");
  vec.attach(dir);
  dir->add_option("--m", m, "Rows")->required();
  dir->add_option("--d", d, "Ones per row")->required();
  dir->add_option("--c", c, "Scale constant");
  dir->add_option("--trials", trials, "Sampled matrices");
  dir->add_option("--seed", vec.seed, "Seed");
  dir->callback([&] {
    action = [&] {
      const VectorXd v = vec.get();
      std::cout << tail_json(direction_rate(v, m, d, c, trials, vec.seed)).dump(2) << "\n";
      return kOk;
    };
  });

  // markov-check
  std::vector<std::string> dists;
  auto* markov = app.add_subcommand("markov-check", "P(mean Z <= eps) against (2/n) sum P(Z_k <= 2 eps)");
  markov->add_option("--dist", dists, "One variable: 'v1,v2,..' (uniform) or 'v1:p1,v2:p2,..'")->required();
  markov->add_option("--eps", eps, "Level")->required();
  markov->add_option("--trials", trials, "Monte Carlo draws beyond the exact budget");
  markov->add_option("--seed", seed, "Seed");
  markov->callback([&] {
    action = [&] {
      std::vector<DiscreteDistribution> zs;
      for (const auto& s : dists) zs.push_back(parse_distribution(s));
      const MarkovCheck r = markov_avg_check(zs, eps, trials, seed);
      std::cout << ordered_json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"exact", r.exact},
                                {"standard_error", r.standard_error}, {"trials", r.trials},
                                {"violation", r.violation}}
                       .dump(2)
                << "\n";
      return kOk;
    };
  });

  // moments-check
  bool exact = false;
  std::optional<std::size_t> mc;
  auto* moments = app.add_subcommand("moments-check", "Closed-form E||x||^2 against brute force");
  moments->add_option("--n", n, "Dimension")->required();
  moments->add_option("--d", d, "Ones per row")->required();
  auto* exact_flag = moments->add_flag("--exact", exact, "Exhaustive enumeration (Monte Carlo past the budget)");
  moments->add_option("--mc", mc, "Monte Carlo with this many trials")->excludes(exact_flag);
  moments->add_option("--seed", seed, "Seed");
  moments->callback([&] {
    action = [&] {
      const MomentReport r = mc ? x_second_moment_mc(n, d, *mc, seed) : x_second_moment_oracle(n, d, 100'000, seed);
      ordered_json j{{"n", r.n}, {"d", r.d}, {"formula_value", r.formula_value}, {"cap", r.cap}};
      j["oracle_value"] = r.oracle_value ? ordered_json(*r.oracle_value) : ordered_json(nullptr);
      j["abs_diff"] = r.abs_diff ? ordered_json(*r.abs_diff) : ordered_json(nullptr);
      j["exact"] = r.exact;
      j["capacity_fallback"] = r.capacity_fallback;
      j["samples"] = r.samples;
      j["standard_error"] = r.standard_error;
      j["degenerate_mass"] = r.degenerate_mass;
      j["conditional_mean"] = r.conditional_mean ? ordered_json(*r.conditional_mean) : ordered_json(nullptr);
      j["pass"] = r.pass;
      std::cout << j.dump(2) << "\n";
      return kOk;
    };
  });

  // studies
  StudyOptions study_opt;
  const std::pair<const char*, const char*> studies[] = {
      {"scaling", "Mean s_n against sqrt(d)/n"},
      {"tail", "Small-ball probabilities of s_n"},
      {"condition", "Median condition number against n"},
      {"opnorm", "||M - EM|| / sqrt(pn)"},
      {"singularity", "Exact singularity and zero-column rates"},
      {"cons", "||M v|| over almost-constant v"},
  };
  for (const auto& [name, help] : studies) {
    auto* sub = app.add_subcommand(std::string(name) + "-study", help);
    sub->add_option("--config", study_opt.config_path, "JSON config (defaults when absent)");
    sub->add_option("--trials", study_opt.trials, "Override trials per point");
    sub->add_option("--seed", study_opt.seed, "Override master seed");
    sub->add_flag("--exact", study_opt.exact, "Enumerate every matrix of each point");
    sub->add_option("--fast-threshold", study_opt.fast_threshold, "Use the LU route above this n");
    sub->add_option("--out-dir", study_opt.out_dir, "Output directory");
    const std::string study = name;
    sub->callback([&, study] { action = [&, study] { return run_study_command(study, study_opt); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    return action();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kConfig;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kCapacity;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }
}
