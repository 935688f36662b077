#include "combilab/config.hpp"

#include <json.hpp>

#include <cstdio>
#include <initializer_list>
#include <set>

namespace combilab {

namespace {

using nlohmann::json;

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items())
    if (!ok.count(item.key()))
      throw ConfigError((where.empty() ? "" : where + ".") + item.key() + ": unknown key");
}

const json& require_object(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field + ": expected an object");
  return j;
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field + ": expected a number");
  return j.get<double>();
}

long long get_integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field + ": expected an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    throw ConfigError(field + ": integer out of range");
  return j.get<long long>();
}

std::vector<double> get_number_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

GridEntry parse_entry(const json& j, const std::string& where) {
  require_object(j, where);
  if (!j.contains("n")) throw ConfigError(where + ".n: required");
  if (!j.contains("d_rule")) throw ConfigError(where + ".d_rule: required");
  if (!j["d_rule"].is_string()) throw ConfigError(where + ".d_rule: expected a string");
  GridEntry e;
  const long long n = get_integer(j["n"], where + ".n");
  if (n < 1 || n > 4096) throw ConfigError(where + ".n: must lie in [1, 4096]");
  e.n = static_cast<int>(n);
  if (j.contains("m")) {
    const long long m = get_integer(j["m"], where + ".m");
    if (m < 1 || m > n) throw ConfigError(where + ".m: must lie in [1, n]");
    e.m = static_cast<int>(m);
  }
  const std::string rule = j["d_rule"].get<std::string>();
  auto param = [&](const char* key) {
    if (!j.contains(key)) throw ConfigError(where + "." + key + ": required by d_rule \"" + rule + "\"");
    return get_number(j[key], where + "." + key);
  };
  if (rule == "fixed") {
    reject_unknown(j, where, {"n", "m", "d_rule", "k"});
    e.rule = DRule::fixed(static_cast<int>(get_integer(j["k"], where + ".k")));
  } else if (rule == "pn") {
    reject_unknown(j, where, {"n", "m", "d_rule", "p"});
    const double p = param("p");
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError(where + ".p: must lie in (0, 1]");
    e.rule = DRule::proportional(p);
  } else if (rule == "pow") {
    reject_unknown(j, where, {"n", "m", "d_rule", "a"});
    const double a = param("a");
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError(where + ".a: must lie in [0, 1]");
    e.rule = DRule::power(a);
  } else if (rule == "cbrt") {
    reject_unknown(j, where, {"n", "m", "d_rule"});
    e.rule = DRule::power(1.0 / 3.0);
  } else if (rule == "logn") {
    reject_unknown(j, where, {"n", "m", "d_rule", "c"});
    const double c = param("c");
    if (!(c > 0.0) || c != std::floor(c)) throw ConfigError(where + ".c: must be a positive integer");
    e.rule = DRule::log(c);
  } else if (rule == "5logn") {
    reject_unknown(j, where, {"n", "m", "d_rule"});
    e.rule = DRule::log(5.0);
  } else {
    throw ConfigError(where + ".d_rule: unknown rule \"" + rule + "\"");
  }
  if (rule == "fixed" && !j.contains("k")) throw ConfigError(where + ".k: required by d_rule \"fixed\"");
  const int d = e.rule.apply(e.n);
  if (d < 1 || d > e.n)
    throw ConfigError(where + ".d_rule: derived d = " + std::to_string(d) + " outside [1, " +
                      std::to_string(e.n) + "]");
  return e;
}

json entry_json(const GridEntry& e) {
  json j;
  j["n"] = e.n;
  if (e.m) j["m"] = *e.m;
  switch (e.rule.kind) {
    case DRule::Kind::Fixed:
      j["d_rule"] = "fixed";
      j["k"] = static_cast<long long>(e.rule.param);
      break;
    case DRule::Kind::Proportional:
      j["d_rule"] = "pn";
      j["p"] = e.rule.param;
      break;
    case DRule::Kind::Power:
      if (e.rule.param == 1.0 / 3.0) {
        j["d_rule"] = "cbrt";
      } else {
        j["d_rule"] = "pow";
        j["a"] = e.rule.param;
      }
      break;
    case DRule::Kind::Log:
      if (e.rule.param == 5.0) {
        j["d_rule"] = "5logn";
      } else {
        j["d_rule"] = "logn";
        j["c"] = static_cast<long long>(e.rule.param);
      }
      break;
  }
  return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON at " + line_column(text, e.byte) + ": " + e.what());
  }
  require_object(doc, "config");
  reject_unknown(doc, "", {"version", "grid", "trials", "seed", "epsilons", "direction_c", "opnorm_t",
                           "cons", "exact", "fast_threshold", "out_dir"});

  ExperimentConfig cfg;
  if (doc.contains("version")) {
    const long long v = get_integer(doc["version"], "version");
    if (v != kConfigVersion) throw ConfigError("version: unsupported schema version " + std::to_string(v));
    cfg.version = static_cast<int>(v);
  }
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    if (!g.is_array()) throw ConfigError("grid: expected an array");
    if (g.empty()) throw ConfigError("grid: must be nonempty");
    for (std::size_t i = 0; i < g.size(); ++i) cfg.grid.push_back(parse_entry(g[i], "grid[" + std::to_string(i) + "]"));
  } else {
    cfg.grid = ExperimentConfig::default_grid();
    cfg.default_grid_used = true;
  }
  if (doc.contains("trials")) {
    const long long t = get_integer(doc["trials"], "trials");
    if (t < 1) throw ConfigError("trials: must be at least 1");
    cfg.trials = static_cast<std::size_t>(t);
  }
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<long long>() < 0))
      throw ConfigError("seed: expected a nonnegative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("epsilons")) cfg.epsilons = get_number_list(doc["epsilons"], "epsilons");
  if (doc.contains("direction_c")) cfg.direction_c = get_number(doc["direction_c"], "direction_c");
  if (doc.contains("opnorm_t")) cfg.opnorm_t = get_number_list(doc["opnorm_t"], "opnorm_t");
  if (doc.contains("cons")) {
    const json& c = require_object(doc["cons"], "cons");
    reject_unknown(c, "cons", {"delta", "rho", "vectors"});
    if (c.contains("delta")) cfg.cons.delta = get_number(c["delta"], "cons.delta");
    if (c.contains("rho")) cfg.cons.rho = get_number(c["rho"], "cons.rho");
    if (c.contains("vectors")) cfg.cons_vectors = static_cast<int>(get_integer(c["vectors"], "cons.vectors"));
  }
  if (doc.contains("exact")) {
    if (!doc["exact"].is_boolean()) throw ConfigError("exact: expected a boolean");
    cfg.exact = doc["exact"].get<bool>();
  }
  if (doc.contains("fast_threshold"))
    cfg.fast_threshold = static_cast<int>(get_integer(doc["fast_threshold"], "fast_threshold"));
  if (doc.contains("out_dir")) {
    if (!doc["out_dir"].is_string()) throw ConfigError("out_dir: expected a string");
    cfg.out_dir = doc["out_dir"].get<std::string>();
  }
  cfg.validate();
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json doc;
  doc["version"] = cfg.version;
  if (!cfg.default_grid_used) {
    json g = json::array();
    for (const auto& e : cfg.grid) g.push_back(entry_json(e));
    doc["grid"] = g;
  }
  doc["trials"] = cfg.trials;
  doc["seed"] = cfg.seed;
  doc["epsilons"] = cfg.epsilons;
  doc["direction_c"] = cfg.direction_c;
  doc["opnorm_t"] = cfg.opnorm_t;
  doc["cons"] = {{"delta", cfg.cons.delta}, {"rho", cfg.cons.rho}, {"vectors", cfg.cons_vectors}};
  doc["exact"] = cfg.exact;
  doc["fast_threshold"] = cfg.fast_threshold;
  doc["out_dir"] = cfg.out_dir;
  return doc.dump(2) + "\n";
}

std::string config_hash(const ExperimentConfig& cfg) {
  // Output location does not change results, so it stays out of the hash.
  ExperimentConfig keyed = cfg;
  keyed.out_dir.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_config(keyed)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace combilab
