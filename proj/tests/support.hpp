#pragma once

// Test-only oracles and helpers.

#include "combilab/sampler.hpp"

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace testsupport {

/// Exact rational with 128-bit parts; enough for n <= 6 Gram-Schmidt on 0/1 rows.
struct Rational {
  __int128 num = 0;
  __int128 den = 1;

  Rational() = default;
  Rational(long long v) : num(v), den(1) {}  // NOLINT(google-explicit-constructor)
  Rational(__int128 n, __int128 d) : num(n), den(d) { normalize(); }

  static __int128 gcd(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const __int128 g = gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  friend Rational operator+(const Rational& a, const Rational& b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Rational operator-(const Rational& a, const Rational& b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Rational operator*(const Rational& a, const Rational& b) { return {a.num * b.num, a.den * b.den}; }
  friend Rational operator/(const Rational& a, const Rational& b) { return {a.num * b.den, a.den * b.num}; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
  bool is_zero() const { return num == 0; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

using RVec = std::vector<Rational>;

inline Rational dot(const RVec& a, const RVec& b) {
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
  return s;
}

/// Squared distance from v to span(w) by exact Gram-Schmidt; dependent vectors are skipped.
/// Also reports the dimension of the span.
inline Rational exact_dist2(const RVec& v, const std::vector<RVec>& w, int* rank = nullptr) {
  std::vector<RVec> basis;
  std::vector<Rational> norms;
  for (const auto& x : w) {
    RVec r = x;
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Rational c = dot(r, basis[b]) / norms[b];
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] - c * basis[b][i];
    }
    const Rational nn = dot(r, r);
    if (!nn.is_zero()) {
      basis.push_back(r);
      norms.push_back(nn);
    }
  }
  if (rank) *rank = static_cast<int>(basis.size());
  RVec r = v;
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const Rational c = dot(r, basis[b]) / norms[b];
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] - c * basis[b][i];
  }
  return dot(r, r);
}

inline RVec to_rvec(const combilab::RowVector& row) {
  RVec out(static_cast<std::size_t>(row.size()), Rational(0));
  for (int j : row.support()) out[static_cast<std::size_t>(j)] = Rational(1);
  return out;
}

/// Integer determinant by fraction-free (Bareiss) elimination.
inline __int128 bareiss_det(std::vector<std::vector<__int128>> a) {
  const std::size_t n = a.size();
  __int128 sign = 1;
  __int128 prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

inline __int128 integer_det(const combilab::CombMatrix& m) {
  std::vector<std::vector<__int128>> a(static_cast<std::size_t>(m.rows()),
                                       std::vector<__int128>(static_cast<std::size_t>(m.cols()), 0));
  for (int i = 0; i < m.rows(); ++i)
    for (int j : m.row(i).support()) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
  return bareiss_det(std::move(a));
}

/// Minimal structural XML checker: balanced tags, quoted attributes, one root,
/// nothing after the root but whitespace. Counts elements by name.
struct XmlCheck {
  bool ok = false;
  std::string error;
  std::string root;
  std::map<std::string, int> counts;
  /// Attributes of every element, in document order.
  std::vector<std::pair<std::string, std::map<std::string, std::string>>> elements;
};

inline XmlCheck check_xml(const std::string& s) {
  XmlCheck out;
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool root_closed = false;
  auto fail = [&](const std::string& why) {
    out.ok = false;
    out.error = why + " at offset " + std::to_string(i);
    return out;
  };
  auto is_name = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == ':' || c == '_'; };
  if (s.rfind("<?xml", 0) == 0) {
    const auto end = s.find("?>");
    if (end == std::string::npos) return fail("unterminated prolog");
    i = end + 2;
  }
  while (i < s.size()) {
    if (s[i] != '<') {
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(s[i]))) return fail("text outside root");
      if (s[i] == '&') {
        const auto semi = s.find(';', i);
        if (semi == std::string::npos) return fail("bad entity");
        const std::string ent = s.substr(i, semi - i + 1);
        if (ent != "&amp;" && ent != "&lt;" && ent != "&gt;" && ent != "&quot;" && ent != "&apos;")
          return fail("unknown entity " + ent);
        i = semi + 1;
        continue;
      }
      ++i;
      continue;
    }
    if (s.compare(i, 4, "<!--") == 0) {
      const auto end = s.find("-->", i);
      if (end == std::string::npos) return fail("unterminated comment");
      i = end + 3;
      continue;
    }
    if (s.compare(i, 2, "</") == 0) {
      std::size_t j = i + 2;
      while (j < s.size() && is_name(s[j])) ++j;
      const std::string name = s.substr(i + 2, j - i - 2);
      while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (j >= s.size() || s[j] != '>') return fail("bad closing tag");
      if (stack.empty() || stack.back() != name) return fail("mismatched closing tag " + name);
      stack.pop_back();
      if (stack.empty()) root_closed = true;
      i = j + 1;
      continue;
    }
    if (root_closed) return fail("second root element");
    std::size_t j = i + 1;
    while (j < s.size() && is_name(s[j])) ++j;
    const std::string name = s.substr(i + 1, j - i - 1);
    if (name.empty()) return fail("empty tag name");
    std::map<std::string, std::string> attrs;
    while (true) {
      while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (j >= s.size()) return fail("unterminated tag");
      if (s[j] == '>' || s.compare(j, 2, "/>") == 0) break;
      std::size_t k = j;
      while (k < s.size() && is_name(s[k])) ++k;
      if (k == j || k >= s.size() || s[k] != '=') return fail("bad attribute in " + name);
      const std::string key = s.substr(j, k - j);
      if (k + 1 >= s.size() || (s[k + 1] != '"' && s[k + 1] != '\'')) return fail("unquoted attribute " + key);
      const char q = s[k + 1];
      const auto end = s.find(q, k + 2);
      if (end == std::string::npos) return fail("unterminated attribute " + key);
      const std::string value = s.substr(k + 2, end - k - 2);
      if (value.find('<') != std::string::npos) return fail("'<' inside attribute " + key);
      if (attrs.count(key)) return fail("duplicate attribute " + key);
      attrs[key] = value;
      j = end + 1;
    }
    if (stack.empty()) out.root = name;
    ++out.counts[name];
    out.elements.emplace_back(name, attrs);
    if (s[j] == '/') {
      if (stack.empty()) root_closed = true;
      i = j + 2;
    } else {
      stack.push_back(name);
      i = j + 1;
    }
  }
  if (!stack.empty()) return fail("unclosed element " + stack.back());
  if (out.root.empty()) return fail("no root element");
  out.ok = true;
  return out;
}

/// Scoped COMBILAB_THREADS override.
class ThreadsEnv {
 public:
  explicit ThreadsEnv(int workers) {
    if (const char* old = std::getenv("COMBILAB_THREADS")) saved_ = old;
    had_ = std::getenv("COMBILAB_THREADS") != nullptr;
    setenv("COMBILAB_THREADS", std::to_string(workers).c_str(), 1);
  }
  ~ThreadsEnv() {
    if (had_)
      setenv("COMBILAB_THREADS", saved_.c_str(), 1);
    else
      unsetenv("COMBILAB_THREADS");
  }
  ThreadsEnv(const ThreadsEnv&) = delete;
  ThreadsEnv& operator=(const ThreadsEnv&) = delete;

 private:
  std::string saved_;
  bool had_ = false;
};

}  // namespace testsupport
