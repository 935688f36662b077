#include "combilab/exact_rank.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace combilab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 r = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return r;
}

bool has_repeated_rows(const CombMatrix& m) {
  std::set<std::vector<int>> seen;
  for (const auto& r : m.row_list())
    if (!seen.insert(r.support()).second) return true;
  return false;
}

bool has_repeated_columns(const CombMatrix& m) {
  std::vector<std::vector<int>> cols(static_cast<std::size_t>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j : m.row(i).support()) cols[static_cast<std::size_t>(j)].push_back(i);
  std::sort(cols.begin(), cols.end());
  return std::adjacent_find(cols.begin(), cols.end()) != cols.end();
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 random_prime_62(u64 seed) {
  Rng rng(seed);
  constexpr u64 lo = u64{1} << 61;
  while (true) {
    const u64 candidate = (lo + rng.below(lo - 1) + 1) | 1U;
    if (is_prime_u64(candidate)) return candidate;
  }
}

std::array<u64, 2> prime_pair(u64 seed) {
  const u64 p = random_prime_62(mix64(seed));
  u64 q = p;
  for (u64 k = 1; q == p; ++k) q = random_prime_62(mix64(seed + k * 0x9e3779b97f4a7c15ULL));
  return {p, q};
}

int rank_mod_p(const CombMatrix& m, u64 p) {
  const int rows = m.rows();
  const int cols = m.cols();
  std::vector<u64> a(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0);
  auto at = [&](int i, int j) -> u64& {
    return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)];
  };
  for (int i = 0; i < rows; ++i)
    for (int j : m.row(i).support()) at(i, j) = 1;

  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int i = rank; i < rows; ++i) {
      if (at(i, col) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int j = col; j < cols; ++j) std::swap(at(pivot, j), at(rank, j));
    const u64 inv = powmod(at(rank, col), p - 2, p);
    for (int j = col; j < cols; ++j) at(rank, j) = mulmod(at(rank, j), inv, p);
    for (int i = rank + 1; i < rows; ++i) {
      const u64 f = at(i, col);
      if (f == 0) continue;
      const u64 neg = p - f;
      for (int j = col; j < cols; ++j) {
        const u64 pr = at(rank, j);
        if (pr == 0) continue;
        at(i, j) = static_cast<u64>((static_cast<u128>(neg) * pr + at(i, j)) % p);
      }
    }
    ++rank;
  }
  return rank;
}

bool is_singular_exact(const CombMatrix& m, u64 prime_seed) {
  const int full = std::min(m.rows(), m.cols());
  if (m.is_square() && m.has_zero_column()) return true;
  if (has_repeated_rows(m)) return true;
  if (m.is_square() && has_repeated_columns(m)) return true;
  const auto primes = prime_pair(prime_seed);
  if (rank_mod_p(m, primes[0]) == full) return false;
  return rank_mod_p(m, primes[1]) < full;
}

}  // namespace combilab
