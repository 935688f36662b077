#include "combilab/sampler.hpp"

#include "combilab/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace combilab {

namespace {

void check_row_params(int n, int d) {
  if (n < 1) throw ParameterError("dimension n must be positive, got " + std::to_string(n));
  if (d < 1 || d > n)
    throw ParameterError("ones count d must satisfy 1 <= d <= n, got d=" + std::to_string(d) +
                         " n=" + std::to_string(n));
}

}  // namespace

RowVector::RowVector(int n, std::vector<int> support) : n_(n), support_(std::move(support)) {
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i] < 0 || support_[i] >= n_) throw ParameterError("row support index out of range");
    if (i > 0 && support_[i] <= support_[i - 1])
      throw ParameterError("row support must be strictly increasing");
  }
}

CombMatrix::CombMatrix(int n, int d, std::vector<RowVector> rows)
    : n_(n), d_(d), rows_(std::move(rows)) {
  check_row_params(n, d);
  if (rows_.empty() || static_cast<int>(rows_.size()) > n_)
    throw ParameterError("row count m must satisfy 1 <= m <= n");
  for (const auto& r : rows_) {
    if (r.size() != n_ || r.ones() != d_) throw ParameterError("row does not belong to the model");
  }
}

std::vector<int> CombMatrix::column_sums() const {
  std::vector<int> sums(static_cast<std::size_t>(n_), 0);
  for (const auto& r : rows_)
    for (int j : r.support()) ++sums[static_cast<std::size_t>(j)];
  return sums;
}

bool CombMatrix::has_zero_column() const {
  const auto sums = column_sums();
  return std::find(sums.begin(), sums.end(), 0) != sums.end();
}

bool CombMatrix::rows_sum_to_d() const {
  return std::all_of(rows_.begin(), rows_.end(), [&](const RowVector& r) {
    long long s = 0;
    for (int j = 0; j < r.size(); ++j)
      s += std::binary_search(r.support().begin(), r.support().end(), j) ? 1 : 0;
    return s == d_;
  });
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > cap) return cap;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t saturating_pow(std::uint64_t base, int exp) {
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
  unsigned __int128 r = 1;
  for (int i = 0; i < exp; ++i) {
    r *= base;
    if (r > cap) return cap;
  }
  return static_cast<std::uint64_t>(r);
}

RowVector sample_row(int n, int d, Rng& rng) {
  check_row_params(n, d);
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < d; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n - i));
    std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
  }
  idx.resize(static_cast<std::size_t>(d));
  std::sort(idx.begin(), idx.end());
  return RowVector(n, std::move(idx));
}

RowVector sample_row(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  return sample_row(n, d, rng);
}

CombMatrix sample_matrix(int m, int n, int d, const SeedSpec& seed) {
  check_row_params(n, d);
  if (m < 1 || m > n) throw ParameterError("row count m must satisfy 1 <= m <= n");
  std::vector<RowVector> rows;
  rows.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    rows.push_back(sample_row(n, d, derive_seed(seed, static_cast<std::uint64_t>(i))));
  return CombMatrix(n, d, std::move(rows));
}

std::vector<RowVector> enumerate_rows(int n, int d) {
  check_row_params(n, d);
  const std::uint64_t count = binomial(n, d);
  if (count > kRowEnumerationBudget)
    throw CapacityError("C(" + std::to_string(n) + "," + std::to_string(d) +
                        ") exceeds the row enumeration budget");
  std::vector<RowVector> out;
  out.reserve(count);
  std::vector<int> comb(static_cast<std::size_t>(d));
  std::iota(comb.begin(), comb.end(), 0);
  while (true) {
    out.emplace_back(n, comb);
    int i = d - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - d + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < d; ++j)
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

MatrixEnumeration::MatrixEnumeration(int m, int n, int d) : m_(m), n_(n), d_(d) {
  check_row_params(n, d);
  if (m < 1 || m > n) throw ParameterError("row count m must satisfy 1 <= m <= n");
  count_ = saturating_pow(binomial(n, d), m);
  if (count_ > kMatrixEnumerationBudget)
    throw CapacityError("C(" + std::to_string(n) + "," + std::to_string(d) + ")^" +
                        std::to_string(m) + " exceeds the matrix enumeration budget");
  rows_ = enumerate_rows(n, d);
}

CombMatrix MatrixEnumeration::at(std::uint64_t index) const {
  const auto base = static_cast<std::uint64_t>(rows_.size());
  std::vector<RowVector> picked(static_cast<std::size_t>(m_));
  for (int r = m_ - 1; r >= 0; --r) {
    picked[static_cast<std::size_t>(r)] = rows_[static_cast<std::size_t>(index % base)];
    index /= base;
  }
  return CombMatrix(n_, d_, std::move(picked));
}

MatrixEnumeration enumerate_matrices(int m, int n, int d) { return MatrixEnumeration(m, n, d); }

}  // namespace combilab
