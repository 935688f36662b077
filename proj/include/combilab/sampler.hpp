#pragma once

#include "combilab/seed.hpp"
#include "combilab/types.hpp"

#include <cstdint>
#include <iterator>
#include <vector>

namespace combilab {

/// A 0/1 row of length n given by its sorted support of exactly d indices.
class RowVector {
 public:
  RowVector() = default;
  /// Throws ParameterError unless support is strictly increasing within [0, n).
  RowVector(int n, std::vector<int> support);

  int size() const { return n_; }
  int ones() const { return static_cast<int>(support_.size()); }
  const std::vector<int>& support() const { return support_; }

  template <typename Scalar = double>
  Vector<Scalar> dense() const {
    Vector<Scalar> v = Vector<Scalar>::Zero(n_);
    for (int j : support_) v(j) = Scalar(1);
    return v;
  }

  friend bool operator==(const RowVector&, const RowVector&) = default;

 private:
  int n_ = 0;
  std::vector<int> support_;
};

/// m x n 0/1 matrix with every row summing to d, stored row-wise as supports.
class CombMatrix {
 public:
  CombMatrix() = default;
  /// Throws ParameterError if a row has the wrong length or weight, or m > n.
  CombMatrix(int n, int d, std::vector<RowVector> rows);

  int rows() const { return static_cast<int>(rows_.size()); }
  int cols() const { return n_; }
  int ones_per_row() const { return d_; }
  bool is_square() const { return rows() == n_; }
  const RowVector& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  const std::vector<RowVector>& row_list() const { return rows_; }

  template <typename Scalar = double>
  Matrix<Scalar> dense() const {
    Matrix<Scalar> a = Matrix<Scalar>::Zero(rows(), n_);
    for (int i = 0; i < rows(); ++i)
      for (int j : rows_[static_cast<std::size_t>(i)].support()) a(i, j) = Scalar(1);
    return a;
  }

  std::vector<int> column_sums() const;
  bool has_zero_column() const;
  /// Integer check that M * 1 = d * 1.
  bool rows_sum_to_d() const;

  friend bool operator==(const CombMatrix&, const CombMatrix&) = default;

 private:
  int n_ = 0;
  int d_ = 0;
  std::vector<RowVector> rows_;
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);
/// base^exp, saturating at UINT64_MAX.
std::uint64_t saturating_pow(std::uint64_t base, int exp);

inline constexpr std::uint64_t kRowEnumerationBudget = 1'000'000;
inline constexpr std::uint64_t kMatrixEnumerationBudget = 10'000'000;

/// Uniform support of size d in [0, n): partial Fisher-Yates shuffle, then sort.
RowVector sample_row(int n, int d, std::uint64_t seed);
RowVector sample_row(int n, int d, Rng& rng);

/// Independent uniform rows; row i is drawn from derive_seed(seed, i).
CombMatrix sample_matrix(int m, int n, int d, const SeedSpec& seed);

/// All C(n, d) rows in lexicographic support order.
std::vector<RowVector> enumerate_rows(int n, int d);

/// Random-access view over all C(n,d)^m matrices of the model. Index i maps to
/// the matrix whose row r is enumerate_rows(n,d)[digit r of i in base C(n,d)],
/// with row 0 the most significant digit.
class MatrixEnumeration {
 public:
  MatrixEnumeration(int m, int n, int d);

  std::uint64_t size() const { return count_; }
  CombMatrix at(std::uint64_t index) const;
  const std::vector<RowVector>& row_choices() const { return rows_; }
  int rows() const { return m_; }

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = CombMatrix;
    using difference_type = std::ptrdiff_t;
    using pointer = const CombMatrix*;
    using reference = CombMatrix;

    iterator(const MatrixEnumeration* owner, std::uint64_t index) : owner_(owner), index_(index) {}
    CombMatrix operator*() const { return owner_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      iterator old = *this;
      ++index_;
      return old;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.index_ == b.index_; }

   private:
    const MatrixEnumeration* owner_;
    std::uint64_t index_;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, count_}; }

 private:
  int m_;
  int n_;
  int d_;
  std::vector<RowVector> rows_;
  std::uint64_t count_;
};

/// Throws CapacityError when C(n,d)^m exceeds the matrix budget.
MatrixEnumeration enumerate_matrices(int m, int n, int d);

}  // namespace combilab
