#pragma once

// Dense linear algebra on Eigen expressions. Everything here is a free function
// template over Eigen::MatrixBase, so callers can pass blocks, transposes or
// products without materializing them first.

#include "combilab/error.hpp"
#include "combilab/types.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace combilab {

inline constexpr double kRankThreshold = 1e-12;

/// Singular values in decreasing order.
template <typename Derived>
Vector<typename Derived::Scalar> singular_values(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() == 0 || a.cols() == 0) return Vector<Scalar>();
  Eigen::BDCSVD<Matrix<Scalar>> svd(a.eval());
  return svd.singularValues();
}

/// Largest singular value (operator norm l2 -> l2).
template <typename Derived>
typename Derived::Scalar operator_norm(const Eigen::MatrixBase<Derived>& a) {
  const auto s = singular_values(a);
  return s.size() == 0 ? typename Derived::Scalar(0) : s(0);
}

/// Column-pivoted QR of a spanning set with its numerical rank.
template <typename Scalar>
struct SpanFactorization {
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr;
  Eigen::Index rank = 0;
};

/// Factorizes the columns of `w`. A pivot counts toward the rank when
/// |R_ii| > threshold * scale, where scale defaults to the largest column norm.
template <typename Derived>
SpanFactorization<typename Derived::Scalar> factor_span(
    const Eigen::MatrixBase<Derived>& w, double threshold = kRankThreshold,
    typename Derived::Scalar scale = typename Derived::Scalar(-1)) {
  using Scalar = typename Derived::Scalar;
  SpanFactorization<Scalar> f;
  f.qr.compute(w.eval());
  const auto& r = f.qr.matrixR();
  const Eigen::Index k = std::min(w.rows(), w.cols());
  if (scale < Scalar(0)) scale = k > 0 ? std::abs(r(0, 0)) : Scalar(0);
  const Scalar cut = Scalar(threshold) * scale;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < k; ++i)
    if (std::abs(r(i, i)) > cut) ++rank;
  f.rank = rank;
  return f;
}

/// Orthogonal projection of v onto the span recorded in f.
template <typename Scalar, typename Derived>
Vector<Scalar> project_onto(const SpanFactorization<Scalar>& f, const Eigen::MatrixBase<Derived>& v) {
  Vector<Scalar> y = f.qr.householderQ().transpose() * v;
  y.tail(y.size() - f.rank).setZero();
  return f.qr.householderQ() * y;
}

/// Distance from v to the span recorded in f.
template <typename Scalar, typename Derived>
Scalar distance_to(const SpanFactorization<Scalar>& f, const Eigen::MatrixBase<Derived>& v) {
  Vector<Scalar> y = f.qr.householderQ().transpose() * v;
  return y.tail(y.size() - f.rank).norm();
}

/// Euclidean distance from v to the span of the columns of w.
template <typename DerivedV, typename DerivedW>
typename DerivedV::Scalar dist_to_span(const Eigen::MatrixBase<DerivedV>& v,
                                       const Eigen::MatrixBase<DerivedW>& w) {
  if (w.cols() == 0) throw ParameterError("dist_to_span: spanning set is empty");
  if (v.cols() != 1 || v.rows() != w.rows())
    throw ParameterError("dist_to_span: dimension mismatch (" + std::to_string(v.rows()) + " vs " +
                         std::to_string(w.rows()) + ")");
  return distance_to(factor_span(w), v);
}

/// Biorthogonal pair: columns of e and f satisfy <e_i, f_j> = delta_ij.
template <typename Scalar>
struct BiorthPair {
  Matrix<Scalar> e;
  Matrix<Scalar> f;
};

/// Dual system of a basis given as the columns of e: f = (e^{-1})^T.
/// Throws SingularityError when s_min(e) <= 1e-10 * s_max(e).
template <typename Derived>
BiorthPair<typename Derived::Scalar> biorthogonal_duals(const Eigen::MatrixBase<Derived>& e) {
  using Scalar = typename Derived::Scalar;
  if (e.rows() != e.cols() || e.rows() == 0)
    throw ParameterError("biorthogonal_duals: need n linearly independent n-vectors");
  const auto s = singular_values(e);
  if (!(s(s.size() - 1) > Scalar(1e-10) * s(0)))
    throw SingularityError("biorthogonal_duals: basis is numerically singular");
  BiorthPair<Scalar> out;
  out.e = e;
  out.f = e.transpose().partialPivLu().solve(Matrix<Scalar>::Identity(e.rows(), e.cols()));
  return out;
}

/// Orthogonal projector onto the hyperplane {x : sum x_i = 0} in R^n.
template <typename Scalar = double>
Matrix<Scalar> zero_sum_projector(Eigen::Index n) {
  return Matrix<Scalar>::Identity(n, n) - Matrix<Scalar>::Constant(n, n, Scalar(1) / Scalar(n));
}

/// ||A restricted to the zero-sum hyperplane||, computed as ||A P||.
template <typename Derived>
typename Derived::Scalar restricted_opnorm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  return operator_norm((a * zero_sum_projector<Scalar>(a.cols())).eval());
}

}  // namespace combilab
