#pragma once

#include "combilab/linalg.hpp"
#include "combilab/sampler.hpp"

#include <Eigen/LU>

#include <vector>

namespace combilab {

/// Extreme singular values and related norms of one model matrix.
struct SpectralSummary {
  int m = 0;
  int n = 0;
  int d = 0;
  double s1 = 0.0;
  /// Smallest of the min(m, n) singular values.
  double sn = 0.0;
  /// s1 / sn; infinite exactly when the matrix is singular.
  ExtReal kappa;
  /// ||M - E M|| with E M = (d/n) J.
  double centered_opnorm = 0.0;
  bool exactly_singular = false;
};

/// Full dense SVD route. Singularity is decided exactly: a computed sn above
/// kSingularityMargin * s1 is far outside the backward error of the SVD and
/// proves full rank; anything below goes to is_singular_exact.
SpectralSummary spectrum(const CombMatrix& m);

inline constexpr double kSingularityMargin = 1e-9;

/// s1 and sn only, without the centered norm.
struct ExtremeSingularValues {
  double s1 = 0.0;
  double sn = 0.0;
  bool exactly_singular = false;
  /// Inverse-iteration sweeps used (0 on the SVD route).
  int iterations = 0;
};

ExtremeSingularValues extreme_singular_values_svd(const CombMatrix& m);

/// Fast square-only route: s1 by power iteration on M^T M, sn by inverse
/// iteration on (M^T M)^{-1} = M^{-1} M^{-T} through one LU factorization.
ExtremeSingularValues extreme_singular_values_lu(const CombMatrix& m, double rel_tol = 1e-13,
                                                 int max_iterations = 3000);

/// Residual of the first row against the span of the others, and the bound
/// it implies: sn(M) <= ||x|| / ||(M^T)^{-1} x||.
template <typename Scalar>
struct UpperBoundCertificate {
  Vector<Scalar> x;
  Scalar x_norm{};
  Scalar image_norm{};
  Scalar bound{};
  /// max_{i>=2} |<X_i, x>| / ||x||.
  Scalar orthogonality_residual{};
};

/// ||x|| / ||(A^T)^{-1} x|| for any nonzero x: an upper bound on sn(A).
template <typename DerivedA, typename DerivedX>
typename DerivedA::Scalar certificate_bound(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedX>& x) {
  using Scalar = typename DerivedA::Scalar;
  const Vector<Scalar> z = a.transpose().partialPivLu().solve(x.eval());
  return x.norm() / z.norm();
}

/// Certificate for a square invertible dense matrix whose rows are X_1..X_n.
/// Throws SingularityError when the rows X_2..X_n are numerically dependent.
template <typename Derived>
UpperBoundCertificate<typename Derived::Scalar> certificate_from_dense(
    const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = a.rows();
  if (n != a.cols() || n < 1) throw ParameterError("witness_certificate: matrix must be square");
  UpperBoundCertificate<Scalar> c;
  const Vector<Scalar> x1 = a.row(0).transpose();
  if (n == 1) {
    c.x = x1;
  } else {
    const Matrix<Scalar> w = a.bottomRows(n - 1).transpose();
    const auto f = factor_span(w, kRankThreshold, operator_norm(a));
    if (f.rank < n - 1) throw SingularityError("witness_certificate: rows 2..n are rank deficient");
    c.x = x1 - project_onto(f, x1);
  }
  c.x_norm = c.x.norm();
  if (!(c.x_norm > Scalar(0))) throw SingularityError("witness_certificate: first row lies in the span");
  const Vector<Scalar> z = a.transpose().partialPivLu().solve(c.x);
  c.image_norm = z.norm();
  c.bound = c.x_norm / c.image_norm;
  Scalar ortho = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    ortho = std::max(ortho, std::abs(a.row(i).dot(c.x.transpose())) / c.x_norm);
  c.orthogonality_residual = ortho;
  return c;
}

/// Throws SingularityError for exactly singular M.
UpperBoundCertificate<double> witness_certificate(const CombMatrix& m);

/// Residuals of the biorthogonal decomposition of ||(M^T)^{-1} x||^2.
struct DecompositionReport {
  /// max_{i,j>=2} |<X_i, Y_j> - delta_ij|
  double biorthogonality = 0.0;
  /// max_{k>=2} | ||Y_k|| * dist(X_k, H_{1,k}) - 1 |
  double dual_norm = 0.0;
  /// | ||(M^T)^{-1} x||^2 - (1 + sum_k <X_1, Y_k>^2) | / (1 + sum_k ...)
  double energy = 0.0;
  double energy_lhs = 0.0;
  double energy_rhs = 0.0;
  /// a_k = |<X_1, Y_k>| / ||Y_k|| and b_k = dist(X_k, H_{1,k}) for k = 2..n (index k-2).
  std::vector<double> a;
  std::vector<double> b;

  double max_residual() const { return std::max({biorthogonality, dual_norm, energy}); }
};

template <typename Derived>
DecompositionReport decomposition_from_dense(const Eigen::MatrixBase<Derived>& a_in) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> a = a_in;
  const Eigen::Index n = a.rows();
  if (n != a.cols() || n < 2) throw ParameterError("decomposition_check: need a square matrix, n >= 2");
  const Scalar s1 = operator_norm(a);
  const Matrix<Scalar> w = a.bottomRows(n - 1).transpose();
  const auto h1 = factor_span(w, kRankThreshold, s1);
  if (h1.rank < n - 1) throw SingularityError("decomposition_check: H_1 is degenerate");

  Eigen::PartialPivLU<Matrix<Scalar>> lu(a);
  const Matrix<Scalar> inv = lu.inverse();
  const Vector<Scalar> x1 = a.row(0).transpose();

  Matrix<Scalar> y(n, n - 1);
  for (Eigen::Index k = 1; k < n; ++k) y.col(k - 1) = project_onto(h1, inv.col(k));

  DecompositionReport rep;
  const Matrix<Scalar> gram = a.bottomRows(n - 1) * y;
  rep.biorthogonality = static_cast<double>(
      (gram - Matrix<Scalar>::Identity(n - 1, n - 1)).cwiseAbs().maxCoeff());

  Scalar energy_sum = 1;
  for (Eigen::Index k = 1; k < n; ++k) {
    Scalar b_k;
    if (n == 2) {
      b_k = a.row(k).norm();
    } else {
      Matrix<Scalar> others(n, n - 2);
      Eigen::Index c = 0;
      for (Eigen::Index i = 1; i < n; ++i)
        if (i != k) others.col(c++) = a.row(i).transpose();
      const auto f = factor_span(others, kRankThreshold, s1);
      if (f.rank < n - 2)
        throw RankError("decomposition_check: H_{1," + std::to_string(k + 1) + "} is degenerate",
                        static_cast<int>(k + 1));
      b_k = distance_to(f, a.row(k).transpose());
    }
    const Scalar y_norm = y.col(k - 1).norm();
    const Scalar inner = x1.dot(y.col(k - 1));
    energy_sum += inner * inner;
    rep.a.push_back(static_cast<double>(std::abs(inner) / y_norm));
    rep.b.push_back(static_cast<double>(b_k));
    rep.dual_norm = std::max(rep.dual_norm, static_cast<double>(std::abs(y_norm * b_k - Scalar(1))));
  }

  const Vector<Scalar> x = x1 - project_onto(h1, x1);
  const Vector<Scalar> z = lu.transpose().solve(x);
  rep.energy_lhs = static_cast<double>(z.squaredNorm());
  rep.energy_rhs = static_cast<double>(energy_sum);
  rep.energy = std::abs(rep.energy_lhs - rep.energy_rhs) / rep.energy_rhs;
  return rep;
}

/// Throws SingularityError for exactly singular M and RankError naming k when
/// some span{X_i : i not in {1, k}} is degenerate.
DecompositionReport decomposition_check(const CombMatrix& m);

}  // namespace combilab
