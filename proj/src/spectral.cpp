#include "combilab/spectral.hpp"

#include "combilab/exact_rank.hpp"

#include <cmath>

namespace combilab {

namespace {

bool decide_singular(const CombMatrix& m, double s1, double sn) {
  if (sn > kSingularityMargin * s1) return false;
  return is_singular_exact(m);
}

/// Power iteration for the top eigenvalue of A^T A.
double top_singular_value(const MatrixXd& a, double rel_tol, int max_iterations) {
  VectorXd v = VectorXd::Ones(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += 1e-3 * std::sin(static_cast<double>(i + 1));
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    const VectorXd u = a.transpose() * (a * v);
    const double next = v.dot(u);
    const double un = u.norm();
    if (un == 0.0) return 0.0;
    v = u / un;
    if (it > 0 && std::abs(next - lambda) <= rel_tol * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

}  // namespace

SpectralSummary spectrum(const CombMatrix& m) {
  const MatrixXd a = m.dense();
  const VectorXd s = singular_values(a);
  SpectralSummary out;
  out.m = m.rows();
  out.n = m.cols();
  out.d = m.ones_per_row();
  out.s1 = s(0);
  out.sn = s(s.size() - 1);
  const double p = static_cast<double>(out.d) / static_cast<double>(out.n);
  out.centered_opnorm = operator_norm((a.array() - p).matrix());
  out.exactly_singular = decide_singular(m, out.s1, out.sn);
  if (out.exactly_singular) {
    out.sn = 0.0;
    out.kappa = ExtReal::infinity();
  } else {
    out.kappa = ExtReal(out.s1 / out.sn);
  }
  return out;
}

ExtremeSingularValues extreme_singular_values_svd(const CombMatrix& m) {
  const VectorXd s = singular_values(m.dense());
  ExtremeSingularValues out;
  out.s1 = s(0);
  out.sn = s(s.size() - 1);
  out.exactly_singular = decide_singular(m, out.s1, out.sn);
  if (out.exactly_singular) out.sn = 0.0;
  return out;
}

ExtremeSingularValues extreme_singular_values_lu(const CombMatrix& m, double rel_tol,
                                                 int max_iterations) {
  if (!m.is_square()) throw ParameterError("extreme_singular_values_lu: matrix must be square");
  const MatrixXd a = m.dense();
  ExtremeSingularValues out;
  out.s1 = top_singular_value(a, rel_tol, max_iterations);
  if (m.has_zero_column()) {
    out.exactly_singular = true;
    return out;
  }
  const Eigen::PartialPivLU<MatrixXd> lu(a);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot > kSingularityMargin * out.s1) && is_singular_exact(m)) {
    out.exactly_singular = true;
    return out;
  }

  Rng rng(0x1f0a'7e57ULL);
  VectorXd v(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
  v.normalize();
  double mu = 0.0;
  int it = 0;
  for (; it < max_iterations; ++it) {
    const VectorXd y = lu.transpose().solve(v);
    const double next = y.squaredNorm();
    const VectorXd u = lu.solve(y);
    v = u / u.norm();
    if (it > 0 && std::abs(next - mu) <= rel_tol * next) {
      mu = next;
      break;
    }
    mu = next;
  }
  out.iterations = it + 1;
  out.sn = 1.0 / std::sqrt(mu);
  if (!std::isfinite(out.sn) || out.sn <= kSingularityMargin * out.s1) {
    if (is_singular_exact(m)) {
      out.exactly_singular = true;
      out.sn = 0.0;
    }
  }
  return out;
}

UpperBoundCertificate<double> witness_certificate(const CombMatrix& m) {
  if (!m.is_square()) throw ParameterError("witness_certificate: matrix must be square");
  if (is_singular_exact(m)) throw SingularityError("witness_certificate: matrix is exactly singular");
  return certificate_from_dense(m.dense());
}

DecompositionReport decomposition_check(const CombMatrix& m) {
  if (!m.is_square()) throw ParameterError("decomposition_check: matrix must be square");
  if (is_singular_exact(m)) throw SingularityError("decomposition_check: matrix is exactly singular");
  return decomposition_from_dense(m.dense());
}

}  // namespace combilab
