#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace combilab {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// Nonnegative extended real: a finite value or +infinity. Infinity is a flag,
/// never a stored float infinity, so serializers can emit the literal "inf".
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr explicit ExtReal(double v) : value_(v) {}

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
  }
  /// Maps a float infinity (or NaN from 0/0 style degeneracies) onto the flag.
  static ExtReal from_double(double v) {
    return std::isfinite(v) ? ExtReal(v) : infinity();
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }
  /// Finite value; meaningless when infinite.
  constexpr double value() const { return value_; }
  double to_double() const { return infinite_ ? HUGE_VAL : value_; }

  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend constexpr bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// "%.12g"-style text, or "inf".
std::string format_real(double v, int significant = 12);
std::string format_real(const ExtReal& v, int significant = 12);

}  // namespace combilab
