#ifndef VALSTAB_POLYNOMIAL_HPP
#define VALSTAB_POLYNOMIAL_HPP

#include <vector>

#include "valstab/rational.hpp"

namespace valstab {

/**
 * Univariate polynomial with exact rational coefficients, dense
 * representation c[0] + c[1] x + ... with trailing zeros trimmed.
 */
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(QVec coeffs) : c_(std::move(coeffs)) { trim(); }
  static Polynomial constant(Rational v) { return Polynomial(QVec{std::move(v)}); }

  /// Degree, or -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const QVec& coeffs() const { return c_; }
  Rational coeff(size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

  Rational eval(const Rational& x) const;
  Polynomial derivative() const;
  Polynomial antiderivative() const;  // constant term zero
  Rational integrate(const Rational& a, const Rational& b) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(const Rational& s) const;
  bool operator==(const Polynomial& o) const { return c_ == o.c_; }

  /// Unique interpolating polynomial through distinct nodes (xs, ys),
  /// computed by Newton divided differences in exact arithmetic.
  static Polynomial interpolate(const QVec& xs, const QVec& ys);

 private:
  void trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }
  QVec c_;
};

std::string to_string(const Polynomial& p);

/**
 * Continuous piecewise polynomial on [breaks.front(), breaks.back()] with one
 * piece per consecutive breakpoint pair.
 */
struct PiecewisePolynomial {
  QVec breaks;                    // strictly increasing, size k+1
  std::vector<Polynomial> pieces; // size k

  Rational eval(const Rational& x) const;
  Rational integrate_all() const;
  /// Largest breakpoint (right end of the domain).
  const Rational& sup() const { return breaks.back(); }
  /// Verifies pieces agree at interior breakpoints; throws InternalError.
  void check_continuity() const;
};

}  // namespace valstab

#endif
