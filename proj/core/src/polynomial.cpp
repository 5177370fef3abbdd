#include "valstab/polynomial.hpp"

#include <algorithm>

namespace valstab {

Rational Polynomial::eval(const Rational& x) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial();
  QVec d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Rational(static_cast<long>(k));
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  if (c_.empty()) return Polynomial();
  QVec a(c_.size() + 1, Rational(0));
  for (size_t k = 0; k < c_.size(); ++k) a[k + 1] = c_[k] / Rational(static_cast<long>(k + 1));
  return Polynomial(std::move(a));
}

Rational Polynomial::integrate(const Rational& a, const Rational& b) const {
  Polynomial f = antiderivative();
  return f.eval(b) - f.eval(a);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  QVec r(std::max(c_.size(), o.c_.size()), Rational(0));
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  QVec r(std::max(c_.size(), o.c_.size()), Rational(0));
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (c_.empty() || o.c_.empty()) return Polynomial();
  QVec r(c_.size() + o.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::scaled(const Rational& s) const {
  QVec r = c_;
  for (auto& x : r) x *= s;
  return Polynomial(std::move(r));
}

Polynomial Polynomial::interpolate(const QVec& xs, const QVec& ys) {
  const size_t n = xs.size();
  if (n == 0 || ys.size() != n) throw InternalError("interpolate: bad node count");
  // Newton divided differences.
  QVec dd = ys;
  for (size_t level = 1; level < n; ++level) {
    for (size_t i = n - 1; i >= level; --i) {
      const Rational denom = xs[i] - xs[i - level];
      if (sgn(denom) == 0) throw InternalError("interpolate: repeated node");
      dd[i] = (dd[i] - dd[i - 1]) / denom;
    }
  }
  // Expand the Newton form into monomial coefficients.
  Polynomial acc;
  for (size_t i = n; i-- > 0;) {
    // acc = acc * (x - xs[i]) + dd[i]
    acc = acc * Polynomial(QVec{-xs[i], Rational(1)}) + Polynomial::constant(dd[i]);
  }
  return acc;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  const auto& c = p.coeffs();
  for (size_t k = c.size(); k-- > 0;) {
    if (sgn(c[k]) == 0) continue;
    if (!out.empty()) out += sgn(c[k]) > 0 ? " + " : " - ";
    else if (sgn(c[k]) < 0) out += "-";
    Rational a = abs(c[k]);
    const bool unit = (a == 1);
    if (k == 0 || !unit) out += to_string(a);
    if (k >= 1) {
      if (!unit) out += "*";
      out += "x";
      if (k >= 2) out += "^" + std::to_string(k);
    }
  }
  return out;
}

Rational PiecewisePolynomial::eval(const Rational& x) const {
  if (breaks.size() < 2 || x < breaks.front() || x > breaks.back())
    throw InternalError("piecewise eval outside domain");
  // Find the piece; breakpoints evaluate via the left piece (continuity makes
  // the choice immaterial).
  size_t i = 0;
  while (i + 2 < breaks.size() && x > breaks[i + 1]) ++i;
  return pieces[i].eval(x);
}

Rational PiecewisePolynomial::integrate_all() const {
  Rational total(0);
  for (size_t i = 0; i < pieces.size(); ++i)
    total += pieces[i].integrate(breaks[i], breaks[i + 1]);
  return total;
}

void PiecewisePolynomial::check_continuity() const {
  for (size_t i = 0; i + 1 < pieces.size(); ++i) {
    if (pieces[i].eval(breaks[i + 1]) != pieces[i + 1].eval(breaks[i + 1]))
      throw InternalError("piecewise polynomial discontinuous at breakpoint " +
                          to_string(breaks[i + 1]));
  }
}

}  // namespace valstab
