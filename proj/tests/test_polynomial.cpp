#include "doctest.h"
#include "valstab/polynomial.hpp"

using namespace valstab;

namespace {
Rational Q(long n, long d = 1) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}
}

TEST_CASE("polynomial arithmetic and calculus") {
  Polynomial p(QVec{Q(1), Q(0), Q(-2)});  // 1 - 2x^2
  CHECK(p.degree() == 2);
  CHECK(p.eval(Q(3)) == Q(-17));
  CHECK(p.derivative().eval(Q(3)) == Q(-12));
  CHECK(p.integrate(Q(0), Q(1)) == Q(1) - Q(2, 3));
  Polynomial q(QVec{Q(0), Q(1)});  // x
  CHECK((p * q).eval(Q(2)) == p.eval(Q(2)) * Q(2));
  CHECK((p + q).eval(Q(5)) == p.eval(Q(5)) + Q(5));
  CHECK((p - p).is_zero());
}

TEST_CASE("interpolation reproduces exact polynomials") {
  // degree 3 with awkward rational coefficients
  Polynomial target(QVec{Q(7, 3), Q(-1, 2), Q(0), Q(5, 11)});
  QVec xs{Q(-2), Q(-1, 3), Q(0), Q(4, 5)};
  QVec ys;
  for (auto& x : xs) ys.push_back(target.eval(x));
  CHECK(Polynomial::interpolate(xs, ys) == target);
}

TEST_CASE("piecewise polynomial integration and continuity check") {
  // f = x on [0,1], f = 2 - x on [1,2]
  PiecewisePolynomial f;
  f.breaks = {Q(0), Q(1), Q(2)};
  f.pieces = {Polynomial(QVec{Q(0), Q(1)}), Polynomial(QVec{Q(2), Q(-1)})};
  f.check_continuity();
  CHECK(f.integrate_all() == Q(1));
  CHECK(f.eval(Q(1, 2)) == Q(1, 2));
  CHECK(f.eval(Q(3, 2)) == Q(1, 2));

  PiecewisePolynomial bad = f;
  bad.pieces[1] = Polynomial(QVec{Q(3), Q(-1)});
  CHECK_THROWS_AS(bad.check_continuity(), InternalError);
}
