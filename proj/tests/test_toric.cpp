#include <algorithm>
#include <random>

#include "doctest.h"
#include "testutil.hpp"
#include "valstab/polytope.hpp"

using namespace valstab;
using namespace valstab::toric;
using namespace testutil;
using ratgeom::dual_description;

TEST_CASE("variety validation") {
  CHECK_THROWS_AS(ToricVariety(2, {iv({2, 0}), iv({0, 1}), iv({-1, -1})}, {{0, 1}, {1, 2}, {0, 2}}),
                  InputError);  // non-primitive ray
  CHECK_THROWS_AS(ToricVariety(2, {iv({1, 0}), iv({0, 1})}, {{0, 1}}),
                  InputError);  // fan covers only one quadrant
  CHECK_THROWS_AS(ToricVariety(2, {iv({1, 0}), iv({1, 1})}, {{0}, {1}}),
                  InputError);  // cones not full-dimensional
  CHECK_NOTHROW(p2());
  CHECK_NOTHROW(p1xp1());
  CHECK_NOTHROW(f1());
  CHECK_NOTHROW(p3());
  CHECK_NOTHROW(p1p1p1());
}

TEST_CASE("canonical class") {
  CHECK(canonical_class(p2()).a == QVec(3, Rational(-1)));
  CHECK(canonical_class(p1xp1()).a == QVec(4, Rational(-1)));
  CHECK(canonical_class(f1()).a == QVec(4, Rational(-1)));
}

TEST_CASE("section polytopes match hand-derived vertex sets") {
  auto x = p2();
  auto v = dual_description(section_polytope(x, p2_H().scaled(Rational(3))));
  REQUIRE(v.vertices.size() == 3);  // translate of 3 * standard simplex
  CHECK(ratgeom::euclidean_volume(v) == Q(9, 2));

  auto y = p1xp1();
  auto L = p1xp1_H1() + p1xp1_H2().scaled(Rational(2));
  auto vy = dual_description(section_polytope(y, L));
  REQUIRE(vy.vertices.size() == 4);  // translate of [0,1] x [0,2]
  CHECK(ratgeom::euclidean_volume(vy) == Q(2));

  auto z = f1();
  auto vz = dual_description(section_polytope(z, anticanonical(z)));
  std::vector<QVec> expect{qv({-1, -1}), qv({-1, 1}), qv({0, -1}), qv({2, 1})};
  CHECK(vz.vertices == expect);
}

TEST_CASE("positivity predicates") {
  auto x = p2();
  CHECK(is_ample(x, p2_H().scaled(Rational(3))));
  CHECK(is_nef(x, p2_H()));
  CHECK(is_big(x, p2_H()));

  auto z = f1();
  CHECK(is_ample(z, anticanonical(z)));
  CHECK(is_nef(z, f1_fiber()));
  CHECK_FALSE(is_ample(z, f1_fiber()));
  CHECK_FALSE(is_big(z, f1_fiber()));
  CHECK(is_nef(z, f1_section()));
  CHECK_FALSE(is_ample(z, f1_section()));
  CHECK_FALSE(is_nef(z, f1_exceptional()));
  // h is nef and big (its polytope is 2-dimensional)
  CHECK(is_big(z, f1_section()));

  auto y = p1xp1();
  CHECK(is_nef(y, p1xp1_H1()));
  CHECK_FALSE(is_ample(y, p1xp1_H1()));
  CHECK_FALSE(is_big(y, p1xp1_H1()));  // polytope is a segment
  CHECK(is_ample(y, p1xp1_H1() + p1xp1_H2()));
}

TEST_CASE("log discrepancy") {
  auto x = p2();
  CHECK(log_discrepancy(x, ToricValuation(iv({1, 0}))) == Q(1));
  CHECK(log_discrepancy(x, ToricValuation(iv({1, 1}))) == Q(2));
  CHECK(log_discrepancy(x, ToricValuation(iv({-1, 0}))) == Q(2));
  auto y = p1xp1();
  CHECK(log_discrepancy(y, ToricValuation(iv({2, 1}))) == Q(3));
  // every ray generator has log discrepancy 1
  auto z = f1();
  for (auto& v : z.rays()) CHECK(log_discrepancy(z, ToricValuation(v)) == Q(1));
  CHECK_THROWS_AS(ToricValuation(iv({2, 2})), InputError);
  CHECK_THROWS_AS(ToricValuation(iv({0, 0})), InputError);
}

TEST_CASE("support values") {
  auto z = f1();
  auto mk = anticanonical(z);
  CHECK(support_value(z, mk, iv({0, 1})) == Q(-1));
  CHECK(support_value(z, mk, iv({1, 1})) == Q(-2));
  // support function of an ample class equals the polytope minimum
  auto h = section_polytope(z, mk);
  auto v = dual_description(h);
  for (auto& dir : {iv({1, 0}), iv({2, 1}), iv({-1, -3}), iv({0, -1})}) {
    Rational mn = linalg::dot(dir, v.vertices[0]);
    for (auto& u : v.vertices) mn = std::min(mn, linalg::dot(dir, u));
    CHECK(support_value(z, mk, dir) == mn);
  }
}

TEST_CASE("intersection numbers") {
  auto y = p1xp1();
  CHECK(intersection_number(y, {p1xp1_H1(), p1xp1_H2()}) == Q(1));
  CHECK(intersection_number(y, {p1xp1_H1(), p1xp1_H1()}) == Q(0));
  auto z = f1();
  CHECK(intersection_number(z, {anticanonical(z), anticanonical(z)}) == Q(8));
  CHECK(intersection_number(z, {f1_fiber(), f1_fiber()}) == Q(0));
  CHECK(intersection_number(z, {f1_fiber(), f1_section()}) == Q(1));
  CHECK(intersection_number(z, {f1_section(), f1_section()}) == Q(1));
  auto x = p3();
  CHECK(intersection_number(x, {p3_H(), p3_H(), p3_H()}) == Q(1));
  // non-nef inputs are rejected, callers must pre-decompose
  CHECK_THROWS_WITH_AS(intersection_number(z, {canonical_class(z), anticanonical(z)}),
                       "interpolation region empty", InputError);
}

TEST_CASE("intersection numbers: symmetry and multilinearity on nef tuples") {
  auto z = f1();
  auto f = f1_fiber(), h = f1_section();
  CHECK(intersection_number(z, {f, h}) == intersection_number(z, {h, f}));
  // (f + 2h) . h = f.h + 2 h.h
  auto lhs = intersection_number(z, {f + h.scaled(Rational(2)), h});
  CHECK(lhs == intersection_number(z, {f, h}) + Rational(2) * intersection_number(z, {h, h}));
  auto w = p1p1p1();
  auto a = p1p1p1_H(0), b = p1p1p1_H(1), c = p1p1p1_H(2);
  CHECK(intersection_number(w, {a, b, c}) == Q(1));
  CHECK(intersection_number(w, {a, a, b}) == Q(0));
  CHECK(intersection_number(w, {a + b, a + b, c}) == Q(2));
}

TEST_CASE("volume equals top self-intersection on nef classes") {
  auto z = f1();
  for (auto& d : {anticanonical(z), f1_section(), f1_fiber() + f1_section().scaled(Rational(3))}) {
    std::vector<DivisorClass> tuple(2, d);
    CHECK(volume_of_class(z, d) == intersection_number(z, tuple));
  }
  auto w = p1p1p1();
  auto d = p1p1p1_H(0) + p1p1p1_H(1).scaled(Rational(2)) + p1p1p1_H(2).scaled(Rational(3));
  std::vector<DivisorClass> tuple(3, d);
  CHECK(volume_of_class(w, d) == intersection_number(w, tuple));  // 3! * 6 = 36
  CHECK(volume_of_class(w, d) == Q(36));
}

TEST_CASE("volume homogeneity and monotonicity") {
  std::mt19937_64 rng(4242);
  auto z = f1();
  auto L = anticanonical(z);
  for (int t = 0; t < 8; ++t) {
    Rational a(1 + static_cast<long>(rng() % 7), 1 + static_cast<long>(rng() % 5));
    a.canonicalize();
    CHECK(volume_of_class(z, L.scaled(a)) == pow_int(a, 2) * volume_of_class(z, L));
    QVec eff(4);
    for (auto& e : eff) e = Q(static_cast<long>(rng() % 3));
    CHECK(volume_of_class(z, L + DivisorClass(eff)) >= volume_of_class(z, L));
  }
}

TEST_CASE("numerical equivalence") {
  auto z = f1();
  CHECK(z.numerically_equal(dc({1, 0, 0, 0}), dc({0, 0, 1, 0})));  // D0 ~ D2
  CHECK(z.numerically_equal(dc({0, 0, 0, 1}), dc({0, 1, 1, 0})));  // h ~ E + f
  CHECK_FALSE(z.numerically_equal(f1_fiber(), f1_section()));
  CHECK(z.picard_rank() == 2);
  CHECK(p2().picard_rank() == 1);
  CHECK(p1p1p1().picard_rank() == 3);
}

TEST_CASE("primitive vector enumeration") {
  CHECK(primitive_vectors(2, 1).size() == 8);
  CHECK(primitive_vectors(2, 2).size() == 16);
  CHECK(primitive_vectors(3, 1).size() == 26);
  auto vs = primitive_vectors(2, 3);
  CHECK(std::is_sorted(vs.begin(), vs.end()));
  for (auto& v : vs) CHECK(gcd_all(v) == 1);
  // both signs present
  CHECK(std::find(vs.begin(), vs.end(), iv({0, 1})) != vs.end());
  CHECK(std::find(vs.begin(), vs.end(), iv({0, -1})) != vs.end());
  CHECK_THROWS_AS(primitive_vectors(2, 0), InputError);
}
