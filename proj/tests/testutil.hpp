#ifndef VALSTAB_TESTUTIL_HPP
#define VALSTAB_TESTUTIL_HPP

#include <initializer_list>

#include "valstab/toric.hpp"

namespace testutil {

using valstab::IntVec;
using valstab::QVec;
using valstab::Rational;
using valstab::Zint;
using valstab::toric::DivisorClass;
using valstab::toric::ToricVariety;

inline Rational Q(long n, long d = 1) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline IntVec iv(std::initializer_list<long> xs) {
  IntVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline QVec qv(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline DivisorClass dc(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.emplace_back(x);
  return DivisorClass(std::move(v));
}

// Projective plane: rays e1, e2, -e1-e2.  H ~ the third ray divisor.
inline ToricVariety p2() {
  return ToricVariety(2, {iv({1, 0}), iv({0, 1}), iv({-1, -1})}, {{0, 1}, {1, 2}, {0, 2}});
}
inline DivisorClass p2_H() { return dc({0, 0, 1}); }

// P1 x P1: rays e1, -e1, e2, -e2.  H1 ~ D_{e1}, H2 ~ D_{e2}.
inline ToricVariety p1xp1() {
  return ToricVariety(2, {iv({1, 0}), iv({-1, 0}), iv({0, 1}), iv({0, -1})},
                      {{0, 2}, {1, 2}, {1, 3}, {0, 3}});
}
inline DivisorClass p1xp1_H1() { return dc({1, 0, 0, 0}); }
inline DivisorClass p1xp1_H2() { return dc({0, 0, 1, 0}); }

// First Hirzebruch surface (blow-up of P2 at a point):
// rays (1,0), (0,1), (-1,1), (0,-1).  f ~ D_0 is the fiber, h ~ D_3 the
// section at infinity, E ~ D_1 the exceptional (-1)-curve; -K ~ f + 2h.
inline ToricVariety f1() {
  return ToricVariety(2, {iv({1, 0}), iv({0, 1}), iv({-1, 1}), iv({0, -1})},
                      {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}
inline DivisorClass f1_fiber() { return dc({1, 0, 0, 0}); }
inline DivisorClass f1_section() { return dc({0, 0, 0, 1}); }
inline DivisorClass f1_exceptional() { return dc({0, 1, 0, 0}); }

// Projective 3-space.
inline ToricVariety p3() {
  return ToricVariety(3, {iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 1}), iv({-1, -1, -1})},
                      {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}
inline DivisorClass p3_H() { return dc({0, 0, 0, 1}); }

// P1 x P1 x P1: rays +-e1, +-e2, +-e3 (in that order), octant cones.
inline ToricVariety p1p1p1() {
  std::vector<IntVec> rays{iv({1, 0, 0}), iv({-1, 0, 0}), iv({0, 1, 0}),
                           iv({0, -1, 0}), iv({0, 0, 1}), iv({0, 0, -1})};
  std::vector<std::vector<int>> cones;
  for (int i : {0, 1})
    for (int j : {2, 3})
      for (int k : {4, 5}) cones.push_back({i, j, k});
  return ToricVariety(3, std::move(rays), std::move(cones));
}
inline DivisorClass p1p1p1_H(int axis) {
  QVec a(6, Rational(0));
  a[static_cast<size_t>(2 * axis)] = 1;
  return DivisorClass(std::move(a));
}

inline DivisorClass anticanonical(const ToricVariety& x) {
  return -valstab::toric::canonical_class(x);
}

}  // namespace testutil

#endif
