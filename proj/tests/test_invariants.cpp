#include <random>

#include "doctest.h"
#include "testutil.hpp"
#include "valstab/invariants.hpp"

using namespace valstab;
using namespace valstab::invariants;
using namespace testutil;

namespace {

// Ample + nonnegative nef combination stays ample: rejection-free sampler.
struct AmpleSampler {
  ToricVariety x;
  DivisorClass base;
  std::vector<DivisorClass> nef_gens;
  std::mt19937_64 rng;

  DivisorClass draw() {
    auto q = [&](long lo_num, long hi_num, long den) {
      Rational r(lo_num + static_cast<long>(rng() % static_cast<unsigned long>(hi_num - lo_num + 1)), den);
      r.canonicalize();
      return r;
    };
    DivisorClass l = base.scaled(q(1, 6, 2));
    for (const auto& g : nef_gens) l = l + g.scaled(q(0, 4, 3));
    return l;
  }

  IntVec draw_valuation(int budget) {
    while (true) {
      IntVec v(static_cast<size_t>(x.rank()));
      bool nonzero = false;
      for (auto& c : v) {
        c = static_cast<long>(rng() % static_cast<unsigned long>(2 * budget + 1)) - budget;
        nonzero = nonzero || c != 0;
      }
      if (nonzero) return primitive_part(v);
    }
  }
};

AmpleSampler sampler_p2(unsigned seed) { return {p2(), p2_H(), {p2_H()}, std::mt19937_64(seed)}; }
AmpleSampler sampler_p1xp1(unsigned seed) {
  return {p1xp1(), p1xp1_H1() + p1xp1_H2(), {p1xp1_H1(), p1xp1_H2()}, std::mt19937_64(seed)};
}
AmpleSampler sampler_f1(unsigned seed) {
  return {f1(), f1_fiber() + f1_section(), {f1_fiber(), f1_section()}, std::mt19937_64(seed)};
}

}  // namespace

TEST_CASE("volume examples") {
  CHECK(volume(p2(), p2_H().scaled(Rational(3))) == Q(9));
  CHECK(volume(p1xp1(), p1xp1_H1() + p1xp1_H2().scaled(Rational(2))) == Q(4));
  auto z = f1();
  CHECK(volume(z, anticanonical(z)) == Q(8));
}

TEST_CASE("volume profiles match hand-derived polynomials") {
  auto x = p2();
  auto L = p2_H().scaled(Rational(3));

  auto p1 = volume_profile(x, L, toric::ToricValuation(iv({1, 0})));
  CHECK(p1.tau() == Q(3));
  CHECK(p1.f.pieces.size() == 1);
  CHECK(p1.f.pieces[0] == Polynomial(QVec{Q(9), Q(-6), Q(1)}));  // (3-x)^2

  auto p2v = volume_profile(x, L, toric::ToricValuation(iv({1, 1})));
  CHECK(p2v.tau() == Q(3));
  CHECK(p2v.f.pieces.size() == 1);
  CHECK(p2v.f.pieces[0] == Polynomial(QVec{Q(9), Q(0), Q(-1)}));  // 9 - x^2

  auto z = f1();
  auto pz = volume_profile(z, anticanonical(z), toric::ToricValuation(iv({0, 1})));
  CHECK(pz.tau() == Q(2));
  REQUIRE(pz.f.pieces.size() == 1);
  CHECK(pz.f.pieces[0] == Polynomial(QVec{Q(8), Q(-2), Q(-1)}));  // 9 - (x+1)^2
  CHECK(pz.vol0 == Q(8));
  CHECK(pz.m0 == Q(-1));
  CHECK(pz.base == Q(-1));

  CHECK_THROWS_WITH_AS(volume_profile(p1xp1(), p1xp1_H1(), toric::ToricValuation(iv({1, 0}))),
                       "profile undefined", InputError);
}

TEST_CASE("tau examples") {
  CHECK(tau(p2(), p2_H().scaled(Rational(3)), toric::ToricValuation(iv({1, 0}))) == Q(3));
  CHECK(tau(p1xp1(), p1xp1_H1() + p1xp1_H2().scaled(Rational(2)),
            toric::ToricValuation(iv({1, 0}))) == Q(1));
  auto z = f1();
  CHECK(tau(z, anticanonical(z), toric::ToricValuation(iv({0, 1}))) == Q(2));
}

TEST_CASE("S invariant examples (both routes agree internally)") {
  CHECK(s_invariant(p2(), p2_H().scaled(Rational(3)), toric::ToricValuation(iv({1, 0}))) == Q(9));
  CHECK(s_invariant(p2(), p2_H().scaled(Rational(3)), toric::ToricValuation(iv({1, 1}))) == Q(18));
  CHECK(s_invariant(p1xp1(), p1xp1_H1() + p1xp1_H2().scaled(Rational(2)),
                    toric::ToricValuation(iv({1, 1}))) == Q(6));
  auto z = f1();
  CHECK(s_invariant(z, anticanonical(z), toric::ToricValuation(iv({0, 1}))) == Q(28, 3));
  CHECK(s_invariant(z, anticanonical(z), toric::ToricValuation(iv({0, -1}))) == Q(20, 3));
}

TEST_CASE("j invariant examples") {
  CHECK(j_invariant(p2(), p2_H().scaled(Rational(3)), toric::ToricValuation(iv({1, 0}))) == Q(18));
  CHECK(j_invariant(p1xp1(), p1xp1_H1() + p1xp1_H2().scaled(Rational(2)),
                    toric::ToricValuation(iv({1, 0}))) == Q(2));
  auto z = f1();
  CHECK(j_invariant(z, anticanonical(z), toric::ToricValuation(iv({0, 1}))) == Q(20, 3));
}

TEST_CASE("slope examples") {
  CHECK(slope_mu(p2(), p2_H().scaled(Rational(3))) == Q(1));
  CHECK(slope_mu(p1xp1(), p1xp1_H1() + p1xp1_H2().scaled(Rational(2))) == Q(3, 2));
  auto z = f1();
  CHECK(slope_mu(z, anticanonical(z)) == Q(1));
  CHECK_THROWS_AS(slope_mu(z, f1_fiber()), InputError);
}

TEST_CASE("nef thresholds") {
  auto [s1, t1] = nef_thresholds(p2(), p2_H().scaled(Rational(3)));
  CHECK(s1 == Q(1));
  CHECK(t1 == Q(1));
  auto [s2, t2] = nef_thresholds(p1xp1(), p1xp1_H1() + p1xp1_H2().scaled(Rational(2)));
  CHECK(s2 == Q(1));
  CHECK(t2 == Q(2));
  auto z = f1();
  auto [s3, t3] = nef_thresholds(z, anticanonical(z));
  CHECK(s3 == Q(1));
  CHECK(t3 == Q(1));
}

TEST_CASE("volume derivative examples") {
  auto x = p2();
  auto L = p2_H().scaled(Rational(3));
  // self-derivative: n Vol
  auto d1 = vol_derivative(x, L, L);
  CHECK(d1.exact);
  CHECK(d1.value == Q(18));
  // d/dt Vol((3-t)H) = -6 at t=0
  auto d2 = vol_derivative(x, L, -p2_H());
  CHECK(d2.value == Q(-6));
  // P1xP1 along K: d/dt 2(1-2t)(2-2t) = -12
  auto y = p1xp1();
  auto Ly = p1xp1_H1() + p1xp1_H2().scaled(Rational(2));
  CHECK(vol_derivative(y, Ly, toric::canonical_class(y)).value == Q(-12));
  CHECK_THROWS_AS(vol_derivative(y, p1xp1_H1(), p1xp1_H2()), InputError);  // not big
}

TEST_CASE("volume derivative: finite-difference fallback brackets the exact value") {
  auto y = p1xp1();
  auto Ly = p1xp1_H1() + p1xp1_H2().scaled(Rational(2));
  auto exact = vol_derivative(y, Ly, toric::canonical_class(y));
  auto fd = vol_derivative(y, Ly, toric::canonical_class(y), DerivativeMode::FiniteDifference);
  CHECK_FALSE(fd.exact);
  CHECK(abs(fd.value - exact.value) <= fd.error_bound);
  auto z = f1();
  auto ex2 = derivative_integral(z, anticanonical(z), toric::ToricValuation(iv({0, 1})),
                                 toric::canonical_class(z));
  auto fd2 = derivative_integral(z, anticanonical(z), toric::ToricValuation(iv({0, 1})),
                                 toric::canonical_class(z), DerivativeMode::FiniteDifference);
  CHECK(abs(fd2.value - ex2.value) <= fd2.error_bound);
}

TEST_CASE("self-derivative identity on random ample classes") {
  for (auto mk : {0, 1, 2}) {
    auto smp = mk == 0 ? sampler_p2(101) : mk == 1 ? sampler_p1xp1(102) : sampler_f1(103);
    for (int i = 0; i < 5; ++i) {
      auto L = smp.draw();
      CHECK(vol_derivative(smp.x, L, L).value == Rational(smp.x.rank()) * volume(smp.x, L));
    }
  }
}

TEST_CASE("beta examples") {
  auto x = p2();
  auto L = p2_H().scaled(Rational(3));
  CHECK(beta_direct(x, L, toric::ToricValuation(iv({1, 0}))).value == Q(0));
  CHECK(beta_direct(x, L, toric::ToricValuation(iv({1, 1}))).value == Q(0));

  auto y = p1xp1();
  auto Ly = p1xp1_H1() + p1xp1_H2().scaled(Rational(2));
  CHECK(beta_direct(y, Ly, toric::ToricValuation(iv({1, 0}))).value == Q(0));
  CHECK(beta_rewritten(y, Ly, toric::ToricValuation(iv({1, 1})), BetaForm::STildeForm).value ==
        Q(0));

  auto z = f1();
  auto mk = anticanonical(z);
  CHECK(beta_direct(z, mk, toric::ToricValuation(iv({0, 1}))).value == Q(-4, 3));
  CHECK(beta_direct(z, mk, toric::ToricValuation(iv({0, -1}))).value == Q(4, 3));
  CHECK(beta_rewritten(z, mk, toric::ToricValuation(iv({0, -1})), BetaForm::SForm).value ==
        Q(4, 3));
  CHECK(beta_rewritten(z, mk, toric::ToricValuation(iv({0, -1})), BetaForm::STildeForm).value ==
        Q(4, 3));
  CHECK_THROWS_AS(beta_direct(z, f1_fiber(), toric::ToricValuation(iv({0, 1}))), InputError);
}

TEST_CASE("three beta forms agree on random samples") {
  for (auto mk : {0, 1, 2}) {
    auto smp = mk == 0 ? sampler_p2(7) : mk == 1 ? sampler_p1xp1(8) : sampler_f1(9);
    for (int i = 0; i < 6; ++i) {
      auto L = smp.draw();
      toric::ToricValuation f(smp.draw_valuation(3));
      auto b0 = beta_direct(smp.x, L, f).value;
      CHECK(beta_rewritten(smp.x, L, f, BetaForm::SForm).value == b0);
      CHECK(beta_rewritten(smp.x, L, f, BetaForm::STildeForm).value == b0);
    }
  }
}

TEST_CASE("Fano identity") {
  for (auto& v : {iv({1, 0}), iv({1, 1}), iv({-2, 1})})
    CHECK(beta_fano_identity_check(p2(), toric::ToricValuation(v)));
  for (auto& v : {iv({1, 0}), iv({0, -1}), iv({3, -2})})
    CHECK(beta_fano_identity_check(p1xp1(), toric::ToricValuation(v)));
  for (auto& v : {iv({0, 1}), iv({0, -1}), iv({-1, 1})})
    CHECK(beta_fano_identity_check(f1(), toric::ToricValuation(v)));
  for (auto& v : {iv({1, 0, 0}), iv({1, 1, 1}), iv({-1, 2, 0})})
    CHECK(beta_fano_identity_check(p3(), toric::ToricValuation(v)));
}

TEST_CASE("integration by parts: both routes equal (n+1) S") {
  for (auto mk : {0, 1, 2}) {
    auto smp = mk == 0 ? sampler_p2(21) : mk == 1 ? sampler_p1xp1(22) : sampler_f1(23);
    for (int i = 0; i < 4; ++i) {
      auto L = smp.draw();
      toric::ToricValuation f(smp.draw_valuation(3));
      Rational S = s_invariant(smp.x, L, f);
      Rational target = Rational(smp.x.rank() + 1) * S;
      CHECK(derivative_integral(smp.x, L, f, L).value == target);
      CHECK(derivative_integral_pointwise(smp.x, L, f, L) == target);
    }
  }
  // and in dimension three
  auto w = p3();
  auto L = p3_H().scaled(Rational(2));
  toric::ToricValuation f(iv({1, -1, 0}));
  CHECK(derivative_integral(w, L, f, L).value == Rational(4) * s_invariant(w, L, f));
}

TEST_CASE("norm relations hold exactly") {
  for (auto mk : {0, 1, 2}) {
    auto smp = mk == 0 ? sampler_p2(31) : mk == 1 ? sampler_p1xp1(32) : sampler_f1(33);
    const Rational n(smp.x.rank());
    for (int i = 0; i < 8; ++i) {
      auto L = smp.draw();
      toric::ToricValuation f(smp.draw_valuation(4));
      Rational volL = volume(smp.x, L);
      Rational t = tau(smp.x, L, f);
      Rational S = s_invariant(smp.x, L, f);
      Rational j = volL * t - S;
      Rational lo = volL * t / (n + 1);
      Rational hi = n * volL * t / (n + 1);
      CHECK(lo <= S);
      CHECK(S <= hi);
      CHECK(lo <= j);
      CHECK(j <= hi);
    }
  }
}

TEST_CASE("slope sandwich s <= mu <= s~") {
  for (auto mk : {0, 1, 2}) {
    auto smp = mk == 0 ? sampler_p2(41) : mk == 1 ? sampler_p1xp1(42) : sampler_f1(43);
    for (int i = 0; i < 8; ++i) {
      auto L = smp.draw();
      auto [s, st] = nef_thresholds(smp.x, L);
      Rational mu = slope_mu(smp.x, L);
      CHECK(s <= mu);
      CHECK(mu <= st);
    }
  }
}

TEST_CASE("homogeneity of S and beta") {
  auto z = f1();
  auto L = anticanonical(z);
  toric::ToricValuation f(iv({0, 1}));
  std::mt19937_64 rng(55);
  for (int i = 0; i < 5; ++i) {
    Rational k(1 + static_cast<long>(rng() % 6), 1 + static_cast<long>(rng() % 4));
    k.canonicalize();
    auto kL = L.scaled(k);
    CHECK(s_invariant(z, kL, f) == pow_int(k, 3) * s_invariant(z, L, f));
    CHECK(beta_direct(z, kL, f).value == pow_int(k, 2) * beta_direct(z, L, f).value);
    CHECK(tau(z, kL, f) == k * tau(z, L, f));
  }
}

TEST_CASE("profile concavity consequences") {
  // Vol(L-xF)^(1/n) concave: geometric-mean midpoint test p(m)^2 >= p(a)p(b)
  // plus the differential form n p p'' <= (n-1) (p')^2 at rational samples,
  // plus the lower bound Vol (1 - x/tau)^n.
  for (auto mk : {0, 1, 2}) {
    auto smp = mk == 0 ? sampler_p2(61) : mk == 1 ? sampler_p1xp1(62) : sampler_f1(63);
    const long n = smp.x.rank();
    for (int i = 0; i < 4; ++i) {
      auto L = smp.draw();
      toric::ToricValuation f(smp.draw_valuation(3));
      auto prof = volume_profile(smp.x, L, f);
      Rational t = prof.tau();
      for (int k = 1; k < 8; ++k) {
        Rational a = t * Rational(k - 1) / 8, m = t * Rational(k) / 8,
                 b = t * Rational(k + 1) / 8;
        CHECK(prof.eval(m) * prof.eval(m) >= prof.eval(a) * prof.eval(b));
        Rational lower = prof.vol0 * pow_int(1 - m / t, n);
        CHECK(prof.eval(m) >= lower);
      }
      for (size_t pi = 0; pi < prof.f.pieces.size(); ++pi) {
        const auto& piece = prof.f.pieces[pi];
        auto d1 = piece.derivative();
        auto d2 = d1.derivative();
        for (int k = 1; k < 4; ++k) {
          Rational xq = prof.f.breaks[pi] +
                        (prof.f.breaks[pi + 1] - prof.f.breaks[pi]) * Rational(k) / 4;
          CHECK(Rational(n) * piece.eval(xq) * d2.eval(xq) <=
                Rational(n - 1) * d1.eval(xq) * d1.eval(xq));
        }
      }
    }
  }
}

TEST_CASE("delta examples") {
  auto d1 = delta_toric(p2(), p2_H().scaled(Rational(3)), 5);
  CHECK(d1.value == Q(1));
  auto y = p1xp1();
  auto d2 = delta_toric(y, anticanonical(y), 5);
  CHECK(d2.value == Q(1));
  auto z = f1();
  auto d3 = delta_toric(z, anticanonical(z), 5);
  CHECK(d3.value == Q(6, 7));
  CHECK(d3.value < Q(1));
  // the ratio at (0,1) is exactly 8 / (28/3) = 6/7 and attains the minimum
  Rational ratio = toric::log_discrepancy(z, toric::ToricValuation(iv({0, 1}))) *
                   volume(z, anticanonical(z)) /
                   s_invariant(z, anticanonical(z), toric::ToricValuation(iv({0, 1})));
  CHECK(ratio == d3.value);
}

TEST_CASE("zeta examples") {
  CHECK(zeta_toric(p2(), p2_H().scaled(Rational(3)), 5).value == Q(0));
  auto z = f1();
  auto r = zeta_toric(z, anticanonical(z), 5);
  CHECK(r.value == Q(-1, 7));
  CHECK(r.minimizer == iv({0, 1}));
  auto y = p1xp1();
  CHECK(zeta_toric(y, p1xp1_H1() + p1xp1_H2().scaled(Rational(2)), 5).value == Q(0));
  CHECK(zeta_toric(y, anticanonical(y), 5).value == Q(0));
}

TEST_CASE("zeta via the upper-deck filter") {
  auto u1 = zeta_ud(p2(), p2_H().scaled(Rational(3)), 5, Q(1));
  CHECK_FALSE(u1.empty_filter);
  CHECK(u1.zeta_ud == Q(0));
  auto z = f1();
  auto u2 = zeta_ud(z, anticanonical(z), 5, Q(1));
  CHECK(u2.zeta_ud == Q(-1, 7));
  CHECK(u2.c_l == Q(1) - Q(1, 7));
  CHECK(u2.filtered > 0);
  CHECK(u2.filtered <= u2.total);
  auto y = p1xp1();
  auto u3 = zeta_ud(y, anticanonical(y), 5, Q(1));
  CHECK(u3.zeta_ud == Q(0));
  CHECK_THROWS_AS(zeta_ud(y, anticanonical(y), 5, Q(0)), InputError);
}

TEST_CASE("zeta lower bound and budget monotonicity") {
  for (auto mk : {0, 1, 2}) {
    auto smp = mk == 0 ? sampler_p2(71) : mk == 1 ? sampler_p1xp1(72) : sampler_f1(73);
    const Rational n(smp.x.rank());
    for (int i = 0; i < 3; ++i) {
      auto L = smp.draw();
      Rational z2 = zeta_toric(smp.x, L, 2).value;
      Rational z3 = zeta_toric(smp.x, L, 3).value;
      CHECK(z3 <= z2);
      Rational delta = delta_toric(smp.x, L, 3).value;
      auto [s, st] = nef_thresholds(smp.x, L);
      CHECK(z3 >= delta + n * slope_mu(smp.x, L) - (n + 1) * st);
    }
  }
}

TEST_CASE("reports carry the right fields") {
  auto z = f1();
  auto rep = make_report(z, anticanonical(z), toric::ToricValuation(iv({0, 1})));
  CHECK(rep.ample);
  CHECK(rep.A.value == Q(1));
  CHECK(rep.vol.value == Q(8));
  CHECK(rep.tau.value == Q(2));
  CHECK(rep.S.value == Q(28, 3));
  CHECK(rep.j.value == Q(20, 3));
  REQUIRE(rep.beta_direct.has_value());
  CHECK(rep.beta_direct->value == Q(-4, 3));
  CHECK(rep.beta_direct->exact);
  REQUIRE(rep.beta_over_S.has_value());
  CHECK(rep.beta_over_S->value == Q(-1, 7));

  // big but not ample: restricted report
  auto yb = make_report(z, f1_section(), toric::ToricValuation(iv({0, 1})));
  CHECK_FALSE(yb.ample);
  CHECK_FALSE(yb.mu.has_value());
  CHECK_FALSE(yb.beta_direct.has_value());
  CHECK(yb.vol.value == Q(1));

  // finite-difference mode marks fields approximate
  auto repfd = make_report(z, anticanonical(z), toric::ToricValuation(iv({0, 1})),
                           DerivativeMode::FiniteDifference);
  REQUIRE(repfd.beta_direct.has_value());
  CHECK_FALSE(repfd.beta_direct->exact);
  CHECK(abs(repfd.beta_direct->value - Q(-4, 3)) <= repfd.beta_direct->error_bound);
}

TEST_CASE("three-dimensional invariants sanity: P1xP1xP1") {
  auto w = p1p1p1();
  auto L = p1p1p1_H(0) + p1p1p1_H(1) + p1p1p1_H(2);  // ~ -K/2... coefficients (1,0,1,0,1,0)
  CHECK(volume(w, L) == Q(6));
  toric::ToricValuation f(iv({1, 0, 0}));
  CHECK(tau(w, L, f) == Q(1));
  // profile: 6(1-x)... Vol((1-x)H1 + H2 + H3) = 6(1-x)
  auto prof = volume_profile(w, L, f);
  CHECK(prof.f.pieces.size() == 1);
  CHECK(prof.f.pieces[0] == Polynomial(QVec{Q(6), Q(-6)}));
  CHECK(s_invariant(w, L, f) == Q(3));
  CHECK(slope_mu(w, L) == Q(2));  // -K ~ 2L
  auto b = beta_direct(w, L, f);
  // Fano-type symmetry: expect 0 by the product structure
  CHECK(b.value == Q(0));
  CHECK(beta_fano_identity_check(w, f));
  CHECK(beta_fano_identity_check(w, toric::ToricValuation(iv({1, -1, 2}))));
}
