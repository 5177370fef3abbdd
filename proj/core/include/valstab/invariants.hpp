#ifndef VALSTAB_INVARIANTS_HPP
#define VALSTAB_INVARIANTS_HPP

#include <optional>
#include <vector>

#include "valstab/polynomial.hpp"
#include "valstab/toric.hpp"

namespace valstab::invariants {

using toric::DivisorClass;
using toric::ToricValuation;
using toric::ToricVariety;

/**
 * The function x -> Vol(L - xF) on [0, tau] as an exact piecewise polynomial.
 *
 * The slicing origin is the support-function value psi_L(v): the order of
 * vanishing of a general section is min <u,v> - psi_L(v), which is zero for
 * nef L and positive for big classes whose base locus contains the valuation
 * center (the profile then starts with a flat piece).
 */
struct VolumeProfile {
  PiecewisePolynomial f;
  Rational base;  // psi_L(v), the slicing origin
  Rational m0;    // min over P_L of <u, v>
  Rational vol0;  // Vol(L) = f(0)

  const Rational& tau() const { return f.sup(); }
  Rational eval(const Rational& x) const { return f.eval(x); }
  Rational integrate() const { return f.integrate_all(); }
};

/// A computed quantity, exact unless produced by the finite-difference
/// fallback, in which case `error_bound` carries the Richardson residual.
struct TaggedValue {
  Rational value;
  bool exact = true;
  Rational error_bound = Rational(0);
};

/// Everything the library knows about one pair (L, F).  Fields past `S` and
/// `j` require an ample polarization and stay empty for merely big classes.
struct InvariantReport {
  int n = 0;
  bool ample = false;
  TaggedValue A, vol, tau, S, j;
  std::optional<TaggedValue> mu, s, stilde;
  std::optional<TaggedValue> beta_direct, beta_s_form, beta_stilde_form, beta_over_S;
};

Rational volume(const ToricVariety& x, const DivisorClass& d);

/// Throws InputError("profile undefined") when L is not big.
VolumeProfile volume_profile(const ToricVariety& x, const DivisorClass& l,
                             const ToricValuation& f);

/// Pseudo-effective threshold sup { x : Vol(L - xF) > 0 }.
Rational tau(const ToricVariety& x, const DivisorClass& l, const ToricValuation& f);

/**
 * S_L(F) = integral of Vol(L - xF) over [0, infinity), computed by exact
 * quadrature of the volume profile and independently by the layer-cake
 * identity; the two routes must agree exactly.
 */
Rational s_invariant(const ToricVariety& x, const DivisorClass& l, const ToricValuation& f);

/// j_L(F) = Vol(L) tau_L(F) - S_L(F).
Rational j_invariant(const ToricVariety& x, const DivisorClass& l, const ToricValuation& f);

/// mu(L) = (-K_X . L^{n-1}) / L^n for ample L.  The numerator is computed by
/// nef-decomposed interpolation and cross-checked against the facet formula.
Rational slope_mu(const ToricVariety& x, const DivisorClass& l);

/// (s(L), s~(L)): the sup of s with -K - sL ample and the inf of s with
/// K + sL ample, read off the wall inequalities exactly.
std::pair<Rational, Rational> nef_thresholds(const ToricVariety& x, const DivisorClass& l);

enum class DerivativeMode { Exact, FiniteDifference };

struct DerivativeResult {
  Rational value;
  bool exact;
  Rational error_bound;  // zero in exact mode
};

/**
 * d/dt Vol(D + tG) at t = 0 for big D.  The exact route locates the
 * combinatorial breakpoints of the parametric section polytope, interpolates
 * the one-sided volume polynomials, and checks that the two one-sided
 * derivatives agree (C^1 differentiability of the volume); disagreement
 * raises InternalError("kink detected ...").
 */
DerivativeResult vol_derivative(const ToricVariety& x, const DivisorClass& d,
                                const DivisorClass& g,
                                DerivativeMode mode = DerivativeMode::Exact);

/**
 * The derivative part of the beta invariant along a direction G:
 *   integral over [0, tau] of d/dt Vol(L - xF + tG) dx
 * evaluated exactly as d/dt S_{L+tG}(F) at t = 0 (the integral and the
 * derivative commute; both sides are piecewise polynomial).
 */
DerivativeResult derivative_integral(const ToricVariety& x, const DivisorClass& l,
                                     const ToricValuation& f, const DivisorClass& g,
                                     DerivativeMode mode = DerivativeMode::Exact);

/// Pointwise d/dt Vol(L - xF + tG) at t = 0 for one fixed x.
Rational pointwise_vol_derivative(const ToricVariety& x, const DivisorClass& l,
                                  const ToricValuation& f, const DivisorClass& g,
                                  const Rational& x_value);

/**
 * Independent route for the derivative part: per profile piece, interpolate
 * the pointwise t-derivative in x from interior nodes and integrate.  Slower
 * than derivative_integral but shares none of its code path.
 */
Rational derivative_integral_pointwise(const ToricVariety& x, const DivisorClass& l,
                                       const ToricValuation& f, const DivisorClass& g);

/// beta_L(F) = A Vol(L) + n mu(L) S_L(F) + integral of Vol'(L-xF).K_X.
TaggedValue beta_direct(const ToricVariety& x, const DivisorClass& l, const ToricValuation& f,
                        DerivativeMode mode = DerivativeMode::Exact);

enum class BetaForm { SForm, STildeForm };

/// The two rewrites of beta through the ampleness thresholds s(L) and s~(L).
TaggedValue beta_rewritten(const ToricVariety& x, const DivisorClass& l, const ToricValuation& f,
                           BetaForm form, DerivativeMode mode = DerivativeMode::Exact);

/// At L = -K_X the beta invariant collapses to A Vol - S; verifies exactly.
bool beta_fano_identity_check(const ToricVariety& x, const ToricValuation& f);

struct MinimizerResult {
  Rational value;
  IntVec minimizer;       // lexicographically first attaining vector
  size_t candidates = 0;  // size of the enumerated valuation set
};

/// min over primitive |v|_inf <= budget of A(v) Vol(L) / S_L(v).
MinimizerResult delta_toric(const ToricVariety& x, const DivisorClass& l, int budget);

/// min over primitive |v|_inf <= budget of beta_L(v) / S_L(v).
MinimizerResult zeta_toric(const ToricVariety& x, const DivisorClass& l, int budget);

struct ZetaUdResult {
  Rational zeta_ud;     // equals zeta over the filtered set (C_L when empty)
  Rational c_l;         // the filter constant delta + n mu - (n+1) s~ + c
  size_t filtered = 0;  // valuations passing the filter
  size_t total = 0;
  bool empty_filter = false;
  IntVec minimizer;
};

/**
 * zeta over the valuations passing the filter beta <= C_L S with
 * C_L = delta(L) + n mu(L) - (n+1) s~(L) + c; agreement with zeta_toric on
 * the same budget is asserted whenever the filtered set is nonempty.
 */
ZetaUdResult zeta_ud(const ToricVariety& x, const DivisorClass& l, int budget,
                     const Rational& c);

/// Full report for one pair; restricted to the big-class invariants when L is
/// not ample.  FiniteDifference mode marks the derivative-backed fields
/// approximate and attaches error bounds.
InvariantReport make_report(const ToricVariety& x, const DivisorClass& l,
                            const ToricValuation& f,
                            DerivativeMode mode = DerivativeMode::Exact);

}  // namespace valstab::invariants

#endif
