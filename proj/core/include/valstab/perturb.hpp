#ifndef VALSTAB_PERTURB_HPP
#define VALSTAB_PERTURB_HPP

#include <vector>

#include "valstab/invariants.hpp"
#include "valstab/toric.hpp"

namespace valstab::perturb {

using toric::DivisorClass;
using toric::ToricVariety;

/**
 * A basis (A_1, ..., A_rho) of N^1(X) of nef classes adapted to an ample
 * center L: the coefficients t_i of L in the basis are positive and sum to
 * one.  The basis induces the norm |sum s_i A_i| = sum |s_i| in which the
 * perturbation neighbourhoods are measured.
 */
struct NefBasis {
  std::vector<DivisorClass> classes;  // the A_i, each nef
  QVec t;                             // L = sum t_i A_i, t_i > 0, sum = 1
  Rational t0;                        // min_i t_i
  DivisorClass center;                // L

  /**
   * Builds the adapted basis from spanning nef generators: solves
   * L = sum c_i G_i exactly, requires c_i > 0, and rescales A_i = k c_i G_i
   * so the coefficients become t_i = 1/k.
   */
  static NefBasis build(const ToricVariety& x, const DivisorClass& l,
                        const std::vector<DivisorClass>& nef_generators);

  /// Exact coordinates of H in the basis (modulo numerical equivalence).
  QVec coordinates(const ToricVariety& x, const DivisorClass& h) const;
};

/// The basis norm sum |s_i| of H.
Rational nef_basis_norm(const ToricVariety& x, const NefBasis& basis, const DivisorClass& h);

struct SandwichResult {
  Rational a;       // |L' - L| / t0
  bool upper_nef;   // (1+a)L - L' passed the wall test
  bool lower_nef;   // L' - (1-a)L passed the wall test
};

/**
 * The two-sided comparison (1-a)L <= L' <= (1+a)L with a = |L'-L|/t0.
 * Both sandwich classes must verify nef; failure raises InternalError, since
 * the construction guarantees they are nonnegative nef combinations.
 */
SandwichResult sandwich_bound(const ToricVariety& x, const NefBasis& basis,
                              const DivisorClass& lprime);

struct SEstimateRecord {
  IntVec v;
  Rational s_l, s_lprime;
  bool pass_lower;  // s^-(eps) S_{L'} <= S_L, with s^- rounded up
  bool pass_upper;  // S_L <= s^+(eps) S_{L'}, with s^+ rounded down
};

struct SEstimateResult {
  Rational eps;
  RatInterval s_minus, s_plus;  // rigorous rational enclosures of s^-+(eps)
  std::vector<SEstimateRecord> records;
  bool all_pass = true;
};

/**
 * Checks s^-(eps) S_{L'}(F) <= S_L(F) <= s^+(eps) S_{L'}(F) for every
 * supplied valuation, where s^-+(eps) = (1 -+ eps^(1/2)/(1+eps^(1/4)))^(n+1).
 * The radicals are enclosed in dyadic brackets of width 2^-precision_bits and
 * rounded against the verdict, so a reported pass is rigorous.
 *
 * Pre: L' = L + eps H with |H| = 1 in the basis norm, both ample, and eps
 * small enough that L -+ cH and L' -+ cH stay big for
 * c = (1 + eps^(1/4)) eps^(1/2); otherwise InputError("eps too large...").
 */
SEstimateResult check_s_estimate(const ToricVariety& x, const NefBasis& basis,
                                 const DivisorClass& l, const DivisorClass& lprime,
                                 const std::vector<IntVec>& valuations, const Rational& eps,
                                 unsigned precision_bits = 100);

struct ModulusRow {
  Rational eps;
  bool skipped = false;     // L + eps H was not ample
  Rational f_hat;           // max over all budget valuations, clamped at 0
  Rational f_hat_filtered;  // same over the D^ud filter of L'
  Rational h_hat;           // slope-term modulus, clamped at 0
};

struct ModulusTable {
  DivisorClass direction;  // normalized H
  std::vector<ModulusRow> rows;  // in decreasing eps order
  bool f_monotone = true;  // f_hat nonincreasing as eps decreases
  bool h_monotone = true;
};

/**
 * Empirical perturbation moduli along one direction: for each eps,
 *   f_hat(eps)  = max_v (beta_L(v) - beta_{L+eps H}(v)) / S_{L+eps H}(v)
 * clamped below at zero (and the slope analogue h_hat); evidence that the
 * beta comparison degrades no worse than a modulus vanishing with eps.
 * The direction is normalized to unit basis norm before use.
 */
ModulusTable measure_beta_modulus(const ToricVariety& x, const NefBasis& basis,
                                  const DivisorClass& direction, const QVec& eps_grid,
                                  int budget, const Rational& filter_c);

/**
 * Rigorous lower bound for zeta(L') from zeta(L), the S-comparison bracket,
 * and the measured modulus: zeta(L') >= zeta(L) s^-+ - f_hat, with the
 * bracket end chosen against the sign of zeta(L).
 */
Rational zeta_transfer_bound(const Rational& zeta_l, const RatInterval& s_minus,
                             const RatInterval& s_plus, const Rational& f_hat);

}  // namespace valstab::perturb

#endif
