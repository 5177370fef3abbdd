#include "valstab/perturb.hpp"

#include <algorithm>

#include "valstab/linalg.hpp"

namespace valstab::perturb {

using linalg::QMat;

namespace {

// Columns of the map Q^k x M_Q -> Q^{rays}: the basis classes followed by
// the linear-equivalence directions <e_j, v_rho>.
QMat equivalence_extended_matrix(const ToricVariety& x,
                                 const std::vector<DivisorClass>& classes) {
  const size_t rows = x.ray_count();
  const size_t k = classes.size();
  const size_t n = static_cast<size_t>(x.rank());
  QMat m(rows, QVec(k + n, Rational(0)));
  for (size_t r = 0; r < rows; ++r) {
    for (size_t i = 0; i < k; ++i) m[r][i] = classes[i].a[r];
    for (size_t j = 0; j < n; ++j) m[r][k + j] = Rational(x.rays()[r][j]);
  }
  return m;
}

}  // namespace

NefBasis NefBasis::build(const ToricVariety& x, const DivisorClass& l,
                         const std::vector<DivisorClass>& nef_generators) {
  if (!toric::is_ample(x, l)) throw InputError("nef basis center must be ample");
  const size_t k = nef_generators.size();
  if (static_cast<int>(k) != x.picard_rank())
    throw InputError("nef basis needs exactly " + std::to_string(x.picard_rank()) +
                     " spanning classes");
  for (const auto& g : nef_generators)
    if (!toric::is_nef(x, g)) throw InputError("nef basis generator fails the wall test");

  QMat m = equivalence_extended_matrix(x, nef_generators);
  {
    QMat probe = m;
    if (linalg::rank(std::move(probe)) != static_cast<int>(k) + x.rank())
      throw InputError("singular basis: generators do not span N^1");
  }
  auto sol = linalg::solve_any(m, l.a);
  if (!sol) throw InternalError("nef basis: center not representable");
  for (size_t i = 0; i < k; ++i)
    if (sgn((*sol)[i]) <= 0)
      throw InputError("center has a nonpositive coordinate in the nef generators");

  NefBasis basis;
  basis.center = l;
  basis.t.assign(k, Rational(1) / Rational(static_cast<long>(k)));
  basis.t0 = basis.t.front();
  for (size_t i = 0; i < k; ++i)
    basis.classes.push_back(nef_generators[i].scaled(Rational(static_cast<long>(k)) * (*sol)[i]));
  return basis;
}

QVec NefBasis::coordinates(const ToricVariety& x, const DivisorClass& h) const {
  QMat m = equivalence_extended_matrix(x, classes);
  auto sol = linalg::solve_any(std::move(m), h.a);
  if (!sol) throw InputError("class lies outside the basis span");
  return QVec(sol->begin(), sol->begin() + static_cast<long>(classes.size()));
}

Rational nef_basis_norm(const ToricVariety& x, const NefBasis& basis, const DivisorClass& h) {
  QVec s = basis.coordinates(x, h);
  Rational norm(0);
  for (const auto& c : s) norm += abs(c);
  return norm;
}

SandwichResult sandwich_bound(const ToricVariety& x, const NefBasis& basis,
                              const DivisorClass& lprime) {
  SandwichResult out;
  out.a = nef_basis_norm(x, basis, lprime - basis.center) / basis.t0;
  DivisorClass upper = basis.center.scaled(1 + out.a) - lprime;
  DivisorClass lower = lprime - basis.center.scaled(1 - out.a);
  out.upper_nef = toric::is_nef(x, upper);
  out.lower_nef = toric::is_nef(x, lower);
  if (!out.upper_nef || !out.lower_nef)
    throw InternalError("sandwich classes failed the nef wall test at a = " + to_string(out.a));
  return out;
}

SEstimateResult check_s_estimate(const ToricVariety& x, const NefBasis& basis,
                                 const DivisorClass& l, const DivisorClass& lprime,
                                 const std::vector<IntVec>& valuations, const Rational& eps,
                                 unsigned precision_bits) {
  if (sgn(eps) <= 0) throw InputError("eps must be positive");
  if (!toric::is_ample(x, l) || !toric::is_ample(x, lprime))
    throw InputError("S-estimate requires ample classes on both sides");
  DivisorClass h = (lprime - l).scaled(1 / eps);
  if (nef_basis_norm(x, basis, h) != 1)
    throw InputError("perturbation direction is not unit-norm in the basis");

  const int n = x.rank();
  RatInterval eps_half = nth_root_bounds(eps, 2, precision_bits);
  RatInterval eps_quarter = nth_root_bounds(eps, 4, precision_bits);
  RatInterval one(Rational(1));
  RatInterval y = eps_half / (one + eps_quarter);

  SEstimateResult out;
  out.eps = eps;
  out.s_minus = (one - y).pow(static_cast<unsigned>(n + 1));
  out.s_plus = (one + y).pow(static_cast<unsigned>(n + 1));

  // Bigness precondition: both auxiliary decompositions need L -+ cH and
  // L' -+ cH big with c = (1 + eps^(1/4)) eps^(1/2); checking at the rounded-up
  // c covers the irrational value by convexity of the big cone.
  Rational c_bar = ((one + eps_quarter) * eps_half).hi;
  for (const auto& side : {l, lprime}) {
    for (int sign : {1, -1}) {
      DivisorClass probe = side + h.scaled(Rational(sign) * c_bar);
      if (!toric::is_big(x, probe)) throw InputError("eps too large for this direction");
    }
  }

  for (const auto& v : valuations) {
    toric::ToricValuation f(v);
    SEstimateRecord rec;
    rec.v = v;
    rec.s_l = invariants::s_invariant(x, l, f);
    rec.s_lprime = invariants::s_invariant(x, lprime, f);
    rec.pass_lower = out.s_minus.hi * rec.s_lprime <= rec.s_l;
    rec.pass_upper = rec.s_l <= out.s_plus.lo * rec.s_lprime;
    out.all_pass = out.all_pass && rec.pass_lower && rec.pass_upper;
    out.records.push_back(std::move(rec));
  }
  return out;
}

ModulusTable measure_beta_modulus(const ToricVariety& x, const NefBasis& basis,
                                  const DivisorClass& direction, const QVec& eps_grid,
                                  int budget, const Rational& filter_c) {
  const DivisorClass& l = basis.center;
  if (!toric::is_ample(x, l)) throw InputError("modulus center must be ample");
  Rational dn = nef_basis_norm(x, basis, direction);
  if (sgn(dn) == 0) throw InputError("zero perturbation direction");
  ModulusTable table;
  table.direction = direction.scaled(1 / dn);

  const int n = x.rank();
  const Rational nmu_l = Rational(n) * invariants::slope_mu(x, l);
  auto vs = toric::primitive_vectors(n, budget);
  QVec beta_l(vs.size()), s_l(vs.size());
  {
    DivisorClass k = toric::canonical_class(x);
    Rational voll = invariants::volume(x, l);
    for (size_t i = 0; i < vs.size(); ++i) {
      toric::ToricValuation f(vs[i]);
      Rational a = toric::log_discrepancy(x, f);
      s_l[i] = invariants::s_invariant(x, l, f);
      beta_l[i] = a * voll + nmu_l * s_l[i] +
                  invariants::derivative_integral(x, l, f, k).value;
    }
  }

  QVec grid = eps_grid;
  std::sort(grid.begin(), grid.end(), std::greater<Rational>());
  for (const auto& eps : grid) {
    ModulusRow row;
    row.eps = eps;
    DivisorClass lp = l + table.direction.scaled(eps);
    if (!toric::is_ample(x, lp)) {
      row.skipped = true;
      table.rows.push_back(std::move(row));
      continue;
    }
    const Rational nmu_lp = Rational(n) * invariants::slope_mu(x, lp);
    Rational cl = invariants::delta_toric(x, lp, budget).value + nmu_lp -
                  Rational(n + 1) * invariants::nef_thresholds(x, lp).second + filter_c;
    DivisorClass k = toric::canonical_class(x);
    Rational vollp = invariants::volume(x, lp);
    Rational fh(0), fh_filtered(0), hh(0);
    for (size_t i = 0; i < vs.size(); ++i) {
      toric::ToricValuation f(vs[i]);
      Rational s_lp = invariants::s_invariant(x, lp, f);
      Rational beta_lp = toric::log_discrepancy(x, f) * vollp + nmu_lp * s_lp +
                         invariants::derivative_integral(x, lp, f, k).value;
      Rational fv = (beta_l[i] - beta_lp) / s_lp;
      fh = std::max(fh, fv);
      if (beta_lp <= cl * s_lp) fh_filtered = std::max(fh_filtered, fv);
      Rational hv = (nmu_l * s_l[i] - nmu_lp * s_lp) / (Rational(n) * s_lp);
      hh = std::max(hh, hv);
    }
    row.f_hat = fh;
    row.f_hat_filtered = fh_filtered;
    row.h_hat = hh;
    table.rows.push_back(std::move(row));
  }

  const ModulusRow* prev = nullptr;
  for (const auto& row : table.rows) {
    if (row.skipped) continue;
    if (prev) {
      // grid is in decreasing eps order: moduli must not grow as eps shrinks
      table.f_monotone = table.f_monotone && row.f_hat <= prev->f_hat;
      table.h_monotone = table.h_monotone && row.h_hat <= prev->h_hat;
    }
    prev = &row;
  }
  return table;
}

Rational zeta_transfer_bound(const Rational& zeta_l, const RatInterval& s_minus,
                             const RatInterval& s_plus, const Rational& f_hat) {
  if (sgn(zeta_l) >= 0) return zeta_l * s_minus.lo - f_hat;
  return zeta_l * s_plus.hi - f_hat;
}

}  // namespace valstab::perturb
