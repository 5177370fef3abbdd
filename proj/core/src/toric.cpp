#include "valstab/toric.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "valstab/polynomial.hpp"

namespace valstab::toric {

using linalg::QMat;

DivisorClass DivisorClass::operator+(const DivisorClass& o) const {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + o.a[i];
  return DivisorClass(std::move(r));
}

DivisorClass DivisorClass::operator-(const DivisorClass& o) const {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - o.a[i];
  return DivisorClass(std::move(r));
}

DivisorClass DivisorClass::operator-() const {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return DivisorClass(std::move(r));
}

DivisorClass DivisorClass::scaled(const Rational& s) const {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return DivisorClass(std::move(r));
}

ToricValuation::ToricValuation(IntVec vec) : v(std::move(vec)) {
  if (gcd_all(v) != 1)
    throw InputError("toric valuation vector must be primitive and nonzero, got " + to_string(v));
}

ToricVariety::ToricVariety(int rank, std::vector<IntVec> rays, std::vector<std::vector<int>> cones)
    : rank_(rank), rays_(std::move(rays)), cones_(std::move(cones)) {
  validate_and_index();
}

void ToricVariety::validate_and_index() {
  if (rank_ < 1) throw InputError("lattice rank must be positive");
  for (const auto& r : rays_) {
    if (static_cast<int>(r.size()) != rank_) throw InputError("ray has wrong dimension");
    if (gcd_all(r) != 1) throw InputError("non-primitive ray generator " + to_string(r));
  }
  const size_t n = static_cast<size_t>(rank_);
  for (auto& c : cones_) {
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end())
      throw InputError("repeated ray index in cone");
    for (int i : c)
      if (i < 0 || i >= static_cast<int>(rays_.size()))
        throw InputError("cone ray index out of range");
    QMat m;
    for (int i : c) {
      QVec row(n);
      for (size_t j = 0; j < n; ++j) row[j] = Rational(rays_[static_cast<size_t>(i)][j]);
      m.push_back(std::move(row));
    }
    if (linalg::rank(m) != rank_) throw InputError("maximal cone is not full-dimensional");
  }

  cone_inverse_.resize(cones_.size());
  for (size_t ci = 0; ci < cones_.size(); ++ci) {
    const auto& c = cones_[ci];
    if (c.size() != n) {
      all_simplicial_ = false;
      continue;
    }
    QMat m(n, QVec(n));
    for (size_t i = 0; i < n; ++i)       // column i = ray c[i]
      for (size_t j = 0; j < n; ++j)
        m[j][i] = Rational(rays_[static_cast<size_t>(c[i])][j]);
    cone_inverse_[ci] = linalg::inverse(std::move(m));
    if (!cone_inverse_[ci]) throw InputError("maximal cone is not full-dimensional");
  }

  // Walls: ordered cone pairs whose common rays span a hyperplane; one
  // inequality per ray of the neighbour that lies off the wall.
  for (size_t i = 0; i < cones_.size(); ++i) {
    for (size_t j = 0; j < cones_.size(); ++j) {
      if (i == j) continue;
      std::vector<int> common;
      std::set_intersection(cones_[i].begin(), cones_[i].end(), cones_[j].begin(),
                            cones_[j].end(), std::back_inserter(common));
      if (common.empty()) continue;
      QMat m;
      for (int r : common) {
        QVec row(n);
        for (size_t k = 0; k < n; ++k) row[k] = Rational(rays_[static_cast<size_t>(r)][k]);
        m.push_back(std::move(row));
      }
      if (linalg::rank(std::move(m)) != rank_ - 1) continue;
      for (int r : cones_[j]) {
        if (std::binary_search(common.begin(), common.end(), r)) continue;
        walls_.push_back({static_cast<int>(i), r});
      }
    }
  }
  if (walls_.empty() && cones_.size() > 1)
    throw InputError("fan has no walls; maximal cones do not tile the space");

  // Completeness: a deterministic direction sample, each direction must lie
  // in some maximal cone.
  if (all_simplicial_) {
    std::vector<IntVec> probes;
    for (const auto& r : rays_) {
      probes.push_back(r);
      IntVec neg(r.size());
      for (size_t k = 0; k < r.size(); ++k) neg[k] = -r[k];
      probes.push_back(std::move(neg));
    }
    for (size_t i = 0; i < rays_.size(); ++i)
      for (size_t j = i + 1; j < rays_.size(); ++j) {
        IntVec s(rays_[i].size());
        for (size_t k = 0; k < s.size(); ++k) s[k] = rays_[i][k] + rays_[j][k];
        if (gcd_all(s) != 0) probes.push_back(std::move(s));
      }
    unsigned long state = 0x9e3779b97f4a7c15ull;
    for (int t = 0; t < 64; ++t) {
      IntVec p(n);
      bool nonzero = false;
      for (size_t k = 0; k < n; ++k) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        long coord = static_cast<long>((state >> 33) % 15) - 7;
        p[k] = coord;
        nonzero = nonzero || coord != 0;
      }
      if (nonzero) probes.push_back(std::move(p));
    }
    for (const auto& p : probes) {
      bool covered = false;
      for (size_t ci = 0; ci < cones_.size() && !covered; ++ci) {
        QVec lam = cone_barycentric(static_cast<int>(ci), p);
        covered =
            std::all_of(lam.begin(), lam.end(), [](const Rational& q) { return sgn(q) >= 0; });
      }
      if (!covered)
        throw InputError("fan is not complete: direction " + to_string(p) + " is uncovered");
    }
  }
}

Rational ToricVariety::wall_value(const WallIneq& w, const DivisorClass& d) const {
  QVec m = cartier_data(w.cone, d);
  return linalg::dot(rays_[static_cast<size_t>(w.opp_ray)], m) +
         d.a[static_cast<size_t>(w.opp_ray)];
}

int ToricVariety::find_cone(const IntVec& v) const {
  for (size_t ci = 0; ci < cones_.size(); ++ci) {
    if (!cone_inverse_[ci]) continue;
    QVec lam = cone_barycentric(static_cast<int>(ci), v);
    if (std::all_of(lam.begin(), lam.end(), [](const Rational& q) { return sgn(q) >= 0; }))
      return static_cast<int>(ci);
  }
  if (!all_simplicial_)
    throw UnsupportedFan("non-simplicial cone: log discrepancy via this formula unsupported");
  throw InputError("no maximal cone contains " + to_string(v) + "; fan not complete?");
}

QVec ToricVariety::cone_barycentric(int cone, const IntVec& v) const {
  const auto& inv = cone_inverse_[static_cast<size_t>(cone)];
  if (!inv)
    throw UnsupportedFan("non-simplicial cone: log discrepancy via this formula unsupported");
  const size_t n = static_cast<size_t>(rank_);
  QVec lam(n, Rational(0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) lam[i] += (*inv)[i][j] * Rational(v[j]);
  return lam;
}

QVec ToricVariety::cartier_data(int cone, const DivisorClass& d) const {
  const auto& c = cones_[static_cast<size_t>(cone)];
  const size_t n = static_cast<size_t>(rank_);
  QMat m;
  QVec rhs;
  for (int i : c) {
    QVec row(n);
    for (size_t j = 0; j < n; ++j) row[j] = Rational(rays_[static_cast<size_t>(i)][j]);
    m.push_back(std::move(row));
    rhs.push_back(-d.a[static_cast<size_t>(i)]);
  }
  auto sol = linalg::solve_any(m, rhs);
  if (!sol)
    throw UnsupportedFan("divisor is not Q-Cartier on a non-simplicial cone; variety unsupported");
  return *sol;
}

bool ToricVariety::numerically_equal(const DivisorClass& x, const DivisorClass& y) const {
  QMat m;
  QVec rhs;
  for (size_t i = 0; i < rays_.size(); ++i) {
    QVec row(static_cast<size_t>(rank_));
    for (size_t j = 0; j < static_cast<size_t>(rank_); ++j) row[j] = Rational(rays_[i][j]);
    m.push_back(std::move(row));
    rhs.push_back(x.a[i] - y.a[i]);
  }
  return linalg::solve_any(std::move(m), std::move(rhs)).has_value();
}

DivisorClass canonical_class(const ToricVariety& x) {
  return DivisorClass(QVec(x.ray_count(), Rational(-1)));
}

ratgeom::HPolytope section_polytope(const ToricVariety& x, const DivisorClass& d) {
  if (d.a.size() != x.ray_count()) throw InputError("divisor class length mismatch");
  ratgeom::HPolytope p;
  p.dim = x.rank();
  for (size_t i = 0; i < x.ray_count(); ++i) p.halfspaces.push_back({x.rays()[i], d.a[i]});
  return p;
}

bool is_nef(const ToricVariety& x, const DivisorClass& d) {
  for (const auto& w : x.wall_inequalities())
    if (sgn(x.wall_value(w, d)) < 0) return false;
  return true;
}

bool is_ample(const ToricVariety& x, const DivisorClass& d) {
  for (const auto& w : x.wall_inequalities())
    if (sgn(x.wall_value(w, d)) <= 0) return false;
  return true;
}

bool is_big(const ToricVariety& x, const DivisorClass& d) {
  auto v = ratgeom::dual_description(section_polytope(x, d));
  return linalg::affine_dim(v.vertices) == x.rank();
}

Rational support_value(const ToricVariety& x, const DivisorClass& d, const IntVec& v) {
  int ci = x.find_cone(v);
  QVec lam = x.cone_barycentric(ci, v);
  const auto& c = x.max_cones()[static_cast<size_t>(ci)];
  Rational psi(0);
  for (size_t k = 0; k < c.size(); ++k) psi -= lam[k] * d.a[static_cast<size_t>(c[k])];
  return psi;
}

Rational log_discrepancy(const ToricVariety& x, const ToricValuation& f) {
  int ci = x.find_cone(f.v);
  QVec lam = x.cone_barycentric(ci, f.v);
  Rational a(0);
  for (const auto& l : lam) a += l;
  return a;
}

Rational volume_of_class(const ToricVariety& x, const DivisorClass& d) {
  auto h = section_polytope(x, d);
  auto v = ratgeom::dual_description(h);
  if (linalg::affine_dim(v.vertices) < x.rank()) return Rational(0);
  Rational nf(1);
  for (int i = 2; i <= x.rank(); ++i) nf *= i;
  return nf * ratgeom::volume_hv(h, v);
}

namespace {

// Coefficient of the requested monomial of a polynomial with per-variable
// degree < nodes[i].size(), interpolated on the tensor grid (last index of
// the flattened value array moves fastest).
Rational mixed_coefficient(const std::vector<QVec>& nodes, const QVec& values,
                           const std::vector<int>& exponent) {
  if (nodes.empty()) return values.at(0);
  const size_t k = nodes.size();
  const size_t last = nodes[k - 1].size();
  const size_t outer = values.size() / last;
  const int want = exponent.back();
  if (want < 0 || static_cast<size_t>(want) >= last) return Rational(0);
  QVec slice(outer);
  for (size_t o = 0; o < outer; ++o) {
    QVec ys(last);
    for (size_t i = 0; i < last; ++i) ys[i] = values[o * last + i];
    slice[o] = Polynomial::interpolate(nodes[k - 1], ys).coeff(static_cast<size_t>(want));
  }
  std::vector<QVec> inner_nodes(nodes.begin(), nodes.end() - 1);
  std::vector<int> inner_exp(exponent.begin(), exponent.end() - 1);
  return mixed_coefficient(inner_nodes, slice, inner_exp);
}

}  // namespace

Rational intersection_number(const ToricVariety& x, const std::vector<DivisorClass>& ds) {
  const int n = x.rank();
  if (static_cast<int>(ds.size()) != n)
    throw InputError("intersection number needs exactly rank-many classes");
  std::vector<DivisorClass> distinct;
  std::vector<int> mult;
  for (const auto& d : ds) {
    bool found = false;
    for (size_t i = 0; i < distinct.size() && !found; ++i) {
      if (x.numerically_equal(distinct[i], d)) {
        ++mult[i];
        found = true;
      }
    }
    if (!found) {
      distinct.push_back(d);
      mult.push_back(1);
    }
  }
  for (const auto& e : distinct)
    if (!is_nef(x, e)) throw InputError("interpolation region empty");

  const size_t k = distinct.size();
  std::vector<QVec> nodes(k);
  for (auto& ns : nodes)
    for (int t = 1; t <= n + 1; ++t) ns.push_back(Rational(t));

  size_t total = 1;
  for (size_t i = 0; i < k; ++i) total *= nodes[i].size();
  QVec values;
  values.reserve(total);
  std::vector<size_t> idx(k, 0);
  for (size_t flat = 0; flat < total; ++flat) {
    size_t rem = flat;
    for (size_t i = k; i-- > 0;) {
      idx[i] = rem % nodes[i].size();
      rem /= nodes[i].size();
    }
    DivisorClass combo(QVec(x.ray_count(), Rational(0)));
    for (size_t i = 0; i < k; ++i) combo = combo + distinct[i].scaled(nodes[i][idx[i]]);
    values.push_back(volume_of_class(x, combo));
  }
  Rational coeff = mixed_coefficient(nodes, values, mult);
  // Vol(sum t_i E_i) = sum_{|alpha|=n} multinomial(n;alpha) E^alpha t^alpha.
  Rational multinom(1);
  int used = 0;
  for (int m : mult)
    for (int i = 1; i <= m; ++i) {
      ++used;
      multinom *= Rational(used) / Rational(i);
    }
  return coeff / multinom;
}

std::vector<IntVec> primitive_vectors(int n, int budget) {
  if (budget < 1) throw InputError("valuation budget must be at least 1");
  std::vector<IntVec> out;
  IntVec cur(static_cast<size_t>(n), Zint(-budget));
  while (true) {
    if (gcd_all(cur) == 1) out.push_back(cur);
    int i = n - 1;
    while (i >= 0) {
      cur[static_cast<size_t>(i)] += 1;
      if (cur[static_cast<size_t>(i)] <= budget) break;
      cur[static_cast<size_t>(i)] = -budget;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

}  // namespace valstab::toric
