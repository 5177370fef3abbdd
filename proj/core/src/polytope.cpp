#include "valstab/polytope.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "valstab/linalg.hpp"

namespace valstab::ratgeom {

namespace {

using linalg::QMat;

// ---------------------------------------------------------------------------
// Double description on the homogenized cone.
//
// A polytope {u : <u, a_i> >= -b_i} lifts to the cone
//   C = {(u, t) : <u, a_i> + b_i t >= 0, t >= 0}  in dimension d = n + 1.
// Extreme rays with positive last coordinate are the vertices (scaled to
// t = 1); rays with t = 0 form the recession cone.  When C is not pointed the
// lineality directions are recession lines of the polytope, which we slice
// away one coordinate at a time before running the core method.
// ---------------------------------------------------------------------------

// A ray is kept as a primitive integer vector; orientation matters.
IntVec normalize_ray(const QVec& v) {
  Zint lcm(1);
  for (const auto& q : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
  IntVec w(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Rational scaled = v[i] * Rational(lcm);
    w[i] = scaled.get_num();  // denominator is 1 after scaling
  }
  return primitive_part(w);
}

Rational row_dot(const QVec& row, const IntVec& ray) {
  Rational s(0);
  for (size_t i = 0; i < row.size(); ++i) s += row[i] * Rational(ray[i]);
  return s;
}

struct DDResult {
  std::vector<IntVec> rays;  // extreme rays of the cone, primitive
};

// Core double description for a pointed cone {x : row_i . x >= 0}.
// `rows` must have full column rank d.
DDResult dd_pointed(const std::vector<QVec>& rows, size_t d) {
  // Initial simplicial subcone from the first d linearly independent rows.
  std::vector<size_t> init;
  {
    QMat probe;
    for (size_t i = 0; i < rows.size() && init.size() < d; ++i) {
      probe.push_back(rows[i]);
      if (linalg::rank(probe) == static_cast<int>(probe.size()))
        init.push_back(i);
      else
        probe.pop_back();
    }
    if (init.size() != d) throw InternalError("dd_pointed: cone is not pointed");
  }
  QMat m(d);
  for (size_t k = 0; k < d; ++k) m[k] = rows[init[k]];
  auto minv = linalg::inverse(m);
  if (!minv) throw InternalError("dd_pointed: singular initial block");

  std::vector<IntVec> gen;
  for (size_t j = 0; j < d; ++j) {
    QVec col(d);
    for (size_t i = 0; i < d; ++i) col[i] = (*minv)[i][j];
    gen.push_back(normalize_ray(col));
  }

  std::vector<size_t> inserted(init.begin(), init.end());
  auto is_inserted = [&](size_t i) {
    return std::find(inserted.begin(), inserted.end(), i) != inserted.end();
  };

  for (size_t next = 0; next < rows.size(); ++next) {
    if (is_inserted(next)) continue;
    const QVec& c = rows[next];
    std::vector<IntVec> keep, pos, neg;
    std::vector<Rational> pos_val, neg_val;
    for (auto& r : gen) {
      Rational s = row_dot(c, r);
      int sg = sgn(s);
      if (sg > 0) {
        pos.push_back(r);
        pos_val.push_back(s);
        keep.push_back(r);
      } else if (sg == 0) {
        keep.push_back(r);
      } else {
        neg.push_back(r);
        neg_val.push_back(s);
      }
    }
    if (!neg.empty() && !pos.empty()) {
      // Tight sets w.r.t. all rows inserted so far; two rays are adjacent iff
      // their common tight rows have rank d - 2.
      auto tight_rows = [&](const IntVec& r) {
        std::vector<size_t> t;
        for (size_t i : inserted)
          if (sgn(row_dot(rows[i], r)) == 0) t.push_back(i);
        return t;
      };
      std::vector<std::vector<size_t>> pos_tight(pos.size()), neg_tight(neg.size());
      for (size_t i = 0; i < pos.size(); ++i) pos_tight[i] = tight_rows(pos[i]);
      for (size_t i = 0; i < neg.size(); ++i) neg_tight[i] = tight_rows(neg[i]);

      std::set<IntVec> fresh;
      for (size_t ip = 0; ip < pos.size(); ++ip) {
        for (size_t in = 0; in < neg.size(); ++in) {
          std::vector<size_t> common;
          std::set_intersection(pos_tight[ip].begin(), pos_tight[ip].end(),
                                neg_tight[in].begin(), neg_tight[in].end(),
                                std::back_inserter(common));
          QMat z;
          for (size_t i : common) z.push_back(rows[i]);
          if (linalg::rank(std::move(z)) != static_cast<int>(d) - 2) continue;
          // New ray on the hyperplane of c: positive combination.
          QVec mix(d);
          for (size_t k = 0; k < d; ++k)
            mix[k] = pos_val[ip] * Rational(neg[in][k]) - neg_val[in] * Rational(pos[ip][k]);
          fresh.insert(normalize_ray(mix));
        }
      }
      for (auto& r : fresh) keep.push_back(r);
    }
    gen = std::move(keep);
    inserted.push_back(next);
    std::sort(inserted.begin(), inserted.end());
  }
  // Deduplicate (redundant input halfspaces can reintroduce equal rays).
  std::sort(gen.begin(), gen.end());
  gen.erase(std::unique(gen.begin(), gen.end()), gen.end());
  return {std::move(gen)};
}

std::vector<QVec> homogenized_rows(const HPolytope& p) {
  std::vector<QVec> rows;
  rows.reserve(p.halfspaces.size() + 1);
  for (const auto& h : p.halfspaces) {
    if (static_cast<int>(h.normal.size()) != p.dim)
      throw InputError("halfspace normal has wrong dimension");
    QVec row(static_cast<size_t>(p.dim) + 1);
    for (int i = 0; i < p.dim; ++i) row[static_cast<size_t>(i)] = Rational(h.normal[static_cast<size_t>(i)]);
    row[static_cast<size_t>(p.dim)] = h.offset;
    rows.push_back(std::move(row));
  }
  QVec trow(static_cast<size_t>(p.dim) + 1, Rational(0));
  trow[static_cast<size_t>(p.dim)] = 1;
  rows.push_back(std::move(trow));
  return rows;
}

}  // namespace

Rational Halfspace::slack(const QVec& u) const {
  Rational s = offset;
  for (size_t i = 0; i < normal.size(); ++i) s += Rational(normal[i]) * u[i];
  return s;
}

VPolytope dual_description(const HPolytope& p) {
  if (p.dim == 0) {
    for (const auto& h : p.halfspaces)
      if (sgn(h.offset) < 0) return VPolytope{0, {}};
    return VPolytope{0, {QVec{}}};
  }
  auto rows = homogenized_rows(p);
  const size_t d = static_cast<size_t>(p.dim) + 1;

  {
    QMat all(rows.begin(), rows.end());
    auto lines = linalg::nullspace(std::move(all));
    if (!lines.empty()) {
      // The cone has lineality; every lineality direction has t = 0 and is a
      // recession line of the polytope.  Slice the polytope with u_j = 0
      // along one such direction and decide emptiness on the slice.
      const QVec& w = lines.front();
      size_t j = 0;
      while (j < d - 1 && sgn(w[j]) == 0) ++j;
      if (j == d - 1) throw InternalError("lineality in the t coordinate");
      HPolytope sliced = p;
      IntVec ej(static_cast<size_t>(p.dim), Zint(0)), mej(static_cast<size_t>(p.dim), Zint(0));
      ej[j] = 1;
      mej[j] = -1;
      sliced.halfspaces.push_back({ej, Rational(0)});
      sliced.halfspaces.push_back({mej, Rational(0)});
      VPolytope inner = dual_description(sliced);
      if (!inner.empty()) throw UnboundedPolytope();
      return VPolytope{p.dim, {}};
    }
  }

  DDResult cone = dd_pointed(rows, d);
  std::vector<QVec> verts;
  bool has_recession = false;
  for (const auto& r : cone.rays) {
    const Zint& t = r[d - 1];
    if (sgn(t) == 0) {
      has_recession = true;
    } else if (sgn(t) > 0) {
      QVec v(d - 1);
      for (size_t i = 0; i + 1 < d; ++i) {
        v[i] = Rational(r[i], t);
        v[i].canonicalize();
      }
      verts.push_back(std::move(v));
    }
    // t < 0 cannot occur: the t >= 0 row is part of the cone.
  }
  if (!verts.empty() && has_recession) throw UnboundedPolytope();
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  return VPolytope{p.dim, std::move(verts)};
}

HPolytope hull_description(const VPolytope& p) {
  const int n = p.dim;
  if (linalg::affine_dim(p.vertices) != n)
    throw InputError("hull_description requires a full-dimensional polytope");
  // Center on the vertex centroid (interior), pass to the polar dual, and
  // read facets of the primal off as polar vertices.
  QVec c(static_cast<size_t>(n), Rational(0));
  for (const auto& v : p.vertices)
    for (size_t i = 0; i < c.size(); ++i) c[i] += v[i];
  for (auto& x : c) x /= Rational(static_cast<long>(p.vertices.size()));

  HPolytope polar;
  polar.dim = n;
  for (const auto& v : p.vertices) {
    QVec dir(static_cast<size_t>(n));
    for (size_t i = 0; i < dir.size(); ++i) dir[i] = v[i] - c[i];
    // Constraint <y, v - c> <= 1, i.e. <y, -(v-c)> >= -1.  Scale the normal
    // to a primitive integer vector and the offset along with it.
    Zint lcm(1);
    for (const auto& q : dir) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
    IntVec nv(dir.size());
    for (size_t i = 0; i < dir.size(); ++i) {
      Rational s = dir[i] * Rational(lcm);
      nv[i] = -s.get_num();
    }
    Zint g = gcd_all(nv);
    if (g == 0) continue;  // v == centroid cannot happen for extreme vertices
    for (auto& x : nv) x /= g;
    Rational off = Rational(lcm) / Rational(g);
    polar.halfspaces.push_back({std::move(nv), std::move(off)});
  }
  VPolytope polar_verts = dual_description(polar);

  HPolytope out;
  out.dim = n;
  for (const auto& y : polar_verts.vertices) {
    // Facet of the primal: <u - c, y> <= 1  <=>  <u, -y> >= -(1 + <c, y>).
    QVec neg(static_cast<size_t>(n));
    for (size_t i = 0; i < neg.size(); ++i) neg[i] = -y[i];
    Zint lcm(1);
    for (const auto& q : neg) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
    IntVec nv(neg.size());
    for (size_t i = 0; i < neg.size(); ++i) {
      Rational s = neg[i] * Rational(lcm);
      nv[i] = s.get_num();
    }
    Zint g = gcd_all(nv);
    if (g == 0) throw InternalError("hull_description: zero facet normal");
    for (auto& x : nv) x /= g;
    Rational off = (Rational(1) + linalg::dot(c, QVec(y))) * Rational(lcm) / Rational(g);
    out.halfspaces.push_back({std::move(nv), std::move(off)});
  }
  std::sort(out.halfspaces.begin(), out.halfspaces.end(),
            [](const Halfspace& a, const Halfspace& b) {
              return a.normal != b.normal ? a.normal < b.normal : a.offset < b.offset;
            });
  return out;
}

std::vector<SimplexIndices> triangulate_face(const std::vector<QVec>& verts,
                                             const std::vector<Halfspace>& facets,
                                             const SimplexIndices& face_vertices) {
  std::vector<QVec> pts;
  pts.reserve(face_vertices.size());
  for (size_t i : face_vertices) pts.push_back(verts[i]);
  const int k = linalg::affine_dim(pts);
  if (k < 0) return {};
  if (static_cast<int>(face_vertices.size()) == k + 1) return {face_vertices};

  // Fan from the lexicographically smallest vertex of the face over the
  // facets of the face that do not contain it.
  size_t apex = face_vertices[0];
  for (size_t i : face_vertices)
    if (verts[i] < verts[apex]) apex = i;

  std::set<SimplexIndices> subfaces;
  for (const auto& h : facets) {
    SimplexIndices w;
    bool apex_on = false;
    for (size_t i : face_vertices) {
      if (sgn(h.slack(verts[i])) == 0) {
        w.push_back(i);
        if (i == apex) apex_on = true;
      }
    }
    if (apex_on || w.size() == face_vertices.size() || w.empty()) continue;
    std::vector<QVec> wpts;
    for (size_t i : w) wpts.push_back(verts[i]);
    if (linalg::affine_dim(wpts) != k - 1) continue;
    std::sort(w.begin(), w.end());
    subfaces.insert(std::move(w));
  }
  std::vector<SimplexIndices> out;
  for (const auto& g : subfaces) {
    for (auto& s : triangulate_face(verts, facets, g)) {
      s.push_back(apex);
      out.push_back(std::move(s));
    }
  }
  if (out.empty())
    throw InternalError("triangulate_face: no facet avoids the apex (missing halfspaces?)");
  return out;
}

namespace {

Rational simplex_volume_unnormalized(const std::vector<QVec>& verts, const SimplexIndices& s) {
  // |det(v_1 - v_0, ..., v_n - v_0)|, i.e. n! times the Lebesgue volume.
  const size_t n = verts[s[0]].size();
  QMat m(n, QVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m[i][j] = verts[s[i + 1]][j] - verts[s[0]][j];
  return abs(linalg::det(std::move(m)));
}

Rational factorial(size_t n) {
  Rational f(1);
  for (size_t i = 2; i <= n; ++i) f *= Rational(static_cast<long>(i));
  return f;
}

}  // namespace

Rational volume_hv(const HPolytope& h, const VPolytope& v) {
  const int n = v.dim;
  if (linalg::affine_dim(v.vertices) < n) return Rational(0);
  SimplexIndices all(v.vertices.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  Rational total(0);
  for (const auto& s : triangulate_face(v.vertices, h.halfspaces, all))
    total += simplex_volume_unnormalized(v.vertices, s);
  return total / factorial(static_cast<size_t>(n));
}

Rational euclidean_volume(const VPolytope& p) {
  if (p.empty() || linalg::affine_dim(p.vertices) < p.dim) return Rational(0);
  return volume_hv(hull_description(p), p);
}

Rational integrate_affine_hv(const HPolytope& h, const VPolytope& v, const IntVec& l,
                             const Rational& c) {
  for (const auto& u : v.vertices)
    if (sgn(linalg::dot(l, u) + c) < 0)
      throw InputError("functional not nonnegative on polytope");
  const int n = v.dim;
  if (linalg::affine_dim(v.vertices) < n) return Rational(0);
  SimplexIndices all(v.vertices.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  // Over a simplex the integral of an affine functional is volume times the
  // mean of the vertex values.
  Rational total(0);
  const Rational nf = factorial(static_cast<size_t>(n));
  for (const auto& s : triangulate_face(v.vertices, h.halfspaces, all)) {
    Rational mean(0);
    for (size_t i : s) mean += linalg::dot(l, v.vertices[i]) + c;
    mean /= Rational(static_cast<long>(s.size()));
    total += simplex_volume_unnormalized(v.vertices, s) / nf * mean;
  }
  return total;
}

Rational integrate_affine(const VPolytope& p, const IntVec& l, const Rational& c) {
  for (const auto& u : p.vertices)
    if (sgn(linalg::dot(l, u) + c) < 0)
      throw InputError("functional not nonnegative on polytope");
  if (p.empty() || linalg::affine_dim(p.vertices) < p.dim) return Rational(0);
  return integrate_affine_hv(hull_description(p), p, l, c);
}

HPolytope slab(const HPolytope& p, const IntVec& l, const Rational& t) {
  HPolytope out = p;
  out.halfspaces.push_back({l, -t});
  return out;
}

Rational facet_lattice_volume(const HPolytope& p, size_t facet_index) {
  if (facet_index >= p.halfspaces.size()) throw InputError("facet index out of range");
  const int n = p.dim;
  VPolytope v = dual_description(p);
  Halfspace h = p.halfspaces[facet_index];
  {
    Zint g = gcd_all(h.normal);
    if (g == 0) throw InputError("zero facet normal");
    if (g != 1) {
      for (auto& x : h.normal) x /= g;
      h.offset /= Rational(g);
    }
  }
  SimplexIndices on_facet;
  for (size_t i = 0; i < v.vertices.size(); ++i)
    if (sgn(h.slack(v.vertices[i])) == 0) on_facet.push_back(i);
  if (on_facet.empty()) return Rational(0);
  {
    std::vector<QVec> pts;
    for (size_t i : on_facet) pts.push_back(v.vertices[i]);
    if (linalg::affine_dim(pts) != n - 1) return Rational(0);
  }
  // Pick an integer z with <z, normal> = 1 (the normal is primitive); the
  // lattice-normalized facet volume of a simplex is then the absolute
  // determinant of its edge vectors extended by z.
  IntVec z(static_cast<size_t>(n), Zint(0));
  {
    Zint g = h.normal[0];
    z[0] = 1;
    for (size_t i = 1; i < h.normal.size(); ++i) {
      Zint gg, s, t2;
      mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t2.get_mpz_t(), g.get_mpz_t(),
                 h.normal[i].get_mpz_t());
      for (size_t j = 0; j < i; ++j) z[j] *= s;
      z[i] = t2;
      g = gg;
    }
    if (g == -1) {
      for (auto& x : z) x = -x;
      g = 1;
    }
    if (g != 1) throw InternalError("facet normal not primitive after reduction");
  }
  Rational total(0);
  for (const auto& s : triangulate_face(v.vertices, p.halfspaces, on_facet)) {
    QMat m(static_cast<size_t>(n), QVec(static_cast<size_t>(n)));
    for (size_t i = 0; i + 1 < s.size(); ++i)
      for (size_t j = 0; j < static_cast<size_t>(n); ++j)
        m[i][j] = v.vertices[s[i + 1]][j] - v.vertices[s[0]][j];
    for (size_t j = 0; j < static_cast<size_t>(n); ++j)
      m[static_cast<size_t>(n) - 1][j] = Rational(z[j]);
    total += abs(linalg::det(std::move(m)));
  }
  return total;
}

}  // namespace valstab::ratgeom
