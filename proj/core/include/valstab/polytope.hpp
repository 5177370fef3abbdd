#ifndef VALSTAB_POLYTOPE_HPP
#define VALSTAB_POLYTOPE_HPP

#include <cstddef>
#include <vector>

#include "valstab/rational.hpp"

namespace valstab::ratgeom {

/// Raised by dual_description on input with a nonzero recession cone.
struct UnboundedPolytope : InputError {
  UnboundedPolytope() : InputError("unbounded polytope") {}
};

/**
 * A closed halfspace  { u : <u, normal> >= -offset }  with integer normal.
 */
struct Halfspace {
  IntVec normal;
  Rational offset;

  Rational slack(const QVec& u) const;  // <u, normal> + offset
};

/**
 * Intersection of finitely many halfspaces in R^dim.  May be empty, lower
 * dimensional, or (illegally, for most operations) unbounded.  Redundant
 * halfspaces are permitted; canonicalization happens on demand via
 * dual_description.
 */
struct HPolytope {
  int dim = 0;
  std::vector<Halfspace> halfspaces;

  HPolytope() = default;
  HPolytope(int n, std::vector<Halfspace> hs) : dim(n), halfspaces(std::move(hs)) {}
};

/**
 * Vertex representation.  After canonicalization (dual_description output)
 * the vertex list is irredundant and sorted lexicographically.
 */
struct VPolytope {
  int dim = 0;
  std::vector<QVec> vertices;

  bool empty() const { return vertices.empty(); }
};

/**
 * Exact vertex enumeration of a bounded H-polytope by incremental halfspace
 * insertion (double description on the homogenization, lexicographic
 * tie-breaking).  An empty feasible set yields an empty VPolytope; a nonzero
 * recession cone raises UnboundedPolytope.
 */
VPolytope dual_description(const HPolytope& p);

/**
 * Facet description of a full-dimensional V-polytope, computed through the
 * polar dual.  Facet normals are primitive integer vectors, facets sorted
 * lexicographically.  Throws InputError when the input is not
 * full-dimensional.
 */
HPolytope hull_description(const VPolytope& p);

/// A simplex of the triangulation, as indices into a vertex list.
using SimplexIndices = std::vector<size_t>;

/**
 * Triangulation of a face of the polytope spanned by `face_vertices`
 * (indices into verts), fanning from the lexicographically smallest vertex
 * and recursing through the facet structure induced by `facets`.
 * When the face is the whole polytope pass all vertex indices.
 */
std::vector<SimplexIndices> triangulate_face(const std::vector<QVec>& verts,
                                             const std::vector<Halfspace>& facets,
                                             const SimplexIndices& face_vertices);

/// Exact Lebesgue volume; zero for empty or lower-dimensional input.
Rational euclidean_volume(const VPolytope& p);

/// Volume via an already known H-representation (skips the polar dual step).
Rational volume_hv(const HPolytope& h, const VPolytope& v);

/**
 * Exact integral over p of the affine functional u -> <u, l> + c.
 * Pre: the functional is nonnegative at every vertex; otherwise throws
 * InputError("functional not nonnegative on polytope").
 */
Rational integrate_affine(const VPolytope& p, const IntVec& l, const Rational& c);

/// Same, with the H-representation supplied.
Rational integrate_affine_hv(const HPolytope& h, const VPolytope& v, const IntVec& l,
                             const Rational& c);

/// p intersected with { <u, l> >= t }.
HPolytope slab(const HPolytope& p, const IntVec& l, const Rational& t);

/**
 * Lattice-normalized (n-1)-volume of facet `facet_index`: the volume in which
 * a fundamental simplex of the lattice induced on the facet hyperplane counts
 * one.  Degenerate facets give zero.
 */
Rational facet_lattice_volume(const HPolytope& p, size_t facet_index);

}  // namespace valstab::ratgeom

#endif
