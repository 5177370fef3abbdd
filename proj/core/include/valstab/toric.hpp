#ifndef VALSTAB_TORIC_HPP
#define VALSTAB_TORIC_HPP

#include <optional>
#include <string>
#include <vector>

#include "valstab/linalg.hpp"
#include "valstab/polytope.hpp"
#include "valstab/rational.hpp"

namespace valstab::toric {

/// Raised for fans the exact formulas do not cover (non-simplicial cones
/// without consistent Cartier data, incomplete fans, ...).
struct UnsupportedFan : InputError {
  explicit UnsupportedFan(const std::string& msg) : InputError(msg) {}
};

/**
 * A divisor class as coefficients over the rays of a fixed fan, i.e. the
 * divisor sum_rho a_rho D_rho.  Two coefficient vectors describe the same
 * numerical class when they differ by the image of the character lattice;
 * use ToricVariety::numerically_equal to compare.
 */
struct DivisorClass {
  QVec a;

  DivisorClass() = default;
  explicit DivisorClass(QVec coeffs) : a(std::move(coeffs)) {}

  DivisorClass operator+(const DivisorClass& o) const;
  DivisorClass operator-(const DivisorClass& o) const;
  DivisorClass operator-() const;
  DivisorClass scaled(const Rational& s) const;
};

/**
 * A toric (monomial) divisorial valuation, encoded by the primitive lattice
 * vector it is monomial with respect to.  Construction checks primitivity.
 */
struct ToricValuation {
  IntVec v;

  explicit ToricValuation(IntVec vec);
};

/**
 * A complete rational fan: primitive ray generators plus maximal cones given
 * as ray index sets.  Construction validates ray primitivity, cone dimension,
 * and completeness (by a deterministic direction-cover sample), and
 * precomputes wall data for nef/ample tests.
 */
class ToricVariety {
 public:
  ToricVariety(int rank, std::vector<IntVec> rays, std::vector<std::vector<int>> cones);

  int rank() const { return rank_; }
  size_t ray_count() const { return rays_.size(); }
  const std::vector<IntVec>& rays() const { return rays_; }
  const std::vector<std::vector<int>>& max_cones() const { return cones_; }
  bool simplicial() const { return all_simplicial_; }

  /// One inequality per (wall, opposite ray): the class D has a concave
  /// support function iff every wall_value is >= 0.
  struct WallIneq {
    int cone;     // cone supplying the Cartier data
    int opp_ray;  // ray of the neighbour across the wall
  };
  const std::vector<WallIneq>& wall_inequalities() const { return walls_; }
  Rational wall_value(const WallIneq& w, const DivisorClass& d) const;

  /// Index of the first maximal cone containing v.
  int find_cone(const IntVec& v) const;
  /// Coordinates of v in the ray basis of a simplicial cone.
  QVec cone_barycentric(int cone, const IntVec& v) const;
  /// m with <m, v_rho> = -a_rho across the rays of the cone.
  QVec cartier_data(int cone, const DivisorClass& d) const;

  bool numerically_equal(const DivisorClass& x, const DivisorClass& y) const;

  /// Rank of N^1(X) over Q (ray count minus lattice rank for complete fans).
  int picard_rank() const { return static_cast<int>(rays_.size()) - rank_; }

 private:
  int rank_;
  std::vector<IntVec> rays_;
  std::vector<std::vector<int>> cones_;
  std::vector<std::optional<linalg::QMat>> cone_inverse_;  // per simplicial cone
  std::vector<WallIneq> walls_;
  bool all_simplicial_ = true;

  void validate_and_index();
};

/// K_X = -sum of all ray divisors.
DivisorClass canonical_class(const ToricVariety& x);

/// P_D = { u : <u, v_rho> >= -a_rho }.
ratgeom::HPolytope section_polytope(const ToricVariety& x, const DivisorClass& d);

bool is_nef(const ToricVariety& x, const DivisorClass& d);
bool is_ample(const ToricVariety& x, const DivisorClass& d);
bool is_big(const ToricVariety& x, const DivisorClass& d);

/// Value at v of the piecewise-linear support function of D (cone-wise linear
/// with value -a_rho on each ray generator).
Rational support_value(const ToricVariety& x, const DivisorClass& d, const IntVec& v);

/// A_X(F) for a toric valuation: the piecewise-linear function with value 1
/// on every ray generator, evaluated at v.
Rational log_discrepancy(const ToricVariety& x, const ToricValuation& f);

/// n! times the Euclidean volume of the section polytope.
Rational volume_of_class(const ToricVariety& x, const DivisorClass& d);

/**
 * Exact mixed intersection number D_1 ... D_n, computed by interpolating the
 * degree-n polynomial t -> Vol(sum t_i E_i) at positive integer nodes over
 * the distinct classes E_i and reading the normalized mixed coefficient.
 * Every distinct class must be nef (callers pre-decompose otherwise); throws
 * InputError("interpolation region empty") if not.
 */
Rational intersection_number(const ToricVariety& x, const std::vector<DivisorClass>& ds);

/// All primitive integer vectors with sup-norm at most `budget`, both signs,
/// in lexicographic order.
std::vector<IntVec> primitive_vectors(int n, int budget);

}  // namespace valstab::toric

#endif
