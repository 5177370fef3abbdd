#ifndef VALSTAB_LINALG_HPP
#define VALSTAB_LINALG_HPP

#include <optional>
#include <vector>

#include "valstab/rational.hpp"

namespace valstab::linalg {

// Dense exact rational matrices, row major.  Sizes here are tiny (the lattice
// rank plus one at most), so plain Gaussian elimination with pivoting by
// first nonzero entry is adequate and keeps elimination order deterministic.
using QMat = std::vector<QVec>;

int rank(QMat m);

Rational det(QMat m);

/// Solve A x = b for square nonsingular A.  Returns nullopt when A is singular.
std::optional<QVec> solve_square(QMat a, QVec b);

/// Any solution of a (possibly rectangular) consistent system A x = b;
/// nullopt when the system is inconsistent.  Free variables are set to zero,
/// pivoting is deterministic, so the representative is reproducible.
std::optional<QVec> solve_any(QMat a, QVec b);

/// Basis of the right nullspace of A (deterministic ordering).
std::vector<QVec> nullspace(QMat a);

std::optional<QMat> inverse(QMat a);

Rational dot(const QVec& x, const QVec& y);
Rational dot(const IntVec& x, const QVec& y);
Rational dot(const IntVec& x, const IntVec& y);

/// Dimension of the affine hull of a point set (-1 for the empty set).
int affine_dim(const std::vector<QVec>& points);

}  // namespace valstab::linalg

#endif
