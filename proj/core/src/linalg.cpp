#include "valstab/linalg.hpp"

#include <cstddef>

namespace valstab::linalg {

namespace {

// Row echelon form in place; returns pivot columns.  Pivot choice: first row
// with a nonzero entry in the current column (no magnitude pivoting — exact
// arithmetic does not care, and determinism does).
std::vector<int> echelon(QMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && sgn(m[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(m[r], m[p]);
    const Rational inv = 1 / m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      const Rational f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

}  // namespace

int rank(QMat m) { return static_cast<int>(echelon(m).size()); }

Rational det(QMat m) {
  const size_t n = m.size();
  Rational d(1);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && sgn(m[p][c]) == 0) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    const Rational inv = 1 / m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (sgn(m[i][c]) == 0) continue;
      const Rational f = m[i][c] * inv;
      for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return d;
}

std::optional<QVec> solve_square(QMat a, QVec b) {
  const size_t n = a.size();
  for (size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  auto pivots = echelon(a);
  if (pivots.size() != n) return std::nullopt;
  for (size_t i = 0; i < n; ++i)
    if (pivots[i] != static_cast<int>(i)) return std::nullopt;  // singular A
  QVec x(n);
  for (size_t i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

std::optional<QVec> solve_any(QMat a, QVec b) {
  if (a.empty()) return QVec{};
  const size_t rows = a.size(), cols = a[0].size();
  for (size_t i = 0; i < rows; ++i) a[i].push_back(b[i]);
  auto pivots = echelon(a);
  // Inconsistent iff a pivot lands in the augmented column.
  for (size_t i = 0; i < pivots.size(); ++i)
    if (pivots[i] == static_cast<int>(cols)) return std::nullopt;
  QVec x(cols, Rational(0));
  for (size_t i = 0; i < pivots.size(); ++i) x[static_cast<size_t>(pivots[i])] = a[i][cols];
  return x;
}

std::vector<QVec> nullspace(QMat a) {
  if (a.empty()) return {};
  const size_t cols = a[0].size();
  auto pivots = echelon(a);
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[static_cast<size_t>(p)] = true;
  std::vector<QVec> basis;
  for (size_t freec = 0; freec < cols; ++freec) {
    if (is_pivot[freec]) continue;
    QVec v(cols, Rational(0));
    v[freec] = 1;
    for (size_t i = 0; i < pivots.size(); ++i)
      v[static_cast<size_t>(pivots[i])] = -a[i][freec];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QMat> inverse(QMat a) {
  const size_t n = a.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) a[i].push_back(i == j ? Rational(1) : Rational(0));
  }
  auto pivots = echelon(a);
  if (pivots.size() != n) return std::nullopt;
  for (size_t i = 0; i < n; ++i)
    if (pivots[i] != static_cast<int>(i)) return std::nullopt;
  QMat inv(n, QVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
  return inv;
}

Rational dot(const QVec& x, const QVec& y) {
  Rational s(0);
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

Rational dot(const IntVec& x, const QVec& y) {
  Rational s(0);
  for (size_t i = 0; i < x.size(); ++i) s += Rational(x[i]) * y[i];
  return s;
}

Rational dot(const IntVec& x, const IntVec& y) {
  Zint s(0);
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return Rational(s);
}

int affine_dim(const std::vector<QVec>& points) {
  if (points.empty()) return -1;
  QMat diffs;
  for (size_t i = 1; i < points.size(); ++i) {
    QVec d(points[i].size());
    for (size_t j = 0; j < d.size(); ++j) d[j] = points[i][j] - points[0][j];
    diffs.push_back(std::move(d));
  }
  if (diffs.empty()) return 0;
  return rank(std::move(diffs));
}

}  // namespace valstab::linalg
