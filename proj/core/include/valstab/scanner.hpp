#ifndef VALSTAB_SCANNER_HPP
#define VALSTAB_SCANNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "valstab/invariants.hpp"

namespace valstab::scanner {

using toric::DivisorClass;
using toric::ToricValuation;
using toric::ToricVariety;

/**
 * A rectangular slice L0 + a H1 + b H2 of the class space.  `grid_a` /
 * `grid_b` count cells per axis (so grid_a+1 sample points); a degenerate
 * slice with grid_b = 0 scans the ray L0 + a H1 only.
 */
struct SliceSpec {
  DivisorClass l0, h1, h2;
  Rational a0, a1, b0, b1;
  int grid_a = 16, grid_b = 16;
  int budget = 3;
};

struct ScanRecord {
  Rational a, b;
  bool ample = false;
  std::optional<Rational> zeta;
  IntVec min_val;
  std::optional<Rational> mu, s, stilde, vol;
  long ms = 0;  // zero unless timing was requested (reruns stay byte-identical)
};

/// All toric valuations with sup-norm at most `budget`: both signs kept
/// (v and -v are different valuations), lexicographic order.
std::vector<ToricValuation> enumerate_valuations(int n, int budget);

struct ScanOptions {
  std::string resume_path;  // JSONL journal; empty disables persistence
  int workers = 0;          // 0: env override or hardware default
  bool timing = false;      // fill the ms field with wall-clock time
};

/**
 * Evaluates zeta (budget-restricted) with mu, s, s~, Vol at every ample grid
 * point of the slice.  Deterministic record order (row-major in (a, b));
 * resumable through the JSONL journal keyed by exact grid coordinates.
 * Throws InputError("slice misses ample cone") when no grid point is ample.
 */
std::vector<ScanRecord> scan_slice(const ToricVariety& x, const SliceSpec& spec,
                                   const ScanOptions& options = {});

struct RefinementFlag {
  Rational level;
  Rational a, b;  // grid point with zeta > level isolated among its neighbours
};

struct ContinuityReport {
  Rational max_jump;           // max |delta zeta| over adjacent ample pairs
  Rational lipschitz_like;     // max |delta zeta| / step along each axis
  size_t ample_points = 0;
  size_t adjacent_pairs = 0;
  std::vector<RefinementFlag> flags;
};

/**
 * Adjacent-cell jump statistics of a completed slice plus openness evidence:
 * for each level c, any grid point with zeta > c all of whose neighbours sit
 * at zeta <= c is flagged for refinement.  Fewer than 2x2 ample points raise
 * InputError("insufficient grid").
 */
ContinuityReport continuity_report(const std::vector<ScanRecord>& records, const SliceSpec& spec,
                                   const QVec& levels);

}  // namespace valstab::scanner

#endif
