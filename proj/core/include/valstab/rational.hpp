#ifndef VALSTAB_RATIONAL_HPP
#define VALSTAB_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace valstab {

// Exact arithmetic carriers.  Every quantity the library computes is held as
// an mpq_class rational (always canonical: lowest terms, positive denominator).
// Floating point never enters a computation; decimal strings appear only in
// rendered output.
using Rational = mpq_class;
using Zint = mpz_class;
using QVec = std::vector<Rational>;
using IntVec = std::vector<Zint>;

/// Thrown on malformed user input (bad files, bad expressions, bad flags).
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when two independent computation routes disagree or an internal
/// consistency assertion fails.  Always indicates a bug, never bad input.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

/// Parse "p", "-p", or "p/q" into an exact rational.  Whitespace is not
/// permitted; q must be a nonzero integer.  The result is canonicalized.
Rational parse_rational(std::string_view text);

/// Render as "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);

std::string to_string(const QVec& v);
std::string to_string(const IntVec& v);

enum class RoundDir { Down, Up, Nearest };

/// Exact decimal rendering of a rational with `digits` places after the
/// point, rounded in the requested direction.  Deterministic.
std::string decimal_string(const Rational& q, int digits, RoundDir dir = RoundDir::Nearest);

/// q^e for integer e (negative allowed when q != 0).
Rational pow_int(const Rational& q, long e);

Zint gcd_all(const IntVec& v);

/// Divide v by the gcd of its entries (no-op on the zero vector).
IntVec primitive_part(const IntVec& v);

/// Closed rational interval, used to sandwich irrational quantities
/// (outward-rounded root brackets) so that inequality verdicts stay rigorous.
struct RatInterval {
  Rational lo;
  Rational hi;

  RatInterval() = default;
  RatInterval(Rational point) : lo(point), hi(point) {}
  RatInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {}

  RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }
  RatInterval operator-(const RatInterval& o) const { return {lo - o.hi, hi - o.lo}; }
  RatInterval operator*(const RatInterval& o) const;
  /// Reciprocal; requires the interval not to straddle zero.
  RatInterval inv() const;
  RatInterval operator/(const RatInterval& o) const { return *this * o.inv(); }
  /// Power with nonnegative exponent.
  RatInterval pow(unsigned e) const;
};

/// Bracket x^(1/n) between dyadic rationals lo <= x^(1/n) <= hi with
/// hi - lo <= 2^-precision_bits.  Requires x >= 0.
RatInterval nth_root_bounds(const Rational& x, unsigned n, unsigned precision_bits);

}  // namespace valstab

#endif
