#include "valstab/rational.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace valstab {

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw InputError("empty rational literal");
  auto is_int = [](std::string_view s) {
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  std::string_view num = text, den;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
    if (den.empty() || den.find('/') != std::string_view::npos)
      throw InputError("malformed rational literal: '" + std::string(text) + "'");
  }
  if (!is_int(num) || (!den.empty() && !is_int(den)))
    throw InputError("malformed rational literal: '" + std::string(text) + "'");
  Rational q;
  if (mpq_set_str(q.get_mpq_t(), std::string(text).c_str(), 10) != 0)
    throw InputError("malformed rational literal: '" + std::string(text) + "'");
  if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
    throw InputError("zero denominator in rational literal: '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const QVec& v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += to_string(v[i]);
  }
  return out + ")";
}

std::string to_string(const IntVec& v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i].get_str();
  }
  return out + ")";
}

std::string decimal_string(const Rational& q, int digits, RoundDir dir) {
  if (digits < 0) digits = 0;
  const bool neg = sgn(q) < 0;
  Rational a = abs(q);
  Zint scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  // a * 10^digits = t + r/den with 0 <= r < den
  Zint num = a.get_num() * scale;
  const Zint& den = a.get_den();
  Zint t, r;
  mpz_fdiv_qr(t.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  bool bump = false;
  if (r != 0) {
    switch (dir) {
      case RoundDir::Down: bump = neg; break;         // toward -infinity
      case RoundDir::Up: bump = !neg; break;          // toward +infinity
      case RoundDir::Nearest: bump = (2 * r >= den); break;
    }
  }
  if (bump) t += 1;
  std::string body = t.get_str();
  if (digits > 0) {
    if (static_cast<int>(body.size()) <= digits)
      body.insert(0, static_cast<size_t>(digits) + 1 - body.size(), '0');
    body.insert(body.size() - static_cast<size_t>(digits), ".");
  }
  if (neg && t != 0) body.insert(0, "-");
  return body;
}

Rational pow_int(const Rational& q, long e) {
  if (e == 0) return Rational(1);
  bool invert = e < 0;
  unsigned long k = invert ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  if (invert && sgn(q) == 0) throw InternalError("pow_int: zero base with negative exponent");
  Rational out;
  mpz_pow_ui(mpq_numref(out.get_mpq_t()), mpq_numref(q.get_mpq_t()), k);
  mpz_pow_ui(mpq_denref(out.get_mpq_t()), mpq_denref(q.get_mpq_t()), k);
  out.canonicalize();
  if (invert) {
    Rational inv;
    mpq_inv(inv.get_mpq_t(), out.get_mpq_t());
    return inv;
  }
  return out;
}

Zint gcd_all(const IntVec& v) {
  Zint g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

IntVec primitive_part(const IntVec& v) {
  Zint g = gcd_all(v);
  if (g == 0 || g == 1) return v;
  IntVec out = v;
  for (auto& x : out) x /= g;
  return out;
}

RatInterval RatInterval::operator*(const RatInterval& o) const {
  Rational c[4] = {lo * o.lo, lo * o.hi, hi * o.lo, hi * o.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

RatInterval RatInterval::inv() const {
  if (sgn(lo) <= 0 && sgn(hi) >= 0)
    throw InternalError("RatInterval::inv: interval straddles zero");
  return {1 / hi, 1 / lo};
}

RatInterval RatInterval::pow(unsigned e) const {
  RatInterval out(Rational(1));
  RatInterval base = *this;
  for (unsigned i = 0; i < e; ++i) out = out * base;
  return out;
}

RatInterval nth_root_bounds(const Rational& x, unsigned n, unsigned precision_bits) {
  if (sgn(x) < 0) throw InternalError("nth_root_bounds: negative radicand");
  if (n == 0) throw InternalError("nth_root_bounds: zeroth root");
  if (sgn(x) == 0) return RatInterval(Rational(0));
  // floor(x^(1/n) * 2^m) = floor( floor(x * 2^(m*n))^(1/n) )
  const unsigned long m = precision_bits;
  Zint scaled = (x.get_num() << (m * n)) / x.get_den();
  Zint root;
  int exact = mpz_root(root.get_mpz_t(), scaled.get_mpz_t(), n);
  Zint two_m = Zint(1) << m;
  Rational lo(root, two_m);
  lo.canonicalize();
  // When x is an exact n-th power of a dyadic the floor root is already exact.
  if (exact && pow_int(lo, static_cast<long>(n)) == x) return RatInterval(lo);
  Rational hi(root + 1, two_m);
  hi.canonicalize();
  return {lo, hi};
}

}  // namespace valstab
