#ifndef CZITER_RATIONAL_HPP
#define CZITER_RATIONAL_HPP

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <utility>

#include "cziter/errors.hpp"

namespace cziter {

namespace mp = boost::multiprecision;

using Int = mp::cpp_int;
using Rat = mp::cpp_rational;

// escalation ladder used wherever numerics back up the exact layer
using Real128 = mp::number<mp::cpp_bin_float<128, mp::backends::digit_base_2>>;
using Real256 = mp::number<mp::cpp_bin_float<256, mp::backends::digit_base_2>>;
using Real512 = mp::number<mp::cpp_bin_float<512, mp::backends::digit_base_2>>;

inline Int num(const Rat& q) { return numerator(q); }
inline Int den(const Rat& q) { return denominator(q); }

inline int sign_of(const Rat& q) { return q.sign(); }
inline int sign_of(const Int& v) { return v.sign(); }

// floor(a/b) for integers, b > 0
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int floor_rat(const Rat& q) { return floor_div(num(q), den(q)); }

inline Int ceil_rat(const Rat& q) { return -floor_rat(-q); }

inline Rat frac_part(const Rat& q) { return q - Rat(floor_rat(q)); }

inline bool is_integer(const Rat& q) { return den(q) == 1; }

// largest v >= 0 with v*v <= a (a >= 0)
inline Int isqrt(const Int& a) { return mp::sqrt(a); }

inline bool is_square(const Int& a, Int* root = nullptr) {
  if (a < 0) return false;
  Int r = isqrt(a);
  if (root) *root = r;
  return r * r == a;
}

// exact floor(b * sqrt(d)) for integer b (any sign) and nonsquare d > 0
inline Int floor_times_sqrt(const Int& b, const Int& d) {
  if (b == 0) return 0;
  Int v = isqrt(b * b * d);
  // b^2 d is never a perfect square for d nonsquare, so b*sqrt(d) is
  // strictly between consecutive integers
  return b > 0 ? v : -(v + 1);
}

template <class Real>
Real to_real(const Rat& q) {
  return Real(num(q)) / Real(den(q));
}

inline double to_double(const Rat& q) {
  return static_cast<double>(to_real<Real128>(q));
}

// canonical "p/q" (or "p" when q == 1) serialization
inline std::string format_rat(const Rat& q) {
  std::string s = num(q).str();
  if (den(q) != 1) s += "/" + den(q).str();
  return s;
}

struct ParsedRat {
  Rat value;
  bool canonical = true;  // false when input was not in lowest terms / den<0
};

inline ParsedRat parse_rat(const std::string& text) {
  auto bad = [&] { throw input_error("malformed rational '" + text + "'"); };
  std::string::size_type slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      if (text.empty()) bad();
      return {Rat(Int(text)), true};
    }
    std::string ns = text.substr(0, slash);
    std::string ds = text.substr(slash + 1);
    if (ns.empty() || ds.empty() || ds.find('/') != std::string::npos) bad();
    Int n(ns), d(ds);
    if (d == 0) throw input_error("zero denominator in '" + text + "'");
    bool flipped = d < 0;
    if (flipped) {
      n = -n;
      d = -d;
    }
    Rat v(n, d);
    bool canon = !flipped && gcd(abs(n), d) == 1;
    return {v, canon};
  } catch (const input_error&) {
    throw;
  } catch (const std::exception&) {
    bad();
  }
  return {};  // unreachable
}

// rational p/q with q <= max_den and |x - p/q| <= tol, via continued-fraction
// convergents; used to reconstruct exact roots from numerics. if x is within
// tol of such a rational with error << 1/(2 q max_den), the convergent finds it.
template <class Real>
std::optional<Rat> rational_reconstruct(const Real& x, const Int& max_den,
                                        const Real& tol) {
  Real ax = abs(x);
  bool neg = x < 0;
  Real fl = floor(ax);
  if (fl > Real(1e18)) return std::nullopt;
  Int ip = static_cast<Int>(static_cast<long long>(static_cast<double>(fl)));
  while (Real(ip + 1) <= ax) ++ip;
  while (Real(ip) > ax) --ip;
  Real frac = ax - Real(ip);

  auto wrap = [&](const Rat& f) {
    Rat r = Rat(ip) + f;
    return neg ? Rat(-r) : r;
  };
  if (frac <= tol) return wrap(Rat(0));

  Int h2 = 0, h1 = 1, k2 = 1, k1 = 0;  // convergent recurrences
  Real v = frac;
  for (int iter = 0; iter < 200; ++iter) {
    Real af = floor(v);
    if (af > Real(1e18)) break;  // previous convergent was essentially exact
    Int a = static_cast<Int>(static_cast<long long>(static_cast<double>(af)));
    while (Real(a + 1) <= v) ++a;
    while (Real(a) > v) --a;
    Int h = a * h1 + h2, k = a * k1 + k2;
    if (k > max_den) break;
    if (k > 0 && abs(frac - Real(h) / Real(k)) <= tol) return wrap(Rat(h, k));
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    Real rem = v - af;
    if (rem == 0) break;
    v = Real(1) / rem;
  }
  return std::nullopt;
}

}  // namespace cziter

#endif
