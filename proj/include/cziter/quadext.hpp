#ifndef CZITER_QUADEXT_HPP
#define CZITER_QUADEXT_HPP

#include <map>

#include "cziter/errors.hpp"
#include "cziter/rational.hpp"

namespace cziter {

// quadratic extension K[s]/(s^2 - delta) over an exact field K.
// elements carry their delta; base-field elements (b == 0) use delta == 0 and
// mix freely with any extension, so Mat<QuadExt<K>> scalars work unchanged.
template <class K>
class QuadExt {
 public:
  QuadExt() : a_(0), b_(0), delta_(0) {}
  QuadExt(int v) : a_(v), b_(0), delta_(0) {}
  explicit QuadExt(K a) : a_(std::move(a)), b_(0), delta_(0) {}
  QuadExt(K a, K b, K delta) : a_(std::move(a)), b_(std::move(b)), delta_(std::move(delta)) {
    normalize();
  }

  static QuadExt sqrt_of(const K& delta) { return QuadExt(K(0), K(1), delta); }

  const K& base() const { return a_; }
  const K& surd_coeff() const { return b_; }
  const K& delta() const { return delta_; }
  bool in_base_field() const { return b_ == K(0); }

  QuadExt conj() const { return QuadExt(a_, -b_, delta_); }

  bool operator==(const QuadExt& o) const {
    return a_ == o.a_ && b_ == o.b_ && delta_ == o.delta_;
  }
  bool operator!=(const QuadExt& o) const { return !(*this == o); }

  QuadExt operator-() const { return QuadExt(-a_, -b_, delta_); }

  QuadExt operator+(const QuadExt& o) const {
    K d = merged_delta(o);
    return QuadExt(a_ + o.a_, b_ + o.b_, d);
  }
  QuadExt operator-(const QuadExt& o) const {
    K d = merged_delta(o);
    return QuadExt(a_ - o.a_, b_ - o.b_, d);
  }
  QuadExt operator*(const QuadExt& o) const {
    K d = merged_delta(o);
    return QuadExt(a_ * o.a_ + b_ * o.b_ * d, a_ * o.b_ + b_ * o.a_, d);
  }
  QuadExt operator/(const QuadExt& o) const { return *this * o.inverse(); }

  QuadExt& operator+=(const QuadExt& o) { return *this = *this + o; }
  QuadExt& operator-=(const QuadExt& o) { return *this = *this - o; }
  QuadExt& operator*=(const QuadExt& o) { return *this = *this * o; }
  QuadExt& operator/=(const QuadExt& o) { return *this = *this / o; }

  QuadExt inverse() const {
    K norm = a_ * a_ - b_ * b_ * delta_;
    if (norm == K(0)) throw computation_error("division by zero in quadratic extension");
    K ninv = K(1) / norm;
    return QuadExt(a_ * ninv, -b_ * ninv, delta_);
  }

 private:
  K merged_delta(const QuadExt& o) const {
    if (b_ == K(0)) return o.delta_;
    if (o.b_ == K(0)) return delta_;
    if (delta_ != o.delta_)
      throw computation_error("mixing incompatible quadratic extensions");
    return delta_;
  }
  void normalize() {
    if (b_ == K(0)) delta_ = K(0);
  }

  K a_, b_, delta_;
};

// largest squarefree divisor: d = core * square; returns {core, sqrt(square)}.
// full trial division; inputs here are small normalized discriminants.
// d = core * outer^2 with core free of square factors up to the trial bound.
// Perfect squares of any size are recognized exactly; otherwise factors above
// the bound are left inside core, which is harmless as long as the same value
// always enters through the same route (true for everything built here).
inline std::pair<Int, Int> squarefree_split(Int d) {
  if (d <= 0) throw input_error("squarefree_split needs a positive integer");
  Int core = 1, outer = 1;
  Int root;
  if (is_square(d, &root)) return {Int(1), root};
  const Int bound = 1000000;
  for (Int p = 2; p * p <= d && p <= bound; p += (p == 2 ? 1 : 2)) {
    int e = 0;
    while (d % p == 0) {
      d /= p;
      ++e;
    }
    for (int i = 0; i + 1 < e; i += 2) outer *= p;
    if (e % 2 == 1) core *= p;
    if (e > 0 && is_square(d, &root)) {
      outer *= root;
      d = 1;
      break;
    }
  }
  core *= d;  // leftover: prime, 1, or a large factor with no small squares
  return {core, outer};
}

// exact element of Q(sqrt(d1), sqrt(d2), ...): rational part plus a finite sum
// q_i * sqrt(d_i) with distinct squarefree d_i > 1. closed under +, *, and
// inverse (by iterated conjugation), with an exact zero test.
class SurdSum {
 public:
  SurdSum() {}
  SurdSum(int v) { set(1, Rat(v)); }
  explicit SurdSum(Rat v) { set(1, std::move(v)); }

  static SurdSum sqrt_term(const Rat& coeff, const Int& d) {
    if (d <= 0) throw input_error("sqrt_term needs positive radicand");
    auto [core, outer] = squarefree_split(d);
    SurdSum s;
    s.set(core, coeff * Rat(outer));
    return s;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
  }
  Rat rational_part() const {
    auto it = terms_.find(Int(1));
    return it == terms_.end() ? Rat(0) : it->second;
  }
  const std::map<Int, Rat>& terms() const { return terms_; }

  bool operator==(const SurdSum& o) const { return terms_ == o.terms_; }
  bool operator!=(const SurdSum& o) const { return !(*this == o); }

  SurdSum operator-() const {
    SurdSum r(*this);
    for (auto& [d, q] : r.terms_) q = -q;
    return r;
  }

  SurdSum operator+(const SurdSum& o) const {
    SurdSum r(*this);
    for (const auto& [d, q] : o.terms_) r.add(d, q);
    return r;
  }
  SurdSum operator-(const SurdSum& o) const { return *this + (-o); }

  SurdSum operator*(const SurdSum& o) const {
    SurdSum r;
    for (const auto& [d1, q1] : terms_)
      for (const auto& [d2, q2] : o.terms_) {
        if (d1 == d2) {
          r.add(1, q1 * q2 * Rat(d1));
        } else {
          // keys are squarefree, so d1*d2 = g^2 * (d1/g)(d2/g) with the
          // cofactors coprime and squarefree; no factorization needed
          Int g = boost::multiprecision::gcd(d1, d2);
          r.add((d1 / g) * (d2 / g), q1 * q2 * Rat(g));
        }
      }
    return r;
  }

  SurdSum& operator+=(const SurdSum& o) { return *this = *this + o; }
  SurdSum& operator-=(const SurdSum& o) { return *this = *this - o; }
  SurdSum& operator*=(const SurdSum& o) { return *this = *this * o; }

  // rationalize by conjugating over one surd at a time
  SurdSum inverse() const {
    if (is_zero()) throw computation_error("division by zero in surd arithmetic");
    if (is_rational()) return SurdSum(Rat(1) / rational_part());
    Int d = 0;
    for (const auto& [di, qi] : terms_)
      if (di > 1) {
        d = di;
        break;
      }
    // split as A + B sqrt(d) with A, B free of sqrt(d)
    SurdSum a, b;
    for (const auto& [di, qi] : terms_) {
      if (di == d) {
        b.add(1, qi);
      } else if (di % d == 0) {
        // sqrt(di) = sqrt(d) * sqrt(di/d) for squarefree di divisible by d
        b.add(di / d, qi);
      } else {
        a.add(di, qi);
      }
    }
    SurdSum sd = sqrt_term(Rat(1), d);
    SurdSum denom = a * a - b * b * SurdSum(Rat(d));
    SurdSum num = a - b * sd;
    return num * denom.inverse();
  }

  SurdSum operator/(const SurdSum& o) const { return *this * o.inverse(); }

  template <class Real>
  Real to_real() const {
    Real acc(0);
    for (const auto& [d, q] : terms_) {
      Real t = cziter::to_real<Real>(q);
      if (d > 1) t *= sqrt(Real(d));
      acc += t;
    }
    return acc;
  }

  // exact sign: zero iff all coefficients vanish (sqrt of distinct squarefree
  // integers are linearly independent over Q); otherwise escalate precision
  // until the numeric value clears its rounding budget
  int sign() const {
    if (is_zero()) return 0;
    if (is_rational()) return sign_of(rational_part());
    if (auto s = try_sign<Real128>(120)) return *s;
    if (auto s = try_sign<Real256>(248)) return *s;
    if (auto s = try_sign<Real512>(504)) return *s;
    throw precision_error("sign of surd sum undecided at 512 bits");
  }

  bool operator<(const SurdSum& o) const { return (*this - o).sign() < 0; }
  bool operator>(const SurdSum& o) const { return (*this - o).sign() > 0; }
  bool operator<=(const SurdSum& o) const { return (*this - o).sign() <= 0; }
  bool operator>=(const SurdSum& o) const { return (*this - o).sign() >= 0; }

 private:
  template <class Real>
  std::optional<int> try_sign(int effective_bits) const {
    Real v = to_real<Real>();
    Real scale(0);
    for (const auto& [d, q] : terms_) {
      Real t = cziter::to_real<Real>(q < 0 ? Rat(-q) : q);
      if (d > 1) t *= sqrt(Real(d));
      scale += t;
    }
    Real budget = scale * pow(Real(2), -(effective_bits - 8));
    if (v > budget) return 1;
    if (v < -budget) return -1;
    return std::nullopt;
  }

  void set(Int d, Rat q) {
    if (q != 0) terms_[std::move(d)] = std::move(q);
  }
  void add(const Int& d, const Rat& q) {
    if (q == 0) return;
    auto [it, fresh] = terms_.emplace(d, q);
    if (!fresh) {
      it->second += q;
      if (it->second == 0) terms_.erase(it);
    }
  }

  // d -> coefficient, d squarefree, d == 1 for the rational part
  std::map<Int, Rat> terms_;
};

}  // namespace cziter

#endif
