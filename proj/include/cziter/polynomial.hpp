#ifndef CZITER_POLYNOMIAL_HPP
#define CZITER_POLYNOMIAL_HPP

#include <utility>
#include <vector>

#include "cziter/errors.hpp"
#include "cziter/matrix.hpp"
#include "cziter/rational.hpp"

namespace cziter {

// univariate polynomial over an exact field, coefficients low degree first
template <class F>
class Poly {
 public:
  Poly() {}
  explicit Poly(std::vector<F> c) : c_(std::move(c)) { trim(); }
  static Poly constant(const F& v) { return Poly(std::vector<F>{v}); }
  static Poly x() { return Poly(std::vector<F>{F(0), F(1)}); }

  int degree() const { return int(c_.size()) - 1; }  // -1 for zero poly
  bool is_zero() const { return c_.empty(); }
  const F& coeff(int i) const { return c_[i]; }
  const std::vector<F>& coeffs() const { return c_; }
  const F& lead() const { return c_.back(); }

  bool operator==(const Poly& o) const { return c_ == o.c_; }

  Poly operator+(const Poly& o) const {
    std::vector<F> r(std::max(c_.size(), o.c_.size()), F(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Poly(std::move(r));
  }

  Poly operator-(const Poly& o) const {
    std::vector<F> r(std::max(c_.size(), o.c_.size()), F(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return Poly(std::move(r));
  }

  Poly operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<F> r(c_.size() + o.c_.size() - 1, F(0));
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == F(0)) continue;
      for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    return Poly(std::move(r));
  }

  Poly operator*(const F& s) const {
    Poly r(*this);
    for (auto& v : r.c_) v *= s;
    r.trim();
    return r;
  }

  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.is_zero()) throw computation_error("polynomial division by zero");
    Poly rem(*this);
    if (rem.degree() < d.degree()) return {Poly(), rem};
    std::vector<F> q(size_t(rem.degree() - d.degree()) + 1, F(0));
    F lead_inv = F(1) / d.lead();
    while (!rem.is_zero() && rem.degree() >= d.degree()) {
      int k = rem.degree() - d.degree();
      F f = rem.lead() * lead_inv;
      q[k] = f;
      for (size_t i = 0; i < d.c_.size(); ++i) rem.c_[k + i] -= f * d.c_[i];
      rem.trim();
    }
    return {Poly(std::move(q)), rem};
  }

  Poly operator/(const Poly& d) const { return divmod(d).first; }
  Poly operator%(const Poly& d) const { return divmod(d).second; }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<F> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * F(int(i));
    return Poly(std::move(r));
  }

  template <class V>
  V eval(const V& x) const {
    V acc(0);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + V(c_[i]);
    return acc;
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return *this * (F(1) / lead());
  }

  // f(x) -> x^deg * f(1/x)
  Poly reversed() const {
    std::vector<F> r(c_.rbegin(), c_.rend());
    return Poly(std::move(r));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == F(0)) c_.pop_back();
  }
  std::vector<F> c_;
};

template <class F>
Poly<F> poly_gcd(Poly<F> a, Poly<F> b) {
  while (!b.is_zero()) {
    Poly<F> r = a % b;
    a = std::move(b);
    b = std::move(r).monic();
  }
  return a.monic();
}

// Yun's algorithm: returns parts[i] with f ~ prod parts[i]^(i+1), each squarefree
template <class F>
std::vector<Poly<F>> squarefree_parts(const Poly<F>& f) {
  std::vector<Poly<F>> parts;
  if (f.degree() <= 0) return parts;
  Poly<F> fp = f.derivative();
  Poly<F> g = poly_gcd(f, fp);
  Poly<F> c = f / g;
  Poly<F> d = fp / g - c.derivative();
  while (c.degree() > 0) {
    Poly<F> a = poly_gcd(c, d);
    parts.push_back(a);
    c = c / a;
    d = d / a - c.derivative();
  }
  return parts;
}

// characteristic polynomial by the Faddeev-LeVerrier recurrence (division-free
// up to the integer divisions, exact over the rationals)
inline Poly<Rat> char_poly(const RatMat& m) {
  if (m.rows() != m.cols()) throw dimension_error("char_poly of non-square matrix");
  int n = m.rows();
  std::vector<Rat> c(size_t(n) + 1, Rat(0));
  c[n] = 1;
  RatMat mk = RatMat::identity(n);
  for (int k = 1; k <= n; ++k) {
    mk = m * mk;
    Rat ck = -mk.trace() / k;
    c[n - k] = ck;
    for (int i = 0; i < n; ++i) mk(i, i) += ck;
  }
  return Poly<Rat>(std::move(c));
}

// p palindromic of even degree 2m: p(x) = x^m q(x + 1/x) with deg q = m.
// requires p(x) == x^deg p(1/x) exactly.
inline Poly<Rat> palindromic_reduce(const Poly<Rat>& p) {
  int deg = p.degree();
  if (deg < 0 || deg % 2 != 0) throw structure_error("palindromic_reduce needs even degree");
  if (!(p == p.reversed())) throw structure_error("polynomial is not palindromic");
  int m = deg / 2;
  // V_i(y) with V_i(x + 1/x) = x^i + x^{-i}: V_0 = 2, V_1 = y, V_{i+1} = y V_i - V_{i-1}
  std::vector<Poly<Rat>> v;
  v.push_back(Poly<Rat>::constant(Rat(2)));
  v.push_back(Poly<Rat>::x());
  for (int i = 2; i <= m; ++i) v.push_back(Poly<Rat>::x() * v[i - 1] - v[i - 2]);
  Poly<Rat> q = Poly<Rat>::constant(p.coeff(m));
  for (int i = 1; i <= m; ++i) q = q + v[i] * p.coeff(m + i);
  return q;
}

// divide out the largest power of (x - root); returns {quotient, multiplicity}
template <class F>
std::pair<Poly<F>, int> strip_root(Poly<F> p, const F& root) {
  Poly<F> lin(std::vector<F>{-root, F(1)});
  int mult = 0;
  while (true) {
    auto [q, r] = p.divmod(lin);
    if (!r.is_zero()) break;
    p = std::move(q);
    ++mult;
  }
  return {p, mult};
}

}  // namespace cziter

#endif
