#ifndef CZITER_ROOTS_HPP
#define CZITER_ROOTS_HPP

#include <vector>

#include "cziter/errors.hpp"
#include "cziter/polynomial.hpp"
#include "cziter/quadext.hpp"
#include "cziter/rational.hpp"

namespace cziter {

// minimal complex type usable with multiprecision reals (std::complex is only
// specified for the builtin floating types)
template <class R>
struct Cx {
  R re, im;
  Cx() : re(0), im(0) {}
  Cx(int v) : re(v), im(0) {}
  explicit Cx(R r) : re(std::move(r)), im(0) {}
  explicit Cx(const Rat& q) : re(to_real<R>(q)), im(0) {}
  Cx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

  Cx operator-() const { return Cx(-re, -im); }
  Cx operator+(const Cx& o) const { return Cx(re + o.re, im + o.im); }
  Cx operator-(const Cx& o) const { return Cx(re - o.re, im - o.im); }
  Cx operator*(const Cx& o) const {
    return Cx(re * o.re - im * o.im, re * o.im + im * o.re);
  }
  Cx operator/(const Cx& o) const {
    R n = o.re * o.re + o.im * o.im;
    return Cx((re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n);
  }
  Cx& operator+=(const Cx& o) { return *this = *this + o; }
  Cx& operator-=(const Cx& o) { return *this = *this - o; }
  Cx conj() const { return Cx(re, -im); }
  R norm_sq() const { return re * re + im * im; }
  R abs() const { return sqrt(norm_sq()); }
};

// all roots of a monic polynomial by Durand-Kerner iteration;
// nullopt when the iteration fails to settle within max_iter
template <class R>
std::optional<std::vector<Cx<R>>> durand_kerner(const std::vector<Cx<R>>& monic_coeffs,
                                                const R& step_tol, int max_iter = 2000) {
  int n = int(monic_coeffs.size()) - 1;
  if (n < 1) return std::vector<Cx<R>>{};
  auto eval = [&](const Cx<R>& z) {
    Cx<R> acc(0);
    for (int i = n; i >= 0; --i) acc = acc * z + monic_coeffs[i];
    return acc;
  };
  R radius(1);
  for (int i = 0; i < n; ++i) {
    R a = monic_coeffs[i].abs();
    if (a > radius) radius = a;
  }
  radius += R(1);
  // seed angles avoid real-axis symmetry traps
  std::vector<Cx<R>> z(n);
  R pi = atan(R(1)) * 4;
  for (int i = 0; i < n; ++i) {
    R ang = (R(2) * pi * i) / n + R(1) / 2;
    z[i] = Cx<R>(radius * cos(ang), radius * sin(ang));
  }
  for (int iter = 0; iter < max_iter; ++iter) {
    R max_step(0);
    for (int i = 0; i < n; ++i) {
      Cx<R> denom(1);
      for (int j = 0; j < n; ++j)
        if (j != i) denom = denom * (z[i] - z[j]);
      Cx<R> step = eval(z[i]) / denom;
      z[i] -= step;
      R s = step.abs();
      if (s > max_step) max_step = s;
    }
    if (max_step < step_tol) return z;
  }
  return std::nullopt;
}

// exact roots of a monic rational quadratic y^2 + p y + q
struct QuadraticRoots {
  bool rational;       // true: two rational roots r1, r2
  bool complex_pair;   // true: a +- i b sqrt(d) (b > 0)
  Rat r1, r2;          // rational case
  Rat a, b;            // irrational case: a +- b sqrt(d), b > 0
  Int d;               // squarefree part of the discriminant
};

inline QuadraticRoots solve_monic_quadratic(const Rat& p, const Rat& q) {
  QuadraticRoots out{};
  Rat disc = p * p - 4 * q;
  Rat half_p = -p / 2;
  if (disc == 0) {
    out.rational = true;
    out.r1 = out.r2 = half_p;
    return out;
  }
  // disc = n/m; sqrt(disc) = sqrt(n m)/m
  Int nm = num(disc) * den(disc);
  bool neg = nm < 0;
  auto [core, outer] = squarefree_split(abs(nm));
  Rat scale(outer, den(disc));
  if (core == 1) {
    if (neg) {
      out.complex_pair = true;
      out.a = half_p;
      out.b = scale / 2;
      out.d = 1;
    } else {
      out.rational = true;
      out.r1 = half_p + scale / 2;
      out.r2 = half_p - scale / 2;
    }
    return out;
  }
  out.complex_pair = neg;
  out.a = half_p;
  out.b = scale / 2;
  out.d = core;
  return out;
}

// numeric roots of a squarefree rational polynomial at escalating precision;
// returns roots at 256-bit working type. enforces the pairwise separation
// threshold 2^-40 required by downstream classification.
inline std::vector<Cx<Real256>> solve_squarefree_numeric(const Poly<Rat>& f) {
  if (f.degree() < 1) return {};
  Poly<Rat> m = f.monic();
  auto attempt = [&](auto real_tag, int bits) -> std::optional<std::vector<Cx<Real256>>> {
    using R = decltype(real_tag);
    std::vector<Cx<R>> coeffs;
    coeffs.reserve(m.degree() + 1);
    for (int i = 0; i <= m.degree(); ++i) coeffs.emplace_back(m.coeff(i));
    R tol = pow(R(2), -(bits - 16));
    auto roots = durand_kerner(coeffs, tol);
    if (!roots) return std::nullopt;
    // residual sanity at the same precision
    for (const auto& z : *roots) {
      Cx<R> v = m.template eval<Cx<R>>(z);
      R scale = pow(R(1) + z.abs(), m.degree());
      if (v.abs() > scale * pow(R(2), -(bits / 2))) return std::nullopt;
    }
    std::vector<Cx<Real256>> out;
    out.reserve(roots->size());
    for (const auto& z : *roots) out.emplace_back(Real256(z.re), Real256(z.im));
    return out;
  };

  std::optional<std::vector<Cx<Real256>>> roots;
  if (!(roots = attempt(Real128(), 128)))
    if (!(roots = attempt(Real256(), 256)))
      roots = attempt(Real512(), 512);
  if (!roots) throw precision_error("root finding failed at 512 bits");

  Real256 sep_min = pow(Real256(2), -40);
  for (size_t i = 0; i < roots->size(); ++i)
    for (size_t j = i + 1; j < roots->size(); ++j) {
      Real256 d = ((*roots)[i] - (*roots)[j]).abs();
      if (d < sep_min)
        throw precision_error("eigenvalue cluster separation below 2^-40");
    }
  return *roots;
}

}  // namespace cziter

#endif
