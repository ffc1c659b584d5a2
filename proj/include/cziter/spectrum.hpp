#ifndef CZITER_SPECTRUM_HPP
#define CZITER_SPECTRUM_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "cziter/errors.hpp"
#include "cziter/matrix.hpp"
#include "cziter/polynomial.hpp"
#include "cziter/quadext.hpp"
#include "cziter/roots.hpp"

namespace cziter {

enum class NondegeneracyClass { Degenerate, Plus, Minus };

inline NondegeneracyClass nondegeneracy_class(const SymplecticMatrix& m) {
  RatMat d = m.mat() - RatMat::identity(m.dim());
  Rat det = d.det();
  if (det == 0) return NondegeneracyClass::Degenerate;
  return det > 0 ? NondegeneracyClass::Plus : NondegeneracyClass::Minus;
}

// conjugate pair {e^{i theta0}, e^{-i theta0}} with theta0 in (0, pi)
struct UnitPair {
  std::optional<SurdSum> cos_exact;
  std::optional<SurdSum> sin_exact;  // set when cos_exact is rational
  Real256 cos_approx;
  int alg = 0;  // algebraic multiplicity of each conjugate eigenvalue
  int geom = 0;
  // Hermitian Krein signature (p, q) on the generalized eigenspace of
  // e^{+i theta0}; p + q == alg when known
  bool krein_known = false;
  int krein_plus = 0, krein_minus = 0;

  double theta0_d() const { return std::acos(static_cast<double>(cos_approx)); }
};

// real pair {lambda, 1/lambda} off the unit circle
struct RealPair {
  std::optional<SurdSum> y_exact;       // lambda + 1/lambda
  std::optional<SurdSum> lambda_exact;  // outer eigenvalue, when expressible
  Real256 lambda_approx;                // representative with |lambda| > 1
  bool positive = true;
  int alg = 0, geom = 0;
};

// complex quadruple {lambda, conj, 1/lambda, 1/conj} off circle and reals
struct Quadruple {
  struct YDesc {  // y = a +- i b sqrt(d)
    Rat a, b;
    Int d;
  };
  std::optional<YDesc> y_exact;
  Cx<Real256> lambda_approx;  // |lambda| > 1, Im > 0
  int alg = 0, geom = 0;      // per eigenvalue, equal across the quadruple
};

struct FixedEig {  // eigenvalue +1 or -1
  int alg = 0, geom = 0;
};

struct SpectrumReport {
  int dim = 0;
  std::vector<UnitPair> unit_pairs;
  std::vector<RealPair> real_pairs;
  std::vector<Quadruple> quadruples;
  FixedEig plus_one, minus_one;
  bool exact = true;  // char poly fully factored over Q / quadratic extensions

  int elliptic_height() const {
    int e = plus_one.alg + minus_one.alg;
    for (const auto& u : unit_pairs) e += 2 * u.alg;
    return e;
  }
  int total_algebraic() const {
    int t = plus_one.alg + minus_one.alg;
    for (const auto& u : unit_pairs) t += 2 * u.alg;
    for (const auto& r : real_pairs) t += 2 * r.alg;
    for (const auto& q : quadruples) t += 4 * q.alg;
    return t;
  }
  // total multiplicity of negative real eigenvalues, -1 included
  int negative_real_multiplicity() const {
    int m = minus_one.alg;
    for (const auto& r : real_pairs)
      if (!r.positive) m += 2 * r.alg;
    return m;
  }
};

// geometric multiplicity of a rational-complex candidate re + im*i (exact)
inline int nu(const SymplecticMatrix& m, const Rat& re, const Rat& im = Rat(0));

namespace detail {

template <class L>
struct FromRat;
template <>
struct FromRat<Rat> {
  static Rat get(const Rat& q) { return q; }
};
template <class K>
struct FromRat<QuadExt<K>> {
  static QuadExt<K> get(const Rat& q) { return QuadExt<K>(FromRat<K>::get(q)); }
};

template <class L>
Mat<L> lift_matrix(const RatMat& m) {
  Mat<L> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = FromRat<L>::get(m(i, j));
  return out;
}

// x^deg(g) * g(x + 1/x), exact: sum_k c_k x^{m-k} (x^2+1)^k
inline Poly<Rat> palindromic_lift(const Poly<Rat>& g) {
  int m = g.degree();
  Poly<Rat> xsq1(std::vector<Rat>{1, 0, 1});
  std::vector<Poly<Rat>> powers{Poly<Rat>::constant(Rat(1))};
  for (int k = 1; k <= m; ++k) powers.push_back(powers.back() * xsq1);
  Poly<Rat> acc;
  for (int k = 0; k <= m; ++k) {
    std::vector<Rat> xpow(size_t(m - k) + 1, Rat(0));
    xpow.back() = g.coeff(k);
    acc = acc + powers[k] * Poly<Rat>(std::move(xpow));
  }
  return acc;
}

inline int rank_of_poly_at(const RatMat& m, const Poly<Rat>& g) {
  // Horner evaluation g(M), then rank
  RatMat acc = RatMat::identity(m.rows()) * g.coeff(g.degree());
  for (int i = g.degree() - 1; i >= 0; --i) {
    acc = acc * m;
    for (int k = 0; k < m.rows(); ++k) acc(k, k) += g.coeff(i);
  }
  return acc.rank();
}

template <class L>
std::vector<std::vector<L>> kernel_basis_power(const RatMat& m, const L& lambda,
                                               int power) {
  Mat<L> a = lift_matrix<L>(m);
  for (int i = 0; i < a.rows(); ++i) a(i, i) -= lambda;
  Mat<L> acc = a;
  for (int k = 1; k < power; ++k) acc = acc * a;
  return acc.kernel_basis();
}

template <class L>
int kernel_dim_power(const RatMat& m, const L& lambda, int power) {
  Mat<L> a = lift_matrix<L>(m);
  for (int i = 0; i < a.rows(); ++i) a(i, i) -= lambda;
  Mat<L> acc = a;
  for (int k = 1; k < power; ++k) acc = acc * a;
  return a.rows() - acc.rank();
}

// Hermitian signature by congruence diagonalization over an exact field with
// involution x -> x.conj(); sgn must return the exact sign of self-conjugate
// elements. s_unit is any element with conj(s_unit) == -s_unit.
template <class L, class SignFn>
std::pair<int, int> hermitian_signature(Mat<L> g, SignFn sgn, const L& s_unit) {
  int m = g.rows(), p = 0, q = 0;
  auto swap_rc = [&](int a, int b) {
    if (a == b) return;
    for (int j = 0; j < m; ++j) std::swap(g(a, j), g(b, j));
    for (int i = 0; i < m; ++i) std::swap(g(i, a), g(i, b));
  };
  // basis change w_i = u_i + c u_j: row_i += conj(c) row_j, col_i += c col_j
  auto mix = [&](int i, int j, const L& c) {
    L cc = c.conj();
    for (int t = 0; t < m; ++t) g(i, t) += cc * g(j, t);
    for (int t = 0; t < m; ++t) g(t, i) += c * g(t, j);
  };
  for (int k = 0; k < m; ++k) {
    if (g(k, k) == L(0)) {
      for (int t = k + 1; t < m; ++t)
        if (!(g(t, t) == L(0))) {
          swap_rc(k, t);
          break;
        }
    }
    if (g(k, k) == L(0)) {
      int bi = -1, bj = -1;
      for (int i = k; i < m && bi < 0; ++i)
        for (int j = i + 1; j < m; ++j)
          if (!(g(i, j) == L(0))) {
            bi = i;
            bj = j;
            break;
          }
      if (bi < 0) throw structure_error("unexpectedly degenerate Krein form");
      // all remaining diagonals vanish here, so the mixed diagonal entry is
      // c g(i,j) + conj(c g(i,j))
      L a = g(bi, bj);
      if (a + a.conj() == L(0))
        mix(bi, bj, s_unit);
      else
        mix(bi, bj, L(1));
      swap_rc(k, bi);
    }
    L d = g(k, k);
    int sg = sgn(d);
    if (sg == 0) throw structure_error("Krein pivot with undetermined sign");
    (sg > 0 ? p : q) += 1;
    for (int i = k + 1; i < m; ++i) {
      if (g(i, k) == L(0)) continue;
      L c = -(g(i, k).conj()) / d;
      mix(i, k, c);
    }
  }
  return {p, q};
}

// Gram matrix (conj(v_a)^T J v_b) / s over L, standard J
template <class L>
Mat<L> krein_gram(const std::vector<std::vector<L>>& basis, const L& s) {
  int half = int(basis.empty() ? 0 : basis[0].size()) / 2;
  int m = int(basis.size());
  Mat<L> g(m, m);
  L sinv = L(1) / s;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      L acc(0);
      for (int i = 0; i < half; ++i) {
        acc += basis[a][i].conj() * basis[b][half + i];
        acc -= basis[a][half + i].conj() * basis[b][i];
      }
      g(a, b) = acc * sinv;
    }
  return g;
}

inline SurdSum sqrt_of_rat(const Rat& r) {
  // sqrt(n/m) = sqrt(n m) / m for nonnegative n/m
  if (r < 0) throw computation_error("sqrt_of_rat needs nonnegative input");
  if (r == 0) return SurdSum();
  return SurdSum::sqrt_term(Rat(1, den(r)), num(r) * den(r));
}

inline SurdSum ext1_to_surd(const QuadExt<Rat>& v) {
  // embed an element of Q(sqrt(delta)), delta > 0, into surd arithmetic
  SurdSum out(v.base());
  if (v.surd_coeff() != 0) {
    const Rat& d = v.delta();
    out += SurdSum::sqrt_term(v.surd_coeff() * Rat(1, den(d)), num(d) * den(d));
  }
  return out;
}

inline int exact_sign_ext1(const QuadExt<Rat>& v) {
  if (v.surd_coeff() == 0) return sign_of(v.base());
  return ext1_to_surd(v).sign();
}

// ---- numeric fallback pieces (256-bit complex arithmetic) ----

using C256 = Cx<Real256>;

inline std::vector<std::vector<C256>> numeric_kernel(std::vector<std::vector<C256>> a,
                                                     const Real256& tol) {
  int rows = int(a.size()), cols = rows ? int(a[0].size()) : 0;
  std::vector<int> pivot_col;
  int r = 0;
  for (int col = 0; col < cols && r < rows; ++col) {
    int piv = -1;
    Real256 best = tol;
    for (int i = r; i < rows; ++i) {
      Real256 v = a[i][col].abs();
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (piv < 0) continue;
    std::swap(a[piv], a[r]);
    C256 inv = C256(1) / a[r][col];
    for (int j = col; j < cols; ++j) a[r][j] = a[r][j] * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      C256 f = a[i][col];
      if (f.abs() == Real256(0)) continue;
      for (int j = col; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col.push_back(col);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<C256>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<C256> v(cols, C256(0));
    v[free] = C256(1);
    for (int i = 0; i < int(pivot_col.size()); ++i) v[pivot_col[i]] = -a[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

// signature of the numeric Hermitian Krein form on the eigenspace of lambda;
// nullopt when a rank or pivot decision falls under the threshold
inline std::optional<std::pair<int, int>> numeric_krein(const RatMat& m,
                                                        const C256& lambda,
                                                        int expect_dim) {
  int dim = m.rows(), half = dim / 2;
  std::vector<std::vector<C256>> a(dim, std::vector<C256>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      a[i][j] = C256(to_real<Real256>(m(i, j)), Real256(0));
      if (i == j) a[i][j] -= lambda;
    }
  Real256 tol = pow(Real256(2), -40);
  auto basis = numeric_kernel(std::move(a), tol);
  if (int(basis.size()) != expect_dim) return std::nullopt;
  int n = expect_dim;
  // H(a,b) = -i conj(v_a)^T J v_b
  std::vector<std::vector<C256>> h(n, std::vector<C256>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      C256 acc(0);
      for (int i = 0; i < half; ++i) {
        acc += basis[x][i].conj() * basis[y][half + i];
        acc -= basis[x][half + i].conj() * basis[y][i];
      }
      h[x][y] = C256(acc.im, -acc.re);  // times -i
    }
  int p = 0, q = 0;
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    Real256 best = tol;
    for (int t = k; t < n; ++t)
      if (abs(h[t][t].re) > best) {
        best = abs(h[t][t].re);
        piv = t;
      }
    if (piv < 0) return std::nullopt;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(h[piv][j], h[k][j]);
      for (int i = 0; i < n; ++i) std::swap(h[i][piv], h[i][k]);
    }
    Real256 d = h[k][k].re;
    (d > 0 ? p : q) += 1;
    for (int i = k + 1; i < n; ++i) {
      C256 c = -(h[i][k].conj()) / C256(d, Real256(0));
      C256 cc = c.conj();
      for (int t = 0; t < n; ++t) h[i][t] += cc * h[k][t];
      for (int t = 0; t < n; ++t) h[t][i] += c * h[t][k];
    }
  }
  return std::make_pair(p, q);
}

// exact Krein signature over L = base(sqrt(ysq4)), with lambda = (y + s)/2
// understood as e^{+i theta0} (s the branch with positive imaginary part)
template <class L, class SignFn>
void fill_krein_exact(UnitPair& u, const RatMat& mm, const L& lambda, const L& s,
                      SignFn sgn) {
  auto basis = kernel_basis_power(mm, lambda, u.alg);
  if (int(basis.size()) != u.alg)
    throw structure_error("generalized eigenspace dimension mismatch");
  Mat<L> g = krein_gram(basis, s);
  auto [p, q] = hermitian_signature(std::move(g), sgn, s);
  if (p + q != u.alg) throw structure_error("Krein signature does not fill eigenspace");
  u.krein_plus = p;
  u.krein_minus = q;
  u.krein_known = true;
}

inline void classify_rational_y(SpectrumReport& rep, const SymplecticMatrix& m,
                                const Rat& y, int mult) {
  const RatMat& mm = m.mat();
  Rat ysq4 = y * y - 4;
  if (ysq4 == 0) throw structure_error("eigenvalue +-1 leaked past exact stripping");
  if (abs(num(y)) < 2 * den(y)) {
    // |y| < 2: unit pair, cos = y/2
    UnitPair u;
    u.cos_exact = SurdSum(y / 2);
    u.sin_exact = sqrt_of_rat(Rat(1) - y * y / 4);
    u.cos_approx = to_real<Real256>(y / 2);
    u.alg = mult;
    using L = QuadExt<Rat>;
    L s = L::sqrt_of(ysq4);  // formally 2 i sin(theta0), positive branch
    L lambda = (L(y) + s) / L(2);
    u.geom = mult == 1 ? 1 : kernel_dim_power(mm, lambda, 1);
    fill_krein_exact(u, mm, lambda, s,
                     [](const L& v) { return sign_of(v.base()); });
    rep.unit_pairs.push_back(std::move(u));
  } else {
    RealPair r;
    r.y_exact = SurdSum(y);
    r.positive = y > 0;
    Int root;
    if (is_square(num(ysq4) * den(ysq4), &root)) {
      // rational lambda
      Rat sq(root, den(ysq4));
      Rat lam = (y + (r.positive ? sq : -sq)) / 2;
      r.lambda_exact = SurdSum(lam);
      r.lambda_approx = to_real<Real256>(lam);
      RatMat a = mm;
      for (int i = 0; i < a.rows(); ++i) a(i, i) -= lam;
      r.geom = mult == 1 ? 1 : a.rows() - a.rank();
    } else {
      SurdSum sq = sqrt_of_rat(ysq4);
      SurdSum lam = (SurdSum(y) + (r.positive ? sq : -sq)) * SurdSum(Rat(1, 2));
      r.lambda_exact = lam;
      r.lambda_approx = lam.to_real<Real256>();
      if (mult == 1) {
        r.geom = 1;
      } else {
        using L = QuadExt<Rat>;
        L s = L::sqrt_of(ysq4);
        L lambda = (L(y) + s) / L(2);
        r.geom = kernel_dim_power(mm, lambda, 1);
      }
    }
    r.alg = mult;
    rep.real_pairs.push_back(std::move(r));
  }
}

// y = a + sign * b sqrt(d), real quadratic irrational (d > 1 squarefree, b > 0)
inline void classify_quad_real_y(SpectrumReport& rep, const SymplecticMatrix& m,
                                 const Rat& a, const Rat& b, const Int& d, int sign,
                                 int mult) {
  const RatMat& mm = m.mat();
  SurdSum y = SurdSum(a) + SurdSum::sqrt_term(sign > 0 ? b : -b, d);
  int cmp_hi = (y - SurdSum(Rat(2))).sign();
  int cmp_lo = (y + SurdSum(Rat(2))).sign();
  if (cmp_hi == 0 || cmp_lo == 0)
    throw structure_error("quadratic y equal to +-2 escaped stripping");

  using K = QuadExt<Rat>;
  using L = QuadExt<K>;
  K yk(a, sign > 0 ? b : -b, Rat(d));
  K ysq4 = yk * yk - K(4);
  L s = L::sqrt_of(ysq4);
  L lambda = (L(yk) + s) / L(2);

  if (cmp_hi < 0 && cmp_lo > 0) {
    // unit pair
    UnitPair u;
    u.cos_exact = y * SurdSum(Rat(1, 2));
    u.cos_approx = u.cos_exact->to_real<Real256>();
    u.alg = mult;
    u.geom = mult == 1 ? 1 : kernel_dim_power(mm, lambda, 1);
    fill_krein_exact(u, mm, lambda, s, [](const L& v) {
      if (!(v.surd_coeff() == K(0)))
        throw structure_error("Krein pivot not in the real subfield");
      return exact_sign_ext1(v.base());
    });
    rep.unit_pairs.push_back(std::move(u));
  } else {
    RealPair r;
    r.y_exact = y;
    r.positive = y.sign() > 0;
    if (a == 0) {
      // y = b sqrt(d): y^2 - 4 is rational, lambda stays a plain surd sum
      Rat ysq4_rat = b * b * Rat(d) - 4;
      SurdSum sq = sqrt_of_rat(ysq4_rat);
      r.lambda_exact = (y + (r.positive ? sq : -sq)) * SurdSum(Rat(1, 2));
    } else {
      r.lambda_exact = std::nullopt;  // nested radical; reported numerically
    }
    Real256 yv = y.to_real<Real256>();
    Real256 sq = sqrt(yv * yv - 4);
    r.lambda_approx = (yv + (r.positive ? sq : -sq)) / 2;
    r.alg = mult;
    r.geom = mult == 1 ? 1 : kernel_dim_power(mm, lambda, 1);
    rep.real_pairs.push_back(std::move(r));
  }
}

// y = a +- i b sqrt(d): one quadruple (b > 0; d >= 1)
inline void classify_quad_complex_y(SpectrumReport& rep, const SymplecticMatrix& m,
                                    const Rat& a, const Rat& b, const Int& d, int mult) {
  const RatMat& mm = m.mat();
  Quadruple q;
  q.y_exact = Quadruple::YDesc{a, b, d};
  q.alg = mult;
  if (mult == 1) {
    q.geom = 1;
  } else {
    using K = QuadExt<Rat>;
    using L = QuadExt<K>;
    K yk(a, b, Rat(-d));  // y = a + b sqrt(-d)
    K ysq4 = yk * yk - K(4);
    L s = L::sqrt_of(ysq4);
    L lambda = (L(yk) + s) / L(2);
    q.geom = kernel_dim_power(mm, lambda, 1);
  }
  // numeric lambda with |lambda| > 1, Im > 0
  Real256 yre = to_real<Real256>(a), yim = to_real<Real256>(b) * sqrt(Real256(d));
  C256 y(yre, yim);
  C256 disc = y * y - C256(4);
  // complex sqrt by polar decomposition
  Real256 r = disc.abs(), ang = atan2(disc.im, disc.re);
  C256 sq(sqrt(r) * cos(ang / 2), sqrt(r) * sin(ang / 2));
  C256 l1 = (y + sq) / C256(2), l2 = (y - sq) / C256(2);
  C256 lam = l1.norm_sq() >= Real256(1) ? l1 : l2;
  if (lam.im < 0) lam = lam.conj();
  q.lambda_approx = lam;
  rep.quadruples.push_back(std::move(q));
}

inline void classify_numeric_leftover(SpectrumReport& rep, const SymplecticMatrix& m,
                                      const Poly<Rat>& g, int mult) {
  const RatMat& mm = m.mat();
  rep.exact = false;
  auto roots = solve_squarefree_numeric(g);
  Real256 thr = pow(Real256(2), -40);

  int geom = 1;
  if (mult > 1) {
    // kernel of the lifted factor counts geometric multiplicity across all
    // 2 deg(g) eigenvalues at once; Galois symmetry forces an even split
    Poly<Rat> lift = palindromic_lift(g);
    int total = mm.rows() - rank_of_poly_at(mm, lift);
    int denom = 2 * g.degree();
    if (total % denom != 0)
      throw structure_error("geometric multiplicity not equidistributed over a numeric factor");
    geom = total / denom;
    if (geom < 1 || geom > mult)
      throw structure_error("implausible geometric multiplicity from numeric factor");
  }

  std::vector<bool> used(roots.size(), false);
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    const C256& y = roots[i];
    if (abs(y.im) < thr) {
      // real root
      Real256 ay = abs(y.re);
      if (abs(ay - 2) < thr)
        throw precision_error("numeric eigenvalue indistinguishable from +-1");
      used[i] = true;
      if (ay < 2) {
        UnitPair u;
        u.cos_approx = y.re / 2;
        u.alg = mult;
        u.geom = geom;
        if (geom == mult) {
          // semisimple: numeric Krein with escalation handled by threshold
          Real256 sin0 = sqrt(Real256(1) - u.cos_approx * u.cos_approx);
          auto sig = numeric_krein(mm, C256(u.cos_approx, sin0), mult);
          if (sig) {
            u.krein_plus = sig->first;
            u.krein_minus = sig->second;
            u.krein_known = true;
          }
        } else if (mult == 2 && geom == 1) {
          // single 2-block: eigenvector is isotropic, signature forced
          u.krein_plus = 1;
          u.krein_minus = 1;
          u.krein_known = true;
        }
        rep.unit_pairs.push_back(std::move(u));
      } else {
        RealPair r;
        r.positive = y.re > 0;
        Real256 sq = sqrt(y.re * y.re - 4);
        r.lambda_approx = (y.re + (r.positive ? sq : -sq)) / 2;
        r.alg = mult;
        r.geom = geom;
        rep.real_pairs.push_back(std::move(r));
      }
    } else {
      // complex root: find the conjugate partner
      size_t match = roots.size();
      Real256 best = thr;
      for (size_t j = 0; j < roots.size(); ++j) {
        if (j == i || used[j]) continue;
        Real256 dist = (roots[j] - y.conj()).abs();
        if (dist < best) {
          best = dist;
          match = j;
        }
      }
      if (match == roots.size())
        throw precision_error("complex eigenvalue without a conjugate partner");
      used[i] = used[match] = true;
      Quadruple q;
      q.alg = mult;
      q.geom = geom;
      C256 yc = y.im > 0 ? y : y.conj();
      C256 disc = yc * yc - C256(4);
      Real256 r = disc.abs(), ang = atan2(disc.im, disc.re);
      C256 sq(sqrt(r) * cos(ang / 2), sqrt(r) * sin(ang / 2));
      C256 l1 = (yc + sq) / C256(2), l2 = (yc - sq) / C256(2);
      C256 lam = l1.norm_sq() >= Real256(1) ? l1 : l2;
      if (lam.im < 0) lam = lam.conj();
      q.lambda_approx = lam;
      rep.quadruples.push_back(std::move(q));
    }
  }
}

}  // namespace detail

inline int nu(const SymplecticMatrix& m, const Rat& re, const Rat& im) {
  if (im == 0) {
    RatMat a = m.mat();
    for (int i = 0; i < a.rows(); ++i) a(i, i) -= re;
    return a.rows() - a.rank();
  }
  using L = QuadExt<Rat>;
  L lambda(re, im, Rat(-1));
  return detail::kernel_dim_power(m.mat(), lambda, 1);
}

inline SpectrumReport spectrum(const SymplecticMatrix& m) {
  using namespace detail;
  SpectrumReport rep;
  rep.dim = m.dim();
  const RatMat& mm = m.mat();

  Poly<Rat> p = char_poly(mm);
  if (!(p == p.reversed()))
    throw structure_error("characteristic polynomial of symplectic matrix not palindromic");

  auto [p1, mult_plus] = strip_root(p, Rat(1));
  auto [p2, mult_minus] = strip_root(p1, Rat(-1));
  if (mult_plus % 2 != 0 || mult_minus % 2 != 0)
    throw structure_error("odd multiplicity at an eigenvalue +-1");
  if (mult_plus > 0) {
    rep.plus_one.alg = mult_plus;
    rep.plus_one.geom = nu(m, Rat(1));
  }
  if (mult_minus > 0) {
    rep.minus_one.alg = mult_minus;
    rep.minus_one.geom = nu(m, Rat(-1));
  }

  if (p2.degree() > 0) {
    Poly<Rat> w = palindromic_reduce(p2);
    auto parts = squarefree_parts(w);
    for (int idx = 0; idx < int(parts.size()); ++idx) {
      int mult = idx + 1;
      Poly<Rat> part = parts[idx].monic();
      if (part.degree() < 1) continue;

      Poly<Rat> remaining = part;
      // exact rational roots: numeric probe, reconstruct, verify exactly
      {
        auto probe = solve_squarefree_numeric(part);
        Real256 tol = pow(Real256(2), -150);
        Int max_den = Int(1) << 80;
        std::vector<Rat> found;
        for (const auto& z : probe) {
          if (abs(z.im) > pow(Real256(2), -40)) continue;
          auto cand = rational_reconstruct(z.re, max_den, tol);
          if (!cand) continue;
          if (!(part.eval(*cand) == Rat(0))) continue;
          if (std::find(found.begin(), found.end(), *cand) == found.end())
            found.push_back(*cand);
        }
        for (const Rat& y : found) {
          auto [rest, k] = strip_root(remaining, y);
          if (k != 1) throw structure_error("repeated root inside a squarefree part");
          remaining = rest;
          classify_rational_y(rep, m, y, mult);
        }
      }

      if (remaining.degree() == 1) {
        classify_rational_y(rep, m, -remaining.coeff(0) / remaining.coeff(1), mult);
      } else if (remaining.degree() == 2) {
        Rat c1 = remaining.coeff(1) / remaining.coeff(2);
        Rat c0 = remaining.coeff(0) / remaining.coeff(2);
        auto roots = solve_monic_quadratic(c1, c0);
        if (roots.rational) {
          classify_rational_y(rep, m, roots.r1, mult);
          classify_rational_y(rep, m, roots.r2, mult);
        } else if (roots.complex_pair) {
          classify_quad_complex_y(rep, m, roots.a, roots.b, roots.d, mult);
        } else {
          classify_quad_real_y(rep, m, roots.a, roots.b, roots.d, +1, mult);
          classify_quad_real_y(rep, m, roots.a, roots.b, roots.d, -1, mult);
        }
      } else if (remaining.degree() >= 3) {
        classify_numeric_leftover(rep, m, remaining, mult);
      }
    }
  }

  if (rep.total_algebraic() != rep.dim)
    throw structure_error("eigenvalue multiplicities fail to fill the dimension");

  std::sort(rep.unit_pairs.begin(), rep.unit_pairs.end(),
            [](const UnitPair& a, const UnitPair& b) { return a.cos_approx > b.cos_approx; });
  std::sort(rep.real_pairs.begin(), rep.real_pairs.end(), [](const RealPair& a, const RealPair& b) {
    return a.lambda_approx > b.lambda_approx;
  });
  std::sort(rep.quadruples.begin(), rep.quadruples.end(),
            [](const Quadruple& a, const Quadruple& b) {
              return a.lambda_approx.re > b.lambda_approx.re;
            });
  return rep;
}

inline int elliptic_height(const SymplecticMatrix& m) {
  return spectrum(m).elliptic_height();
}

}  // namespace cziter

#endif
