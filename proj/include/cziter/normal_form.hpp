#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rho.hpp"
#include "spectrum.hpp"

namespace cziter {

// canonical basic blocks

// R(theta) for a rational point (c, s) on the unit circle
inline SymplecticMatrix block_R(const Rat& c, const Rat& s) {
  if (c * c + s * s != 1)
    throw input_error("rotation block needs cos^2 + sin^2 = 1");
  RatMat m(2, 2);
  m(0, 0) = c;
  m(0, 1) = s;
  m(1, 0) = -s;
  m(1, 1) = c;
  return SymplecticMatrix(m);
}

// D(lambda) = diag(lambda, 1/lambda), |lambda| != 0, 1
inline SymplecticMatrix block_D(const Rat& lambda) {
  if (lambda == 0) throw input_error("hyperbolic block needs lambda != 0");
  RatMat m(2, 2);
  m(0, 0) = lambda;
  m(1, 1) = Rat(1) / lambda;
  return SymplecticMatrix(m);
}

// N1(lambda, b) = [[lambda, b], [0, lambda]] with lambda = +-1, b in {-1,0,1}
inline SymplecticMatrix block_N1(int lambda, int b) {
  if (lambda != 1 && lambda != -1)
    throw input_error("N1 block needs lambda = +-1");
  if (b < -1 || b > 1) throw input_error("N1 block needs b in {-1, 0, 1}");
  RatMat m(2, 2);
  m(0, 0) = m(1, 1) = lambda;
  m(0, 1) = b;
  return SymplecticMatrix(m);
}

// N2(theta, B) with the canonical choice B = R(theta): [[R, R], [0, R]]
inline SymplecticMatrix block_N2(const Rat& c, const Rat& s) {
  SymplecticMatrix r = block_R(c, s);
  RatMat m(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      m(i, j) = r(i, j);
      m(i, j + 2) = r(i, j);
      m(i + 2, j + 2) = r(i, j);
    }
  return SymplecticMatrix(m);
}

struct RotationBlock {
  Real256 theta;  // in (0,pi) u (pi,2pi), Krein-consistent orientation
  std::optional<std::pair<SurdSum, SurdSum>> cs;  // exact (cos, sin) when known
};

struct N2Block {
  Real256 theta0;  // in (0,pi); the B-part is not recovered
  std::optional<SurdSum> cos_exact;
};

struct NormalFormDecomposition {
  int source_dim = 0;
  std::vector<RotationBlock> rotations;
  std::vector<N2Block> n2_blocks;
  int hyperbolic_tail = 0;  // number of 2x2 hyperbolic blocks
  bool has_d_minus2 = false;
};

// exact check of det(M^k - I) != 0 for k = 1..k_check
inline bool totally_nondegenerate(const SymplecticMatrix& m, int k_check = 64) {
  RatMat id = RatMat::identity(m.dim());
  RatMat p = id;
  for (int k = 1; k <= k_check; ++k) {
    p = p * m.mat();
    if ((p - id).det() == 0) return false;
  }
  return true;
}

inline NormalFormDecomposition normal_form_decomposition(
    const SymplecticMatrix& m, int k_check = 64) {
  if (!totally_nondegenerate(m, k_check))
    throw degeneracy_error(
        "normal form requires det(M^k - I) != 0 for all k <= k_check");

  SpectrumReport rep = spectrum(m);
  NormalFormDecomposition out;
  out.source_dim = rep.dim;
  const Real256 two_pi = pi_real256() * 2;

  for (const auto& up : rep.unit_pairs) {
    if (!up.krein_known)
      throw precision_error(
          "normal form needs Krein signatures on all elliptic pairs");
    const int n2_count = up.alg - up.geom;
    if (2 * up.geom < up.alg)
      throw structure_error(
          "unit eigenvalue carries a Jordan block of size > 2; "
          "outside the basic normal form family");
    if (up.krein_plus < n2_count || up.krein_minus < n2_count)
      throw structure_error("Krein signature inconsistent with Jordan type");

    Real256 c = up.cos_approx;
    if (c > 1) c = 1;
    if (c < -1) c = -1;
    const Real256 theta0 = acos(c);

    for (int i = 0; i < n2_count; ++i)
      out.n2_blocks.push_back({theta0, up.cos_exact});

    const bool cs_known = up.cos_exact && up.cos_exact->is_rational() &&
                          up.sin_exact;
    for (int i = 0; i < up.krein_plus - n2_count; ++i) {
      RotationBlock r{theta0, std::nullopt};
      if (cs_known) r.cs = std::make_pair(*up.cos_exact, *up.sin_exact);
      out.rotations.push_back(r);
    }
    for (int i = 0; i < up.krein_minus - n2_count; ++i) {
      RotationBlock r{two_pi - theta0, std::nullopt};
      if (cs_known)
        r.cs = std::make_pair(*up.cos_exact,
                              SurdSum(Rat(0)) - *up.sin_exact);
      out.rotations.push_back(r);
    }
  }

  int negative_pairs = 0, positive_pairs = 0;
  for (const auto& rp : rep.real_pairs) {
    out.hyperbolic_tail += rp.alg;
    (rp.positive ? positive_pairs : negative_pairs) += rp.alg;
  }
  for (const auto& q : rep.quadruples) out.hyperbolic_tail += 2 * q.alg;
  out.has_d_minus2 = negative_pairs % 2 == 1;

  // two independent reads of the sign of det(M - I) must agree
  NondegeneracyClass cls = nondegeneracy_class(m);
  NondegeneracyClass expect = positive_pairs % 2 == 0
                                  ? NondegeneracyClass::Plus
                                  : NondegeneracyClass::Minus;
  if (cls != expect)
    throw structure_error(
        "spectral classification disagrees with the exact sign of det(M - I)");

  if (2 * static_cast<int>(out.rotations.size()) +
          4 * static_cast<int>(out.n2_blocks.size()) +
          2 * out.hyperbolic_tail !=
      out.source_dim)
    throw structure_error("normal form blocks do not fill the dimension");
  return out;
}

namespace detail {

// rational square root of a rational, if one exists
inline std::optional<Rat> rat_sqrt(const Rat& r) {
  if (r < 0) return std::nullopt;
  Int rn, rd;
  if (!is_square(num(r), &rn) || !is_square(den(r), &rd)) return std::nullopt;
  return Rat(rn, rd);
}

}  // namespace detail

// rebuild a matrix with the same unit-circle spectral data via the
// diamond product; needs every block to have rational (cos, sin)
inline std::optional<SymplecticMatrix> reassemble(
    const NormalFormDecomposition& d) {
  std::vector<SymplecticMatrix> blocks;
  for (const auto& r : d.rotations) {
    if (!r.cs || !r.cs->first.is_rational() || !r.cs->second.is_rational())
      return std::nullopt;
    blocks.push_back(
        block_R(r.cs->first.rational_part(), r.cs->second.rational_part()));
  }
  for (const auto& b : d.n2_blocks) {
    if (!b.cos_exact || !b.cos_exact->is_rational()) return std::nullopt;
    Rat c = b.cos_exact->rational_part();
    auto s = detail::rat_sqrt(Rat(1) - c * c);
    if (!s) return std::nullopt;
    blocks.push_back(block_N2(c, *s));
  }
  for (int i = 0; i < d.hyperbolic_tail; ++i)
    blocks.push_back(block_D(d.has_d_minus2 && i == 0 ? Rat(-2) : Rat(2)));
  if (blocks.empty()) return std::nullopt;
  SymplecticMatrix acc = blocks[0];
  for (size_t i = 1; i < blocks.size(); ++i) acc = diamond(acc, blocks[i]);
  return acc;
}

}  // namespace cziter
