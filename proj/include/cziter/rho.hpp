#pragma once

#include <optional>
#include <utility>

#include "spectrum.hpp"

namespace cziter {

// Value of the rotation number rho on Sp(2n): a point on the unit circle.
// The numeric angle is always available; the exact point (cos, sin) is
// filled in when the spectrum is exact and every elliptic cosine is
// rational, so all sines live in a common square-root tower.
struct RhoValue {
  Real256 angle = 0;  // normalized to (-pi, pi]
  std::optional<std::pair<SurdSum, SurdSum>> point;

  double angle_double() const { return static_cast<double>(angle); }
};

inline Real256 pi_real256() {
  static const Real256 p = atan(Real256(1)) * 4;
  return p;
}

// reduce to (-pi, pi]; inputs stay O(n * pi) so a loop is fine
inline Real256 normalize_angle(Real256 a) {
  const Real256 pi = pi_real256();
  const Real256 two_pi = pi * 2;
  while (a > pi) a -= two_pi;
  while (a <= -pi) a += two_pi;
  return a;
}

inline RhoValue rho_of(const SpectrumReport& rep) {
  for (const auto& up : rep.unit_pairs)
    if (!up.krein_known)
      throw precision_error(
          "rotation number undefined without Krein signatures; "
          "numeric eigenspace classification did not converge");

  const int mminus = rep.negative_real_multiplicity();
  if (mminus % 2 != 0)
    throw structure_error("negative real spectrum has odd total multiplicity");
  const bool flip = (mminus / 2) % 2 == 1;

  RhoValue out;
  Real256 angle = flip ? pi_real256() : Real256(0);
  for (const auto& up : rep.unit_pairs) {
    const int k = up.krein_plus - up.krein_minus;
    if (k == 0) continue;
    Real256 c = up.cos_approx;
    if (c > 1) c = 1;
    if (c < -1) c = -1;
    angle += acos(c) * k;
  }
  out.angle = normalize_angle(angle);

  bool exact_ok = rep.exact;
  for (const auto& up : rep.unit_pairs) {
    if (up.krein_plus == up.krein_minus) continue;  // factor is 1, exact anyway
    if (!up.cos_exact || !up.cos_exact->is_rational() || !up.sin_exact)
      exact_ok = false;
  }
  if (exact_ok) {
    SurdSum re{Rat(flip ? -1 : 1)};
    SurdSum im{Rat(0)};
    for (const auto& up : rep.unit_pairs) {
      int k = up.krein_plus - up.krein_minus;
      if (k == 0) continue;
      SurdSum c{up.cos_exact->rational_part()};
      SurdSum s = *up.sin_exact;
      if (k < 0) {
        s = SurdSum(Rat(0)) - s;  // conjugate: e^{-i theta0}
        k = -k;
      }
      for (int j = 0; j < k; ++j) {
        SurdSum nre = re * c - im * s;
        SurdSum nim = re * s + im * c;
        re = nre;
        im = nim;
      }
    }
    out.point = std::make_pair(re, im);
  }
  return out;
}

inline RhoValue rho(const SymplecticMatrix& m) { return rho_of(spectrum(m)); }

}  // namespace cziter
