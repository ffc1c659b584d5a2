#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "normal_form.hpp"
#include "rho.hpp"
#include "spectrum.hpp"

namespace cziter {

// maximum distance from an exact integer accepted by cz_index before
// rounding; anything larger signals a sampling or extension failure
inline constexpr double kIndexIntegralityTol = 1e-6;

struct PathSample {
  double t = 0;
  SymplecticMatrix m;
};

// sampled path in Sp(2n) starting at the identity
class SymplecticPath {
 public:
  SymplecticPath(std::vector<PathSample> samples, double tau)
      : samples_(std::move(samples)), tau_(tau) {
    if (!(tau_ > 0)) throw input_error("path needs tau > 0");
    if (samples_.size() < 2)
      throw invariant_error("path needs samples at t = 0 and t = tau");
    if (samples_[0].t != 0 ||
        !(samples_[0].m ==
          SymplecticMatrix::identity(samples_[0].m.half_dim())))
      throw invariant_error("path must start at (0, identity)");
    for (size_t i = 1; i < samples_.size(); ++i) {
      if (!(samples_[i].t > samples_[i - 1].t))
        throw invariant_error("sample times must be strictly increasing");
      if (samples_[i].m.dim() != samples_[0].m.dim())
        throw dimension_error("path samples must share one dimension");
    }
    if (samples_.back().t != tau_)
      throw invariant_error("last sample must sit at t = tau");
  }

  const std::vector<PathSample>& samples() const { return samples_; }
  double tau() const { return tau_; }
  int dim() const { return samples_[0].m.dim(); }
  const SymplecticMatrix& endpoint() const { return samples_.back().m; }

 private:
  std::vector<PathSample> samples_;
  double tau_;
};

namespace detail {

// lifted rho-angle change along the samples, in units of pi
inline Real256 rho_winding_real(const SymplecticPath& path) {
  const Real256 pi = pi_real256();
  Real256 acc = 0;
  Real256 prev = 0;  // rho(identity) sits at angle 0
  const auto& s = path.samples();
  for (size_t i = 1; i < s.size(); ++i) {
    Real256 cur = rho(s[i].m).angle;
    Real256 jump = normalize_angle(cur - prev);
    if (!(abs(jump) < pi / 2))
      throw invariant_error(
          "rho-angle jump >= pi/2 between t = " + std::to_string(s[i - 1].t) +
          " and t = " + std::to_string(s[i].t) + "; sample the path finer");
    acc += jump;
    prev = cur;
  }
  return acc / pi;
}

// winding of the canonical extension to the reference matrix, in closed
// form: each elliptic angle travels to pi on its Krein-positive side, and
// all off-circle spectrum collapses without leaving the hyperbolic region
inline Real256 extension_winding_real(const SpectrumReport& rep) {
  const Real256 pi = pi_real256();
  Real256 acc = 0;
  for (const auto& up : rep.unit_pairs) {
    if (!up.krein_known)
      throw precision_error("extension winding needs Krein signatures");
    const int k = up.krein_plus - up.krein_minus;
    if (k == 0) continue;
    Real256 c = up.cos_approx;
    if (c > 1) c = 1;
    if (c < -1) c = -1;
    acc += (pi - acos(c)) * k;
  }
  return acc / pi;
}

inline Int round_real_to_int(const Real256& x) {
  Real256 y = floor(x + Real256(1) / 2);
  return y.convert_to<Int>();
}

}  // namespace detail

inline double rho_winding(const SymplecticPath& path) {
  return static_cast<double>(detail::rho_winding_real(path));
}

inline double mean_index_of_path(const SymplecticPath& path) {
  return rho_winding(path);
}

inline long long cz_index(const SymplecticPath& path) {
  const SymplecticMatrix& end = path.endpoint();
  if (nondegeneracy_class(end) == NondegeneracyClass::Degenerate)
    throw degeneracy_error("index undefined: endpoint has eigenvalue 1");
  Real256 mu = detail::rho_winding_real(path) +
               detail::extension_winding_real(spectrum(end));
  double mu_d = static_cast<double>(mu);
  double rounded = std::round(mu_d);
  if (std::abs(mu_d - rounded) > kIndexIntegralityTol)
    throw computation_error(
        "index sum " + std::to_string(mu_d) +
        " is not integral; refine sampling or check the endpoint");
  return static_cast<long long>(rounded);
}

// follow a, then b translated by a's endpoint
inline SymplecticPath concatenate(const SymplecticPath& a,
                                  const SymplecticPath& b) {
  if (a.dim() != b.dim())
    throw dimension_error("concatenated paths must share one dimension");
  std::vector<PathSample> out = a.samples();
  const SymplecticMatrix& shift = a.endpoint();
  const auto& bs = b.samples();
  for (size_t i = 1; i < bs.size(); ++i)
    out.push_back({bs[i].t + a.tau(), bs[i].m * shift});
  return SymplecticPath(std::move(out), a.tau() + b.tau());
}

// k-fold iterate: t in [j tau, (j+1) tau] runs the path times endpoint^j
inline SymplecticPath path_power(const SymplecticPath& path, int k) {
  if (k < 1) throw input_error("path power needs k >= 1");
  SymplecticPath out = path;
  for (int j = 1; j < k; ++j) out = concatenate(out, path);
  return out;
}

// deterministic sampled generators; entries are exact rational circle
// points built from the tangent half-angle, so every sample is exactly
// symplectic and the only approximation is in the angle grid itself

inline SymplecticPath rotation_path(double a, int n_samples) {
  if (n_samples < 2) throw input_error("rotation path needs >= 2 samples");
  const Real256 pi = pi_real256();
  const Int scale("1000000000000");
  std::vector<PathSample> samples;
  samples.reserve(n_samples + 1);
  for (int i = 0; i <= n_samples; ++i) {
    Real256 phi = pi * 2 * Real256(a) * i / n_samples;
    Real256 w = normalize_angle(phi);
    Rat c, s;
    Real256 t = tan(w / 2);
    if (abs(t) > 1e10) {
      c = -1;
      s = 0;
    } else {
      Rat u(detail::round_real_to_int(t * Real256(scale)), scale);
      Rat usq = u * u;
      c = (1 - usq) / (1 + usq);
      s = 2 * u / (1 + usq);
    }
    samples.push_back({double(i) / n_samples, block_R(c, s)});
  }
  return SymplecticPath(std::move(samples), 1.0);
}

inline SymplecticPath hyperbolic_path(const Rat& lambda_target,
                                      int n_samples) {
  if (lambda_target <= 0)
    throw input_error("hyperbolic path generator needs lambda > 0");
  if (n_samples < 2) throw input_error("hyperbolic path needs >= 2 samples");
  const Int scale("1000000000000");
  Real256 logl = log(to_real<Real256>(lambda_target));
  std::vector<PathSample> samples;
  samples.reserve(n_samples + 1);
  for (int i = 0; i <= n_samples; ++i) {
    Rat r;
    if (i == 0)
      r = 1;
    else if (i == n_samples)
      r = lambda_target;
    else {
      r = Rat(detail::round_real_to_int(exp(logl * i / n_samples) *
                                        Real256(scale)),
              scale);
      if (r <= 0) r = Rat(1, scale);
    }
    samples.push_back({double(i) / n_samples, block_D(r)});
  }
  return SymplecticPath(std::move(samples), 1.0);
}

// pointwise diamond of two paths on a common time grid
inline SymplecticPath path_diamond(const SymplecticPath& a,
                                   const SymplecticPath& b) {
  const auto& as = a.samples();
  const auto& bs = b.samples();
  if (as.size() != bs.size() || a.tau() != b.tau())
    throw input_error("path diamond needs matching sample grids");
  std::vector<PathSample> out;
  out.reserve(as.size());
  for (size_t i = 0; i < as.size(); ++i) {
    if (as[i].t != bs[i].t)
      throw input_error("path diamond needs matching sample grids");
    out.push_back({as[i].t, diamond(as[i].m, bs[i].m)});
  }
  return SymplecticPath(std::move(out), a.tau());
}

}  // namespace cziter
