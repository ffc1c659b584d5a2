#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "quadext.hpp"
#include "rational.hpp"

namespace cziter {

// exact sign of p + q*sqrt(d), d > 0 not a perfect square
inline int sign_p_plus_q_sqrt_d(const Int& p, const Int& q, const Int& d) {
  if (q == 0) return sign_of(p);
  if (p == 0) return sign_of(q);
  if (sign_of(p) == sign_of(q)) return sign_of(p);
  // opposite signs: the larger of p^2 and q^2 d wins (ties impossible,
  // d is not a square)
  return q * q * d > p * p ? sign_of(q) : sign_of(p);
}

// (p + q sqrt(d)) / s, exactly irrational, constrained to (0, 1)
struct QuadIrrational {
  Int p, q, d, s;

  QuadIrrational(Int p_, Int q_, Int d_, Int s_)
      : p(std::move(p_)), q(std::move(q_)), d(std::move(d_)), s(std::move(s_)) {
    if (q == 0) throw invariant_error("quad-irrational angle needs q != 0");
    if (s <= 0) throw invariant_error("quad-irrational angle needs s > 0");
    Int root;
    if (d <= 0 || is_square(d, &root))
      throw invariant_error("quad-irrational angle needs d > 0 nonsquare");
    if (sign_p_plus_q_sqrt_d(p, q, d) <= 0 ||
        sign_p_plus_q_sqrt_d(p - s, q, d) >= 0)
      throw invariant_error("angle must lie in (0, 1)");
  }

  Int floor_times(const Int& k) const {
    // floor(x/s) = floor(floor(x)/s) for integer s > 0
    Int c = k * p + floor_times_sqrt(k * q, d);
    return floor_div(c, s);
  }
  SurdSum exact() const {
    return SurdSum(Rat(p, s)) + SurdSum::sqrt_term(Rat(q, s), d);
  }
};

// rational angle with an explicit validity bound: den > guard keeps k*theta
// off the integers for every k <= guard
struct GuardedRational {
  Rat value;
  Int guard;

  GuardedRational(Rat v, Int g) : value(std::move(v)), guard(std::move(g)) {
    if (guard <= 0) throw invariant_error("guard must be positive");
    if (value <= 0 || value >= 1)
      throw invariant_error("angle must lie in (0, 1)");
    if (den(value) <= guard)
      throw invariant_error("guarded rational needs denominator > guard");
  }

  Int floor_times(const Int& k) const {
    if (k > guard)
      throw guard_error("iterate count exceeds the angle's guard bound");
    return floor_div(k * num(value), den(value));
  }
  SurdSum exact() const { return SurdSum(value); }
};

using Angle = std::variant<QuadIrrational, GuardedRational>;

inline Int floor_multiple(const Angle& theta, const Int& k) {
  if (k <= 0) throw input_error("floor_multiple needs k >= 1");
  return std::visit([&](const auto& a) { return a.floor_times(k); }, theta);
}

inline SurdSum angle_exact(const Angle& theta) {
  return std::visit([](const auto& a) { return a.exact(); }, theta);
}

inline double angle_double(const Angle& theta) {
  return static_cast<double>(angle_exact(theta).to_real<Real256>());
}

// raw index data in the shape of the full iteration formula
struct LongFormData {
  std::vector<Int> P;  // odd integers, one per elliptic block
  std::vector<Int> W;
  std::vector<Int> Q;
  std::vector<Angle> theta_raw;  // one angle per P entry
};

class IterationProfile {
 public:
  IterationProfile(Int r, std::vector<Angle> thetas, int ambient_n,
                   std::optional<LongFormData> long_data = std::nullopt)
      : r_(std::move(r)),
        thetas_(std::move(thetas)),
        ambient_n_(ambient_n),
        long_(std::move(long_data)) {
    if (ambient_n_ < 2) throw invariant_error("profile needs n >= 2");
    if (static_cast<int>(thetas_.size()) > ambient_n_ - 1)
      throw invariant_error("profile allows at most n - 1 angles");
    if (long_) {
      if (long_->P.size() != long_->theta_raw.size())
        throw invariant_error("long form needs one angle per P entry");
      Int sum = 0;
      for (const Int& p : long_->P) {
        if (p % 2 == 0)
          throw invariant_error("long-form P entries must be odd");
        sum += p;
      }
      for (const Int& w : long_->W) sum += w;
      for (const Int& q : long_->Q) sum += q;
      if (sum != base_index())
        throw invariant_error(
            "long form must satisfy sum(P) + sum(W) + sum(Q) = r + j");
    }
  }

  const Int& r() const { return r_; }
  const std::vector<Angle>& thetas() const { return thetas_; }
  int j() const { return static_cast<int>(thetas_.size()); }
  int ambient_n() const { return ambient_n_; }
  const std::optional<LongFormData>& long_data() const { return long_; }
  Int base_index() const { return r_ + j(); }

 private:
  Int r_;
  std::vector<Angle> thetas_;
  int ambient_n_;
  std::optional<LongFormData> long_;
};

inline Int iterated_index(const IterationProfile& profile, const Int& k) {
  if (k <= 0) throw input_error("iterated_index needs k >= 1");
  Int mu = k * profile.r() + profile.j();
  for (const Angle& th : profile.thetas()) mu += 2 * floor_multiple(th, k);

  if (profile.long_data()) {
    const LongFormData& ld = *profile.long_data();
    Int alt = 0;
    for (size_t i = 0; i < ld.P.size(); ++i)
      alt += k * (ld.P[i] - 1) + 2 * floor_multiple(ld.theta_raw[i], k) + 1;
    for (const Int& w : ld.W) alt += k * w;
    for (const Int& q : ld.Q) alt += k * q;
    if (alt != mu)
      throw invariant_error(
          "canonical and long-form index values disagree at k = " +
          k.str());
  }
  return mu;
}

// Delta = r + 2 sum(theta), exact
inline SurdSum mean_index_exact(const IterationProfile& profile) {
  SurdSum d{Rat(profile.r())};
  for (const Angle& th : profile.thetas())
    d = d + SurdSum(Rat(2)) * angle_exact(th);
  return d;
}

inline double mean_index(const IterationProfile& profile) {
  return static_cast<double>(mean_index_exact(profile).to_real<Real256>());
}

inline bool is_good(const IterationProfile& profile, const Int& k) {
  if (k <= 0) throw input_error("is_good needs k >= 1");
  return ((k - 1) * profile.r()) % 2 == 0;
}

struct IndexSequence {
  std::vector<Int> values;      // mu(gamma^k), k = 1..K
  std::vector<bool> good_flags;
};

inline IndexSequence index_sequence(const IterationProfile& profile, int K) {
  if (K < 1) throw input_error("index_sequence needs K >= 1");
  IndexSequence out;
  out.values.reserve(K);
  out.good_flags.reserve(K);
  for (int k = 1; k <= K; ++k) {
    out.values.push_back(iterated_index(profile, k));
    out.good_flags.push_back(is_good(profile, k));
  }
  return out;
}

struct SzBoundReport {
  bool ok = true;
  double max_deviation = 0;  // max |mu(k) - k Delta| over the window
};

// |mu(gamma^k) - k Delta| = |sum(1 - 2 frac(k theta_i))| < n - 1, checked
// exactly as a surd-sum sign test
inline SzBoundReport verify_sz_bound(const IterationProfile& profile, int K) {
  SzBoundReport rep;
  const SurdSum bound{Rat(profile.ambient_n() - 1)};
  Real256 max_dev = 0;
  for (int k = 1; k <= K; ++k) {
    SurdSum dev{Rat(0)};
    for (const Angle& th : profile.thetas()) {
      SurdSum frac = SurdSum(Rat(k)) * angle_exact(th) -
                     SurdSum(Rat(floor_multiple(th, k)));
      dev = dev + SurdSum(Rat(1)) - SurdSum(Rat(2)) * frac;
    }
    SurdSum abs_dev = dev.sign() >= 0 ? dev : SurdSum(Rat(0)) - dev;
    if ((abs_dev - bound).sign() >= 0) rep.ok = false;
    Real256 d = abs_dev.to_real<Real256>();
    if (d > max_dev) max_dev = d;
  }
  rep.max_deviation = static_cast<double>(max_dev);
  return rep;
}

struct MonotonicityReport {
  bool nondecreasing = true;
  bool gap2 = true;                      // mu(k+1) >= mu(k) + 2 throughout
  std::optional<Int> strict_gap_found_at;  // first k with gap > 2
  bool decreasing = true;
};

inline MonotonicityReport monotonicity_report(const IterationProfile& profile,
                                              int K) {
  if (K < 2) throw input_error("monotonicity_report needs K >= 2");
  MonotonicityReport rep;
  Int prev = iterated_index(profile, 1);
  for (int k = 2; k <= K; ++k) {
    Int cur = iterated_index(profile, k);
    Int diff = cur - prev;
    if (diff < 0) rep.nondecreasing = false;
    if (diff < 2) rep.gap2 = false;
    if (diff > 2 && !rep.strict_gap_found_at) rep.strict_gap_found_at = k - 1;
    if (diff >= 0) rep.decreasing = false;
    prev = cur;
  }
  return rep;
}

}  // namespace cziter
