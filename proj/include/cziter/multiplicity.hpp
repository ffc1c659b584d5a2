#pragma once

// Bounded feasibility search: can a single orbit profile reproduce a periodic
// rank target? Each candidate class goes through the certificate pipeline
// first: parity and support tests, gap and locked-sequence checks, then the
// closed-form density arguments (a pinned rational angle sum whose wrap or
// block pattern cannot hold). The witness scan only visits classes that no
// certificate settles, so enlarging the bounds never flips an infeasible
// verdict built from horizon-free certificates.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "homology.hpp"
#include "iteration.hpp"
#include "quadext.hpp"
#include "rational.hpp"

namespace cziter {

enum class Provenance { displaceable, prequantization, brieskorn, custom };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::displaceable: return "displaceable";
    case Provenance::prequantization: return "prequantization";
    case Provenance::brieskorn: return "brieskorn";
    default: return "custom";
  }
}

struct TargetPattern {
  RankFunction ranks;
  int ambient_n = 2;
  Provenance provenance = Provenance::custom;
  std::optional<Int> a0;  // brieskorn only
  std::optional<int> c;   // prequantization only
};

inline TargetPattern target_displaceable(const BettiTable& betti, int n) {
  return {sh_ranks_displaceable(betti, n), n, Provenance::displaceable, {}, {}};
}

inline TargetPattern target_prequantization(const std::map<int, Int>& betti_q,
                                            int c, int n) {
  return {sh_ranks_prequantization(betti_q, c, n), n,
          Provenance::prequantization, {}, c};
}

inline TargetPattern target_brieskorn(const Int& a0, int n,
                                      bool override_checks = false) {
  return {sh_ranks_brieskorn(a0, n, override_checks), n, Provenance::brieskorn,
          a0, {}};
}

inline TargetPattern target_custom(RankFunction ranks, int n) {
  if (n < 2) throw input_error("targets need ambient n >= 2");
  return {std::move(ranks), n, Provenance::custom, {}, {}};
}

struct CandidateClass {
  Int r;
  int j = 0;
  bool operator==(const CandidateClass& o) const {
    return r == o.r && j == o.j;
  }
};

enum class CertificateKind { parity, gap, mean_index, support, grid_exhausted };

inline const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::parity: return "parity";
    case CertificateKind::gap: return "gap";
    case CertificateKind::mean_index: return "mean-index";
    case CertificateKind::support: return "support";
    default: return "grid-exhausted";
  }
}

struct Certificate {
  CandidateClass cls;
  CertificateKind kind = CertificateKind::support;
  std::string detail;
  std::optional<Rat> alpha;  // required angle sum, when the class defines one
  std::optional<Int> cover;  // first cover where the obstruction bites
};

struct WitnessProfile {
  IterationProfile profile;
  Int matched_horizon;  // degrees between d_min and here matched exactly
};

enum class VerdictKind { feasible_at_bound, infeasible_at_bound, unknown };

inline const char* to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::feasible_at_bound: return "feasible-at-bound";
    case VerdictKind::infeasible_at_bound: return "infeasible-at-bound";
    default: return "unknown";
  }
}

struct BoundsEcho {
  int K = 0;
  int r_lo = 0;
  int r_hi = 0;
  std::size_t grid_size = 0;
  int depth = 0;
};

struct FeasibilityVerdict {
  VerdictKind kind = VerdictKind::unknown;
  std::optional<WitnessProfile> witness;
  std::vector<Certificate> certificates;  // one per obstructed class
  std::vector<CandidateClass> unresolved;
  BoundsEcho bounds;
  std::string note;
};

struct SearchBounds {
  int K = 200;
  std::optional<std::pair<int, int>> r_range;  // default [-3n, 3n]
  std::vector<Angle> theta_grid;               // empty selects the default grid
  int depth = 8;                               // cell subdivision budget
  // Density certificates (mean-index range, wrap and block patterns) are on
  // by default; switching them off forces the interval grid to do the work.
  bool use_asymptotic_certificates = true;
};

// Quadratic irrationals (p + sqrt(d))/64 for d in {2, 3, 5, 7}; together the
// four families cover (0, 1) with mesh 1/64 and are pairwise distinct.
inline std::vector<Angle> default_theta_grid(int mesh = 64) {
  if (mesh < 4) throw input_error("theta grid mesh must be at least 4");
  std::vector<Angle> grid;
  const Int s(mesh);
  for (int di : {2, 3, 5, 7}) {
    const Int d(di);
    for (Int p = -3; p <= s; ++p) {
      if (sign_p_plus_q_sqrt_d(p, 1, d) <= 0) continue;       // value > 0
      if (sign_p_plus_q_sqrt_d(p - s, 1, d) >= 0) continue;   // value < 1
      grid.emplace_back(QuadIrrational(p, 1, d, s));
    }
  }
  std::sort(grid.begin(), grid.end(), [](const Angle& a, const Angle& b) {
    return angle_exact(a) < angle_exact(b);
  });
  return grid;
}

// Good covers only; guard violations propagate from the angle arithmetic.
inline std::map<Int, Int> orbit_degree_multiset(const IterationProfile& profile,
                                                int K) {
  if (K < 1) throw input_error("cover horizon must be positive");
  std::map<Int, Int> counts;
  for (Int k = 1; k <= K; ++k) {
    if (!is_good(profile, k)) continue;
    counts[iterated_index(profile, k)] += 1;
  }
  return counts;
}

namespace mdetail {

inline Int surd_floor(const SurdSum& x) {
  Real256 v = x.to_real<Real256>();
  Int m = Int(boost::multiprecision::floor(v).convert_to<long long>());
  while ((x - SurdSum(Rat(m))).sign() < 0) --m;
  while ((x - SurdSum(Rat(m + 1))).sign() >= 0) ++m;
  return m;
}

// Flattened view of a rank function with ascending degrees. Descending
// targets are mirrored (degree -> -degree) before the view is built.
struct TargetView {
  int p = 1;       // tail period
  Int tail_start;  // first tail degree
  Int per_period;  // ranks per period
  std::vector<int> pos;                  // tail offsets, one per rank slot
  std::vector<Int> prefix;               // prefix[i] = ranks in tail[0..i)
  std::vector<std::pair<Int, Int>> exc;  // sorted nonzero exceptional ranks
  Int exc_total;
  bool zero = true;
  Int d_min;                  // meaningful when !zero
  std::optional<int> parity;  // 0/1 when all ranked degrees agree, else empty
  bool doubled = false;       // some degree carries rank >= 2
  Int first_double;
  RankFunction rf;

  explicit TargetView(const RankFunction& in) : rf(in) {
    if (rf.direction() != 1)
      throw invariant_error("target view expects an ascending rank function");
    p = rf.period();
    tail_start = rf.tail_start();
    prefix.assign(static_cast<size_t>(p) + 1, Int(0));
    const auto& tail = rf.tail();
    for (int l = 0; l < p; ++l) {
      const Int& cnt = tail[static_cast<size_t>(l)];
      prefix[static_cast<size_t>(l) + 1] = prefix[static_cast<size_t>(l)] + cnt;
      for (Int c = 0; c < cnt; ++c) pos.push_back(l);
      if (cnt >= 2 && !doubled) {
        doubled = true;
        first_double = tail_start + l;
      }
    }
    per_period = prefix[static_cast<size_t>(p)];
    exc_total = 0;
    for (const auto& [deg, cnt] : rf.exceptional()) {
      if (cnt == 0) continue;
      exc.emplace_back(deg, cnt);
      exc_total += cnt;
      if (cnt >= 2 && (!doubled || deg < first_double)) {
        doubled = true;
        first_double = deg;
      }
    }
    zero = exc.empty() && per_period == 0;
    if (!zero) {
      d_min = exc.empty() ? tail_start + pos.front() : exc.front().first;
      bool mixed = false;
      std::optional<int> par;
      auto feed = [&](const Int& deg) {
        int q = deg % 2 == 0 ? 0 : 1;
        if (!par)
          par = q;
        else if (*par != q)
          mixed = true;
      };
      for (const auto& [deg, cnt] : exc) feed(deg);
      for (int l : pos) feed(tail_start + l);
      if (!mixed) parity = par;
    }
  }

  Int rank_at(const Int& d) const { return rf.rank(d); }

  // Ranks at degrees <= d.
  Int cumulative(const Int& d) const {
    Int total = 0;
    for (const auto& [deg, cnt] : exc)
      if (deg <= d) total += cnt;
    if (per_period > 0 && d >= tail_start) {
      Int span = d - tail_start + 1;
      Int q = span / p;
      Int rem = span % p;
      total +=
          q * per_period + prefix[static_cast<size_t>(rem.convert_to<long long>())];
    }
    return total;
  }

  // Degree of the t-th rank slot, counting from the bottom (t >= 1).
  Int degree_at(Int t) const {
    if (t < 1 || zero) throw invariant_error("rank slot index out of range");
    for (const auto& [deg, cnt] : exc) {
      if (t <= cnt) return deg;
      t -= cnt;
    }
    if (per_period == 0) throw invariant_error("rank slot beyond finite target");
    Int q = (t - 1) / per_period;
    Int rem = (t - 1) % per_period;
    return tail_start + q * p + pos[static_cast<size_t>(rem.convert_to<long long>())];
  }
};

inline RankFunction mirror_rank_function(const RankFunction& rf) {
  std::map<Int, Int> exc;
  for (const auto& [deg, cnt] : rf.exceptional()) exc[-deg] = cnt;
  return RankFunction(std::move(exc), -rf.tail_start(), rf.tail(), 1);
}

inline Angle reflect_angle(const Angle& a) {
  if (const auto* q = std::get_if<QuadIrrational>(&a))
    return QuadIrrational(q->s - q->p, -q->q, q->d, q->s);
  const auto& g = std::get<GuardedRational>(a);
  return GuardedRational(Rat(1) - g.value, g.guard);
}

// Index inversion: the profile with r' = -r - 2j and angles 1 - theta has
// iterated indices equal to the negated indices of (r, theta).
inline IterationProfile reflect_profile(const IterationProfile& pr) {
  std::vector<Angle> thetas;
  thetas.reserve(pr.thetas().size());
  for (const Angle& a : pr.thetas()) thetas.push_back(reflect_angle(a));
  return IterationProfile(-pr.r() - 2 * pr.j(), std::move(thetas),
                          pr.ambient_n());
}

inline int class_parity(const Int& r, int j) {
  int odd_r = r % 2 != 0 ? 1 : 0;
  return (odd_r + j) % 2;
}

inline Int good_cover(const Int& r, const Int& t) {
  return r % 2 != 0 ? 2 * t - 1 : t;
}

struct ClassCtx {
  CandidateClass reported;  // class in the caller's coordinates
  Int r;                    // engine (ascending-view) coordinates
  int j = 0;
};

struct Engine {
  const TargetView& view;
  int n;
  int K;
  int depth;
  bool asymptotic;

  // Mean index matching the tail density: per_period ranks per p degrees,
  // one good cover per step for even r, one per two steps for odd r.
  Rat delta_required(const Int& r) const {
    Rat d = Rat(Int(view.p)) / Rat(view.per_period);
    return r % 2 != 0 ? d / 2 : d;
  }

  std::optional<Rat> alpha_of(const ClassCtx& c) const {
    if (view.per_period == 0 || c.j == 0) return std::nullopt;
    return (delta_required(c.r) - Rat(c.r)) / 2;
  }

  std::optional<Certificate> parity_certificate(const ClassCtx& c) const {
    if (view.zero) return std::nullopt;
    int cp = class_parity(c.r, c.j);
    if (!view.parity) {
      return Certificate{c.reported, CertificateKind::parity,
                         "target ranks occupy both parities; good covers of a "
                         "single orbit share one parity",
                         std::nullopt, std::nullopt};
    }
    if (*view.parity != cp) {
      std::ostringstream os;
      os << "good covers produce degrees of parity " << cp
         << " but every target rank sits in parity " << *view.parity;
      return Certificate{c.reported, CertificateKind::parity, os.str(),
                         std::nullopt, std::nullopt};
    }
    return std::nullopt;
  }

  std::optional<Certificate> support_certificate(const ClassCtx& c) const {
    Int mu1 = c.r + c.j;
    if (view.zero) {
      return Certificate{c.reported, CertificateKind::support,
                         "target carries no ranks; the first good cover would "
                         "create one",
                         std::nullopt, Int(1)};
    }
    if (view.rank_at(mu1) == 0) {
      std::ostringstream os;
      os << "first good cover lands at degree " << mu1
         << " where the target rank vanishes";
      return Certificate{c.reported, CertificateKind::support, os.str(),
                         std::nullopt, Int(1)};
    }
    if (c.r >= 0 && mu1 != view.d_min) {
      std::ostringstream os;
      os << "indices are nondecreasing, so the lowest produced degree is "
         << mu1 << "; the target support starts at " << view.d_min;
      return Certificate{c.reported, CertificateKind::support, os.str(),
                         std::nullopt, Int(1)};
    }
    return std::nullopt;
  }

  // Strictly increasing indices cannot revisit a degree the target repeats,
  // provided the repeat sits inside the horizon every class member reaches.
  std::optional<Certificate> plain_gap_certificate(const ClassCtx& c) const {
    if (c.r < 1 || !view.doubled) return std::nullopt;
    Int floor_horizon = Int(K + 1) * c.r - (n - 1);
    if (view.first_double > floor_horizon) return std::nullopt;
    std::ostringstream os;
    os << "target repeats degree " << view.first_double
       << " but consecutive good-cover indices of the class climb by at least "
       << (c.r % 2 != 0 ? 2 * c.r : c.r);
    return Certificate{c.reported, CertificateKind::gap, os.str(), std::nullopt,
                       std::nullopt};
  }

  // r = -2, j = 2 against a target starting 0, 2, 2, ...: covers 2 and 3 pin
  // both angles above 1/2 and one above 2/3 (half-angle bound), so the angle
  // sum exceeds 7/6 while the density equation asks for less.
  std::optional<Certificate> initial_run_certificate(const ClassCtx& c) const {
    if (c.r != -2 || c.j != 2 || view.zero || view.per_period == 0)
      return std::nullopt;
    if (view.d_min != 0 || view.rank_at(Int(0)) != 1) return std::nullopt;
    if (view.rank_at(Int(2)) < 2) return std::nullopt;
    Rat alpha = (delta_required(c.r) - Rat(c.r)) / 2;
    if (alpha > Rat(7, 6)) return std::nullopt;
    std::ostringstream os;
    os << "half-angle bound: covers 2 and 3 force both angles above 1/2 and "
          "one above 2/3, so the angle sum exceeds 7/6 while the density "
          "equation needs "
       << alpha;
    return Certificate{c.reported, CertificateKind::mean_index, os.str(), alpha,
                       Int(3)};
  }

  // j = 0 classes have fully determined indices mu(k) = k r; compare exactly.
  std::optional<Certificate> exact_sequence_certificate(const ClassCtx& c) const {
    if (c.j != 0 || view.zero) return std::nullopt;
    if (c.r == 0) {
      // every cover is good and lands at degree 0
      Int cap = view.rank_at(Int(0));
      if (Int(K) > cap) {
        std::ostringstream os;
        os << "all covers land at degree 0 but the target rank there is " << cap;
        return Certificate{c.reported, CertificateKind::support, os.str(),
                           std::nullopt, cap + 1};
      }
      return std::nullopt;
    }
    if (c.r < 0) {
      // degrees k r strictly decrease; each needs a rank of its own
      Int t = 1;
      for (Int k = good_cover(c.r, t); k <= K; k = good_cover(c.r, ++t)) {
        Int mu = c.r * k;
        if (view.rank_at(mu) == 0) {
          std::ostringstream os;
          os << "cover " << k << " lands at degree " << mu
             << " where the target rank vanishes";
          return Certificate{c.reported, CertificateKind::support, os.str(),
                             std::nullopt, k};
        }
      }
      return std::nullopt;
    }
    Int horizon = Int(K + 1) * c.r - (n - 1);
    Int filled = view.cumulative(horizon);
    Int t = 0;
    Int next = 1;
    for (Int k = good_cover(c.r, next); k <= K; k = good_cover(c.r, ++next)) {
      Int mu = c.r * k;
      if (mu > horizon) break;
      ++t;
      std::optional<Int> want;
      if (t <= filled) want = view.degree_at(t);
      if (!want || *want != mu) {
        std::ostringstream os;
        os << "cover " << k << " yields degree " << mu << " but the target's "
           << "slot " << t << " sits at ";
        if (want)
          os << *want;
        else
          os << "nothing below the horizon";
        return Certificate{c.reported, CertificateKind::support, os.str(),
                           std::nullopt, k};
      }
    }
    if (t < filled) {
      std::ostringstream os;
      os << "target keeps " << (filled - t) << " ranks below the class horizon "
         << horizon << " that the locked sequence cannot reach";
      return Certificate{c.reported, CertificateKind::support, os.str(),
                         std::nullopt, std::nullopt};
    }
    return std::nullopt;
  }

  // Wrap analysis for nondecreasing classes with a rational forced angle sum
  // alpha = a/b: slot t must satisfy sum_i floor(k theta_i) = s_req(t), so
  // the wrap count w = floor(k alpha) - s_req is pinned for every cover. An
  // out-of-range w is an outright contradiction; otherwise w is eventually
  // periodic and equidistribution of irrational angles breaks any constant
  // subpattern.
  std::optional<Certificate> wrap_certificate(const ClassCtx& c) const {
    if (c.r < 0 || c.j < 1 || view.per_period == 0) return std::nullopt;
    Rat alpha = *alpha_of(c);
    Int a = num(alpha), b = den(alpha);
    long long period_t =
        view.per_period.convert_to<long long>() * b.convert_to<long long>();
    if (period_t <= 0 || period_t > 4000) period_t = 4000;
    long long span = 4 * period_t + 24;
    std::vector<int> w_seq;
    w_seq.reserve(static_cast<size_t>(span));
    for (long long t = 1; t <= span; ++t) {
      Int k = good_cover(c.r, Int(t));
      Int D = view.degree_at(Int(t));
      Int s_req = (D - c.r * k - c.j) / 2;
      Int ka_num = k * a;
      bool integral = ka_num % b == 0;
      Int w = floor_div(ka_num, b) - s_req;
      if (integral) {
        // fractional parts sum to an integer strictly between 0 and j
        if (w < 1 || w > c.j - 1) {
          std::ostringstream os;
          os << "with forced angle sum " << alpha << ", cover " << k
             << " needs floor sum " << s_req
             << " which no tuple of irrational angles attains";
          return Certificate{c.reported, CertificateKind::mean_index, os.str(),
                             alpha, k};
        }
      } else if (w < 0 || w > c.j - 1) {
        std::ostringstream os;
        os << "with forced angle sum " << alpha << ", cover " << k
           << " needs floor sum " << s_req << " outside the feasible wrap range";
        return Certificate{c.reported, CertificateKind::mean_index, os.str(),
                           alpha, k};
      }
      w_seq.push_back(w.convert_to<int>());
    }
    for (long long L : {period_t, 2 * period_t}) {
      if (L <= 0 || 2 * L >= span) break;
      bool ok = true;
      for (long long t = span / 2; t + L <= span; ++t)
        if (w_seq[static_cast<size_t>(t - 1)] !=
            w_seq[static_cast<size_t>(t + L - 1)]) {
          ok = false;
          break;
        }
      if (ok) {
        std::ostringstream os;
        os << "matching pins the wrap count of every cover to a periodic "
              "pattern (period "
           << L
           << " covers); irrational angles equidistribute and cannot hold a "
              "wrap count constant along a progression";
        return Certificate{c.reported, CertificateKind::gap, os.str(), alpha,
                           std::nullopt};
      }
    }
    return std::nullopt;
  }

  // Block version for classes that may decrease locally: sum the required
  // floor counts over whole periods. The per-block fractional mass is then
  // forced to an exact constant, which equidistribution refuses.
  std::optional<Certificate> block_certificate(const ClassCtx& c) const {
    if (c.r >= 0 || c.j < 1 || view.per_period == 0) return std::nullopt;
    Rat alpha = *alpha_of(c);
    long long L = view.per_period.convert_to<long long>() *
                  den(alpha).convert_to<long long>();
    if (L <= 0 || L > 4000) return std::nullopt;
    Int t0 = view.exc_total + view.per_period + 1;
    std::vector<Rat> F;
    for (int m = 0; m < 3; ++m) {
      Int mu_sum = 0, k_sum = 0;
      for (long long i = 0; i < L; ++i) {
        Int t = t0 + m * L + i;
        Int k = good_cover(c.r, t);
        mu_sum += view.degree_at(t);
        k_sum += k;
      }
      Rat s_sum = Rat(mu_sum - c.r * k_sum - Int(c.j) * L) / 2;
      F.push_back(alpha * Rat(k_sum) - s_sum);
    }
    if (F[0] != F[1] || F[1] != F[2]) return std::nullopt;
    if (F[0] <= 0 || F[0] >= Rat(Int(c.j) * L)) {
      std::ostringstream os;
      os << "forced per-block fractional mass " << F[0] << " falls outside (0, "
         << Int(c.j) * L << ")";
      return Certificate{c.reported, CertificateKind::mean_index, os.str(),
                         alpha, std::nullopt};
    }
    std::ostringstream os;
    os << "every block of " << L << " covers must carry fractional mass exactly "
       << F[0]
       << "; irrational angles equidistribute and cannot hold block sums "
          "constant";
    return Certificate{c.reported, CertificateKind::gap, os.str(), alpha,
                       std::nullopt};
  }
};

struct Box {
  std::vector<std::pair<Rat, Rat>> axes;  // open cells (lo, hi)
  int depth = 0;
};

// Interval evaluation of the good-cover degrees over a box of angle tuples.
// Excluded when the cumulative rank counts cannot agree anywhere inside.
inline bool box_excluded(const Engine& eng, const ClassCtx& c, const Box& box) {
  Rat lo_sum(0), hi_sum(0);
  for (const auto& [lo, hi] : box.axes) {
    lo_sum += lo;
    hi_sum += hi;
  }
  Rat delta_lo = Rat(c.r) + 2 * lo_sum;
  Rat delta_hi = Rat(c.r) + 2 * hi_sum;
  const TargetView& view = eng.view;
  if (delta_hi <= 0) {
    // indices never climb past n - 1: count the forced production there
    Int goods = c.r % 2 != 0 ? Int((eng.K + 1) / 2) : Int(eng.K);
    return goods > view.cumulative(Int(eng.n - 1));
  }
  // matched horizons must reach the support; if even the largest horizon in
  // the box falls short, no tuple inside can be a witness
  Int H_hi = floor_rat(Rat(Int(eng.K + 1)) * delta_hi - Rat(Int(eng.n - 1)));
  if (!view.zero && H_hi < view.d_min) return true;
  Int H = floor_rat(Rat(Int(eng.K + 1)) * delta_lo - Rat(Int(eng.n - 1)));
  std::vector<Int> lo_deg, hi_deg;
  Int t = 1;
  for (Int k = good_cover(c.r, t); k <= eng.K; k = good_cover(c.r, ++t)) {
    Int flo = 0, fhi = 0;
    for (const auto& [lo, hi] : box.axes) {
      flo += floor_rat(Rat(k) * lo);
      Rat kh = Rat(k) * hi;
      Int f = floor_rat(kh);
      fhi += Rat(f) == kh ? f - 1 : f;
    }
    lo_deg.push_back(c.r * k + 2 * flo + c.j);
    hi_deg.push_back(c.r * k + 2 * fhi + c.j);
  }
  std::sort(lo_deg.begin(), lo_deg.end());
  std::sort(hi_deg.begin(), hi_deg.end());
  // counts only change at interval endpoints, so sweep those
  std::vector<Int> crit;
  for (const Int& d : lo_deg)
    if (d <= H) crit.push_back(d);
  for (const Int& d : hi_deg)
    if (d <= H) crit.push_back(d);
  crit.push_back(H);
  std::sort(crit.begin(), crit.end());
  crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
  for (const Int& d : crit) {
    auto may = std::upper_bound(lo_deg.begin(), lo_deg.end(), d) -
               lo_deg.begin();  // covers that may land at or below d
    auto must = std::upper_bound(hi_deg.begin(), hi_deg.end(), d) -
                hi_deg.begin();  // covers that must land at or below d
    Int R = view.cumulative(d);
    if (R < Int(must) || R > Int(may)) return true;
  }
  return false;
}

inline std::optional<Certificate> grid_certificate(const Engine& eng,
                                                   const ClassCtx& c,
                                                   int cells_per_axis,
                                                   std::string* fail_note) {
  if (c.j < 1) return std::nullopt;
  const int M = cells_per_axis;
  std::vector<Box> work;
  std::vector<int> idx(static_cast<size_t>(c.j), 0);
  // nondecreasing cell indices cover every angle multiset
  while (true) {
    Box b;
    for (int ax = 0; ax < c.j; ++ax)
      b.axes.emplace_back(Rat(Int(idx[static_cast<size_t>(ax)]), Int(M)),
                          Rat(Int(idx[static_cast<size_t>(ax)] + 1), Int(M)));
    work.push_back(std::move(b));
    int ax = c.j - 1;
    while (ax >= 0 && idx[static_cast<size_t>(ax)] == M - 1) --ax;
    if (ax < 0) break;
    int v = ++idx[static_cast<size_t>(ax)];
    for (int q = ax + 1; q < c.j; ++q) idx[static_cast<size_t>(q)] = v;
  }
  long long examined = 0;
  long long inconclusive = 0;
  int max_depth = 0;
  while (!work.empty()) {
    Box box = std::move(work.back());
    work.pop_back();
    ++examined;
    max_depth = std::max(max_depth, box.depth);
    if (box_excluded(eng, c, box)) continue;
    if (box.depth >= eng.depth) {
      ++inconclusive;
      continue;
    }
    int widest = 0;
    Rat width = box.axes[0].second - box.axes[0].first;
    for (int ax = 1; ax < c.j; ++ax) {
      Rat w = box.axes[static_cast<size_t>(ax)].second -
              box.axes[static_cast<size_t>(ax)].first;
      if (w > width) {
        width = w;
        widest = ax;
      }
    }
    Rat mid = (box.axes[static_cast<size_t>(widest)].first +
               box.axes[static_cast<size_t>(widest)].second) /
              2;
    Box lo = box, hi = box;
    lo.axes[static_cast<size_t>(widest)].second = mid;
    hi.axes[static_cast<size_t>(widest)].first = mid;
    lo.depth = hi.depth = box.depth + 1;
    work.push_back(std::move(lo));
    work.push_back(std::move(hi));
  }
  if (inconclusive == 0) {
    std::ostringstream os;
    os << "interval floor bounds exclude every angle cell (" << examined
       << " boxes, max depth " << max_depth << ", " << eng.K << " covers)";
    return Certificate{c.reported, CertificateKind::grid_exhausted, os.str(),
                       std::nullopt, std::nullopt};
  }
  if (fail_note) {
    std::ostringstream os;
    os << inconclusive << " cells stayed inconclusive at depth " << eng.depth;
    *fail_note = os.str();
  }
  return std::nullopt;
}

// Exact bounded match of a concrete candidate against the target: every rank
// between the support start and the candidate's horizon must be reproduced.
inline std::optional<Int> candidate_matches(const Engine& eng,
                                            const IterationProfile& profile) {
  const TargetView& view = eng.view;
  if (view.zero) return std::nullopt;
  SurdSum delta = mean_index_exact(profile);
  if (delta.sign() <= 0) return std::nullopt;
  Int H = surd_floor(delta * SurdSum(Rat(Int(eng.K + 1))) -
                     SurdSum(Rat(Int(eng.n - 1))));
  if (H < view.d_min) return std::nullopt;
  Int RH = view.cumulative(H);
  if (profile.r() >= 0) {
    Int t = 0;
    for (Int k = 1; k <= eng.K; ++k) {
      if (!is_good(profile, k)) continue;
      Int mu = iterated_index(profile, k);
      if (mu > H) break;
      ++t;
      if (t > RH) return std::nullopt;
      if (view.degree_at(t) != mu) return std::nullopt;
    }
    return t == RH ? std::optional<Int>(H) : std::nullopt;
  }
  std::map<Int, Int> counts;
  Int total = 0;
  for (Int k = 1; k <= eng.K; ++k) {
    if (!is_good(profile, k)) continue;
    Int mu = iterated_index(profile, k);
    if (mu > H) continue;
    Int& c = counts[mu];
    c += 1;
    if (c > view.rank_at(mu)) return std::nullopt;  // counts only grow
    total += 1;
    if (total > RH) return std::nullopt;
  }
  if (total != RH) return std::nullopt;
  for (const auto& [deg, cnt] : counts)
    if (view.rank_at(deg) != cnt) return std::nullopt;
  return H;
}

}  // namespace mdetail

// One forced angle sum per class, when the density equation defines one.
inline std::optional<Rat> alpha_for_class(const TargetPattern& target,
                                          const CandidateClass& cls) {
  RankFunction rf = target.ranks.direction() == 1
                        ? target.ranks
                        : mdetail::mirror_rank_function(target.ranks);
  mdetail::TargetView view(rf);
  if (view.per_period == 0 || cls.j == 0) return std::nullopt;
  Int r_eng = target.ranks.direction() == 1 ? cls.r : -cls.r - 2 * cls.j;
  mdetail::Engine eng{view, target.ambient_n, 1, 0, true};
  return (eng.delta_required(r_eng) - Rat(r_eng)) / 2;
}

inline FeasibilityVerdict single_orbit_feasibility(const TargetPattern& target,
                                                   const SearchBounds& bounds) {
  using namespace mdetail;
  if (bounds.K < 1) throw input_error("cover bound must be positive");
  if (bounds.depth < 0) throw input_error("subdivision depth must be >= 0");
  const int n = target.ambient_n;
  const bool mirrored = target.ranks.direction() == -1;
  RankFunction rf = mirrored ? mirror_rank_function(target.ranks) : target.ranks;
  TargetView view(rf);

  std::vector<Angle> grid =
      bounds.theta_grid.empty() ? default_theta_grid() : bounds.theta_grid;
  for (const Angle& a : grid) {
    if (const auto* g = std::get_if<GuardedRational>(&a)) {
      if (g->guard < bounds.K)
        throw input_error("grid angle guard below the cover bound");
    }
  }
  {
    std::vector<SurdSum> vals;
    vals.reserve(grid.size());
    for (const Angle& a : grid) vals.push_back(angle_exact(a));
    std::sort(vals.begin(), vals.end());
    for (size_t i = 1; i < vals.size(); ++i)
      if (vals[i - 1] == vals[i])
        throw input_error("grid angles must be pairwise distinct");
    std::sort(grid.begin(), grid.end(), [](const Angle& a, const Angle& b) {
      return angle_exact(a) < angle_exact(b);
    });
  }

  auto [r_lo, r_hi] = bounds.r_range.value_or(std::make_pair(-3 * n, 3 * n));
  if (r_lo > r_hi) throw input_error("empty r range");

  Engine eng{view, n, bounds.K, bounds.depth,
             bounds.use_asymptotic_certificates};

  std::vector<ClassCtx> classes;
  for (int r = r_lo; r <= r_hi; ++r)
    for (int j = 0; j <= n - 1; ++j) {
      ClassCtx c;
      c.reported = CandidateClass{Int(r), j};
      c.r = mirrored ? Int(-r - 2 * j) : Int(r);
      c.j = j;
      classes.push_back(c);
    }

  FeasibilityVerdict verdict;
  verdict.bounds = BoundsEcho{bounds.K, r_lo, r_hi, grid.size(), bounds.depth};

  // Certificates first, one per class, first obstruction wins.
  std::vector<std::optional<Certificate>> per_class(classes.size());
  for (size_t i = 0; i < classes.size(); ++i) {
    const ClassCtx& c = classes[i];
    std::optional<Certificate> cert = eng.parity_certificate(c);
    if (!cert) cert = eng.support_certificate(c);
    if (!cert) cert = eng.plain_gap_certificate(c);
    if (!cert) cert = eng.exact_sequence_certificate(c);
    if (!cert && eng.asymptotic && c.j >= 1 && view.per_period > 0) {
      auto alpha = eng.alpha_of(c);
      if (alpha && *alpha > 0 && *alpha < Rat(Int(c.j))) {
        cert = eng.initial_run_certificate(c);
        if (!cert) cert = eng.wrap_certificate(c);
        if (!cert) cert = eng.block_certificate(c);
      }
    }
    per_class[i] = std::move(cert);
  }

  // Witness scan over the classes no certificate settles.
  std::optional<WitnessProfile> witness;
  for (size_t i = 0; i < classes.size() && !witness; ++i) {
    if (per_class[i] || view.zero) continue;
    const ClassCtx& c = classes[i];
    Int mu1 = c.r + c.j;
    if (view.rank_at(mu1) == 0) continue;
    if (c.r >= 0 && mu1 != view.d_min) continue;
    if (c.j == 0) {
      IterationProfile cand(c.r, {}, n);
      if (auto H = candidate_matches(eng, cand)) {
        IterationProfile out = mirrored ? reflect_profile(cand) : cand;
        witness = WitnessProfile{out, mirrored ? -*H : *H};
      }
      continue;
    }
    if (grid.empty()) continue;
    std::vector<size_t> pick(static_cast<size_t>(c.j), 0);
    while (!witness) {
      std::vector<Angle> thetas;
      thetas.reserve(pick.size());
      for (size_t i2 : pick) thetas.push_back(grid[i2]);
      IterationProfile cand(c.r, std::move(thetas), n);
      if (auto H = candidate_matches(eng, cand)) {
        IterationProfile out = mirrored ? reflect_profile(cand) : cand;
        witness = WitnessProfile{out, mirrored ? -*H : *H};
        break;
      }
      int ax = c.j - 1;
      while (ax >= 0 && pick[static_cast<size_t>(ax)] == grid.size() - 1) --ax;
      if (ax < 0) break;
      size_t v = ++pick[static_cast<size_t>(ax)];
      for (int q = ax + 1; q < c.j; ++q) pick[static_cast<size_t>(q)] = v;
    }
  }

  // Interval grid pass over whatever is still open; pointless once a witness
  // exists, since the verdict is already settled.
  if (!witness) {
    std::string fail_note;
    for (size_t i = 0; i < classes.size(); ++i) {
      if (per_class[i]) continue;
      const ClassCtx& c = classes[i];
      if (c.j < 1) continue;
      int cells = c.j <= 2 ? 64 : 8;
      per_class[i] = grid_certificate(eng, c, cells, &fail_note);
    }
    if (!fail_note.empty()) verdict.note = fail_note;
  }

  for (size_t i = 0; i < classes.size(); ++i) {
    if (per_class[i])
      verdict.certificates.push_back(std::move(*per_class[i]));
    else
      verdict.unresolved.push_back(classes[i].reported);
  }

  if (witness) {
    verdict.kind = VerdictKind::feasible_at_bound;
    verdict.witness = std::move(witness);
    verdict.note.clear();
  } else if (verdict.unresolved.empty()) {
    verdict.kind = VerdictKind::infeasible_at_bound;
    verdict.note.clear();
  } else {
    verdict.kind = VerdictKind::unknown;
    if (verdict.note.empty())
      verdict.note = "some classes resist both certificates and exclusion";
  }
  return verdict;
}

// Report-only checks of one concrete profile against a target.
inline std::vector<Certificate> necessary_conditions(
    const IterationProfile& profile, const TargetPattern& target, int K) {
  using namespace mdetail;
  if (K < 1) throw input_error("cover horizon must be positive");
  if (profile.ambient_n() != target.ambient_n)
    throw input_error("profile and target ambient dimensions differ");
  std::vector<Certificate> out;
  if (target.ranks.is_zero()) return out;

  const bool mirrored = target.ranks.direction() == -1;
  RankFunction rf = mirrored ? mirror_rank_function(target.ranks) : target.ranks;
  TargetView view(rf);
  IterationProfile pr = mirrored ? reflect_profile(profile) : profile;
  CandidateClass cls{profile.r(), profile.j()};
  const int n = target.ambient_n;
  Engine eng{view, n, K, 0, true};

  int pp = class_parity(pr.r(), pr.j());
  if (!view.parity) {
    out.push_back({cls, CertificateKind::parity,
                   "target ranks occupy both parities; good covers of a "
                   "single orbit share one parity",
                   std::nullopt, std::nullopt});
  } else if (*view.parity != pp) {
    out.push_back({cls, CertificateKind::parity,
                   "profile's good covers sit in the wrong parity",
                   std::nullopt, std::nullopt});
  }

  SurdSum delta = mean_index_exact(pr);
  if (delta.sign() <= 0) {
    out.push_back({cls, CertificateKind::mean_index,
                   "profile mean index is not positive", std::nullopt,
                   std::nullopt});
    return out;
  }

  if (view.per_period > 0) {
    Rat dreq = eng.delta_required(pr.r());
    if (delta != SurdSum(dreq)) {
      std::optional<Int> at;
      Int t = 1;
      for (Int k = good_cover(pr.r(), t); k <= K; k = good_cover(pr.r(), ++t)) {
        if (iterated_index(pr, k) != view.degree_at(t)) {
          at = k;
          break;
        }
      }
      std::ostringstream os;
      os << "degree density forces mean index " << dreq
         << "; the profile's differs";
      out.push_back({cls, CertificateKind::mean_index, os.str(),
                     (dreq - Rat(pr.r())) / 2, at});
    }
  }

  Int H =
      surd_floor(delta * SurdSum(Rat(Int(K + 1))) - SurdSum(Rat(Int(n - 1))));
  if (H >= view.d_min) {
    std::map<Int, Int> counts = orbit_degree_multiset(pr, K);
    std::optional<Int> bad;
    for (const auto& [deg, cnt] : counts) {
      if (deg > H) continue;
      if (view.rank_at(deg) != cnt) {
        bad = deg;
        break;
      }
    }
    if (!bad) {
      for (Int d = view.d_min; d <= H; ++d) {
        Int want = view.rank_at(d);
        auto it = counts.find(d);
        Int got = it == counts.end() ? Int(0) : it->second;
        if (want != got) {
          bad = d;
          break;
        }
      }
    }
    if (bad) {
      std::ostringstream os;
      os << "produced degree multiset departs from the target at degree "
         << (mirrored ? -*bad : *bad);
      out.push_back({cls, CertificateKind::support, os.str(), std::nullopt,
                     std::nullopt});
    }
  }

  if (view.doubled && pr.r() >= 1) {
    out.push_back({cls, CertificateKind::gap,
                   "target repeats a degree but the profile's good-cover "
                   "indices strictly increase",
                   std::nullopt, std::nullopt});
  }
  if (K >= 2 && view.per_period > 0) {
    MonotonicityReport mono = monotonicity_report(pr, std::min(K, 512));
    if (mono.decreasing) {
      out.push_back({cls, CertificateKind::gap,
                     "profile indices decrease while the target tail extends "
                     "upward",
                     std::nullopt, std::nullopt});
    }
  }
  return out;
}

}  // namespace cziter
