// Acceptance checks, one line per criterion. Exits nonzero when any fail.
// Tolerances and horizons are pinned here on purpose; do not loosen them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cziter/json_io.hpp"
#include "cziter/theorems.hpp"

using namespace cziter;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome fail(std::string detail) { return {false, std::move(detail)}; }

using Clock = std::chrono::steady_clock;

int g_failures = 0;

template <class Fn>
void run(int num, const char* name, double limit_s, Fn&& fn) {
  auto t0 = Clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out = fail(std::string("exception: ") + e.what());
  }
  double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  bool timed_out = limit_s > 0 && dt >= limit_s;
  bool pass = out.ok && !timed_out;
  std::printf("%s %2d  %-66s %7.3fs\n", pass ? "PASS" : "FAIL", num, name, dt);
  if (!out.ok) std::printf("        %s\n", out.detail.c_str());
  if (timed_out)
    std::printf("        exceeded the %.0fs budget\n", limit_s);
  if (!pass) ++g_failures;
}

BettiTable ball_betti(int n) { return BettiTable(2 * n, {{2 * n, Int(1)}}); }

OrbitSystem ellipsoid_system() {
  std::vector<Orbit> orbits;
  orbits.push_back({"gamma1",
                    IterationProfile(Int(2),
                                     {Angle(QuadIrrational(Int(0), Int(1),
                                                           Int(2), Int(2)))},
                                     2)});
  orbits.push_back({"gamma2",
                    IterationProfile(Int(4),
                                     {Angle(QuadIrrational(Int(-1), Int(1),
                                                           Int(2), Int(1)))},
                                     2)});
  return OrbitSystem(std::move(orbits), 2);
}

// ---- criterion 1 ----

Outcome brieskorn_matches_ball() {
  for (int n : {2, 3, 5}) {
    RankFunction b = sh_ranks_brieskorn(Int(1), n);
    RankFunction d = sh_ranks_displaceable(ball_betti(n), n);
    for (Int deg(-50); deg <= 200; ++deg)
      if (b.rank(deg) != d.rank(deg))
        return fail("n = " + std::to_string(n) + ", degree " + deg.str() +
                    ": " + b.rank(deg).str() + " vs " + d.rank(deg).str());
  }
  return {};
}

// ---- criterion 2 ----

Outcome brieskorn_seven_table() {
  RankFunction rf = sh_ranks_brieskorn(Int(7), 3);
  const std::map<int, int> want{{2, 1}, {4, 1},  {6, 2}, {8, 2},
                                {10, 1}, {12, 1}, {14, 2}};
  for (int d = 0; d <= 15; ++d) {
    auto it = want.find(d);
    Int expect = it == want.end() ? Int(0) : Int(it->second);
    if (rf.rank(Int(d)) != expect)
      return fail("degree " + std::to_string(d) + ": got " +
                  rf.rank(Int(d)).str() + ", want " + expect.str());
  }
  return {};
}

// ---- criterion 3 ----

Outcome resonance_identity() {
  const double kWindowTol = 1e-3;
  OrbitSystem sys = ellipsoid_system();
  SurdSum orbit_side = chi_m_orbits(sys);
  if (!orbit_side.is_rational() || orbit_side.rational_part() != Rat(-1, 2))
    return fail("orbit side is not exactly -1/2");
  RankFunction ball = sh_ranks_displaceable(ball_betti(2), 2);
  if (chi_m_from_ranks(ball) != Rat(-1, 2))
    return fail("rank side is not exactly -1/2");
  ResonanceReport rep = resonance_check(sys, ball, 10000);
  if (std::abs(rep.windowed + 0.5) > kWindowTol)
    return fail("windowed sum " + std::to_string(rep.windowed) +
                " misses -1/2 by more than 1e-3");
  return {};
}

// ---- criterion 4 ----

Outcome beatty_partition() {
  const int K = 10000;
  const long long horizon = 20000;
  OrbitSystem sys = ellipsoid_system();
  std::map<long long, int> hits;
  for (const Orbit& o : sys.orbits)
    for (int k = 1; k <= K; ++k) {
      if (!is_good(o.profile, Int(k))) continue;
      Int mu = iterated_index(o.profile, Int(k));
      if (mu <= horizon) ++hits[mu.convert_to<long long>()];
    }
  for (const auto& [deg, count] : hits) {
    if (deg % 2 == 0 || deg < 3)
      return fail("unexpected degree " + std::to_string(deg));
    if (count != 1)
      return fail("degree " + std::to_string(deg) + " hit " +
                  std::to_string(count) + " times");
  }
  for (long long d = 3; d < horizon; d += 2)
    if (!hits.count(d)) return fail("degree " + std::to_string(d) + " missed");
  return {};
}

// ---- criterion 5 ----

Angle random_angle(std::mt19937& rng, int min_guard) {
  std::uniform_int_distribution<int> kind(0, 3);
  for (;;) {
    try {
      if (kind(rng) == 0) {
        // guarded rational with headroom past the horizon
        std::uniform_int_distribution<int> den_d(min_guard + 1, 8 * min_guard);
        int den = den_d(rng);
        std::uniform_int_distribution<int> num_d(1, den - 1);
        return GuardedRational(Rat(num_d(rng), den), Int(min_guard));
      }
      static const int ds[] = {2, 3, 5, 7, 11, 13};
      std::uniform_int_distribution<int> d_pick(0, 5);
      int d = ds[d_pick(rng)];
      std::uniform_int_distribution<int> s_d(8, 97);
      int s = s_d(rng);
      std::uniform_int_distribution<int> q_d(0, 1);
      int q = q_d(rng) ? 1 : -1;
      double root = std::sqrt(double(d));
      int lo = int(std::floor(-q * root)) + 1;
      int hi = int(std::ceil(s - q * root)) - 1;
      if (lo > hi) continue;
      std::uniform_int_distribution<int> p_d(lo, hi);
      return QuadIrrational(Int(p_d(rng)), Int(q), Int(d), Int(s));
    } catch (const invariant_error&) {
      // boundary rounding produced a value outside (0, 1); redraw
    }
  }
}

Outcome index_machinery_properties() {
  const int kProfiles = 1000;
  const int K = 500;
  std::mt19937 rng(20260825u);
  bool strict_gap_seen = false;
  int gap_profiles = 0;

  for (int i = 0; i < kProfiles; ++i) {
    std::uniform_int_distribution<int> n_d(2, 6);
    int n = n_d(rng);
    std::uniform_int_distribution<int> j_d(0, std::min(n - 1, 3));
    int j = j_d(rng);
    std::vector<Angle> thetas;
    for (int t = 0; t < j; ++t) thetas.push_back(random_angle(rng, K));

    int r;
    std::uniform_int_distribution<int> small_d(0, 2);
    switch (i % 5) {
      case 0: r = n + 1 - j; break;            // mu(1) = n + 1
      case 1: r = -n - j - small_d(rng); break;  // mu(1) <= -n
      case 2: r = n - 1 - j + small_d(rng); break;  // mu(1) >= n - 1
      default: {
        std::uniform_int_distribution<int> r_d(-2 * n, 2 * n);
        r = r_d(rng);
      }
    }
    IterationProfile profile(Int(r), std::move(thetas), n);
    Int mu1 = iterated_index(profile, Int(1));
    std::string tag = "profile " + std::to_string(i) + " (r=" +
                      std::to_string(r) + ", j=" + std::to_string(j) +
                      ", n=" + std::to_string(n) + ")";

    IndexSequence seq = index_sequence(profile, K);
    for (int k = 1; k <= K; ++k) {
      bool parity_match = (seq.values[size_t(k - 1)] - mu1) % 2 == 0;
      if (parity_match != seq.good_flags[size_t(k - 1)])
        return fail(tag + ": parity law breaks at k = " + std::to_string(k));
    }

    if (!verify_sz_bound(profile, K).ok)
      return fail(tag + ": |mu(k) - k Delta| reached n - 1");

    MonotonicityReport mono = monotonicity_report(profile, K);
    if (mu1 >= n - 1 && !mono.nondecreasing)
      return fail(tag + ": not nondecreasing despite mu(1) >= n - 1");
    if (mu1 == n + 1) {
      ++gap_profiles;
      if (!mono.gap2) return fail(tag + ": gap < 2 despite mu(1) = n + 1");
      if (mono.strict_gap_found_at) strict_gap_seen = true;
    }
    if (mu1 <= -n && !mono.decreasing)
      return fail(tag + ": not decreasing despite mu(1) <= -n");
  }
  if (gap_profiles == 0) return fail("no profiles hit mu(1) = n + 1");
  if (!strict_gap_seen) return fail("no strict gap > 2 found");
  return {};
}

// ---- criterion 6 ----

double angle_distance(double a, double b) {
  double d = std::fmod(a - b, 2 * M_PI);
  if (d > M_PI) d -= 2 * M_PI;
  if (d < -M_PI) d += 2 * M_PI;
  return std::abs(d);
}

Outcome rho_axioms() {
  const double kTol = 1e-9;
  static const std::pair<int, int> pyth[] = {{3, 5},  {5, 13},  {8, 17},
                                             {7, 25}, {20, 29}, {9, 41},
                                             {12, 37}, {28, 53}};
  std::mt19937 rng(424243u);
  std::uniform_int_distribution<int> pick(0, 7);
  std::uniform_int_distribution<int> sgn(0, 1);
  std::uniform_int_distribution<int> lam_num(2, 9);

  auto random_block = [&]() -> SymplecticMatrix {
    if (sgn(rng)) {
      auto [a, c] = pyth[size_t(pick(rng))];
      long long b2 = (long long)c * c - (long long)a * a;
      Rat cs(a, c), sn(Int(std::llround(std::sqrt(double(b2)))), Int(c));
      if (sgn(rng)) sn = -sn;
      if (sgn(rng)) cs = -cs;
      return block_R(cs, sn);
    }
    Rat lambda(lam_num(rng), 1);
    if (sgn(rng)) lambda = 1 / lambda;
    return block_D(lambda);
  };

  for (int i = 0; i < 200; ++i) {
    SymplecticMatrix a = random_block();
    SymplecticMatrix b = random_block();
    SymplecticMatrix ab = diamond(a, b);
    double want = rho(a).angle_double() + rho(b).angle_double();
    if (angle_distance(rho(ab).angle_double(), want) > kTol)
      return fail("multiplicativity breaks at sample " + std::to_string(i));

    SymplecticMatrix p = diamond(random_block(), random_block());
    SymplecticMatrix conj = p * ab * p.inverse();
    if (angle_distance(rho(conj).angle_double(), rho(ab).angle_double()) > kTol)
      return fail("conjugation invariance breaks at sample " +
                  std::to_string(i));
  }

  for (auto [a, c] : pyth) {
    long long b2 = (long long)c * c - (long long)a * a;
    Rat cs(a, c), sn(Int(std::llround(std::sqrt(double(b2)))), Int(c));
    RhoValue v = rho(block_R(cs, sn));
    if (!v.point) return fail("no exact point at a rational rotation");
    if (v.point->first != SurdSum(cs) || v.point->second != SurdSum(sn))
      return fail("rho(R) is not exactly e^{i theta} at cos = " +
                  rat_to_string(cs));
  }
  return {};
}

// ---- criterion 7 ----

Outcome path_index_oracle() {
  const double kTol = 1e-9;
  std::mt19937 rng(77787u);
  std::uniform_real_distribution<double> a_d(-5.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    double a;
    do {
      a = a_d(rng);
    } while (std::abs(a - std::round(a)) < 0.05);
    int samples = 48 + 16 * int(std::ceil(std::abs(a)));
    SymplecticPath path = rotation_path(a, samples);
    long long want = 2 * (long long)std::floor(a) + 1;
    if (cz_index(path) != want)
      return fail("a = " + std::to_string(a) + ": cz " +
                  std::to_string(cz_index(path)) + ", want " +
                  std::to_string(want));
    if (std::abs(mean_index_of_path(path) - 2 * a) > kTol)
      return fail("a = " + std::to_string(a) + ": mean index misses 2a");
    SymplecticPath fine = rotation_path(a, samples * 2);
    if (cz_index(fine) != want)
      return fail("a = " + std::to_string(a) + ": refinement changed cz");
    if (std::abs(mean_index_of_path(fine) - mean_index_of_path(path)) > kTol)
      return fail("a = " + std::to_string(a) + ": refinement moved the mean");
  }
  return {};
}

// ---- criterion 8 ----

Outcome theorem_reproduction() {
  const double kBudget = 60.0;
  SearchBounds k100;
  k100.K = 100;

  auto timed = [&](auto&& fn, const char* what,
                   Outcome& out) -> decltype(fn()) {
    auto t0 = Clock::now();
    auto rep = fn();
    double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    if (dt >= kBudget && out.ok)
      out = fail(std::string(what) + " exceeded the 60s budget");
    return rep;
  };

  Outcome out;
  TheoremCReport c7 =
      timed([&] { return theorem_c_check(Int(7), 3, k100); }, "a0 = 7", out);
  if (!out.ok) return out;
  if (c7.final != VerdictKind::infeasible_at_bound)
    return fail("a0 = 7 verdict is not infeasible-at-bound");
  if (!c7.beta_certificate || c7.beta != Int(121))
    return fail("a0 = 7 beta certificate should pin beta = 121");

  TheoremCReport c9 =
      timed([&] { return theorem_c_check(Int(9), 3, k100); }, "a0 = 9", out);
  if (!out.ok) return out;
  if (c9.final != VerdictKind::infeasible_at_bound || !c9.beta_certificate)
    return fail("a0 = 9 lacks the infeasible verdict with a beta certificate");

  TheoremBReport b = timed(
      [&] {
        return theorem_b_check({{0, Int(1)}, {2, Int(1)}}, 2, 2,
                               SearchBounds{});
      },
      "sphere bundle", out);
  if (!out.ok) return out;
  if (b.final != VerdictKind::infeasible_at_bound)
    return fail("sphere bundle verdict is not infeasible-at-bound");
  bool telescoping = false;
  for (const Certificate& c : b.closed_form)
    if (c.detail.find("telescoping") != std::string::npos) telescoping = true;
  if (!telescoping) return fail("no telescoping certificate on the bundle");

  TheoremAReport a = timed(
      [&] {
        return theorem_a_check(BettiTable(4, {{3, Int(1)}, {4, Int(1)}}), 2,
                               SearchBounds{});
      },
      "b3 = 1", out);
  if (!out.ok) return out;
  if (!a.case_i) return fail("b3 = 1 did not land in case (i)");
  if (a.final != VerdictKind::infeasible_at_bound)
    return fail("b3 = 1 verdict is not infeasible-at-bound");
  bool parity = false;
  for (const Certificate& c : a.feasibility.certificates)
    if (c.kind == CertificateKind::parity) parity = true;
  if (!parity) return fail("b3 = 1 lacks the parity obstruction");
  return {};
}

// ---- criterion 9 ----

Outcome appendix_reproduction() {
  SearchBounds bounds;
  bounds.K = 100;

  FeasibilityVerdict one = single_orbit_feasibility(
      target_displaceable(BettiTable(6, {{2, Int(1)}, {6, Int(1)}}), 3),
      bounds);
  if (one.kind != VerdictKind::infeasible_at_bound)
    return fail("pattern one is not infeasible-at-bound");
  bool three_halves = false;
  for (const Certificate& c : one.certificates)
    if (c.alpha && *c.alpha == Rat(3, 2)) three_halves = true;
  if (!three_halves)
    return fail("pattern one lacks the angle sum 3/2 certificate");

  for (int b4 = 4; b4 <= 20; ++b4) {
    FeasibilityVerdict two = single_orbit_feasibility(
        target_displaceable(
            BettiTable(6, {{2, Int(1)}, {4, Int(b4)}, {6, Int(1)}}), 3),
        bounds);
    if (two.kind != VerdictKind::infeasible_at_bound)
      return fail("pattern two, b4 = " + std::to_string(b4) +
                  ": not infeasible-at-bound");
    const Rat want(Int(b4) + 3, Int(b4) + 2);
    bool found = false;
    for (const Certificate& c : two.certificates)
      if (c.cls.r == -2 && c.cls.j == 2 && c.alpha && *c.alpha == want)
        found = true;
    if (!found)
      return fail("pattern two, b4 = " + std::to_string(b4) +
                  ": missing angle sum " + rat_to_string(want));
  }
  return {};
}

// ---- criterion 10 ----

Outcome chi_m_consistency() {
  std::mt19937 rng(90901u);
  std::uniform_int_distribution<int> n_d(2, 5);
  std::uniform_int_distribution<int> b_d(0, 4);
  for (int i = 0; i < 50; ++i) {
    int n = n_d(rng);
    std::map<int, Int> b;
    for (int deg = 1; deg <= 2 * n; ++deg) {
      int v = b_d(rng);
      if (v > 0) b[deg] = Int(v);
    }
    if (b.empty()) b[2 * n] = Int(1);
    BettiTable table(2 * n, std::move(b));
    Rat via_ranks = chi_m_from_ranks(sh_ranks_displaceable(table, n));
    Rat closed = chi_m_displaceable(table, n);
    if (via_ranks != closed)
      return fail("table " + std::to_string(i) + ": " +
                  rat_to_string(via_ranks) + " vs " + rat_to_string(closed));
  }
  return {};
}

}  // namespace

int main() {
  run(1, "brieskorn a0 = 1 matches the displaceable ball on [-50, 200]", 1.0,
      brieskorn_matches_ball);
  run(2, "brieskorn a0 = 7, n = 3 rank table on [0, 15]", 0,
      brieskorn_seven_table);
  run(3, "resonance identity: orbit and rank sides both equal -1/2", 5.0,
      resonance_identity);
  run(4, "beatty partition of the odd degrees in [3, 20000]", 0,
      beatty_partition);
  run(5, "parity, SZ bound, and monotonicity on 1000 profiles, K = 500", 30.0,
      index_machinery_properties);
  run(6, "rho multiplicativity and conjugation invariance, 200 samples", 0,
      rho_axioms);
  run(7, "path index oracle on 50 rotation paths", 0, path_index_oracle);
  run(8, "theorem checks: beta = 121, telescoping, parity case (i)", 0,
      theorem_reproduction);
  run(9, "appendix angle sums 3/2 and (b4+3)/(b4+2), all infeasible", 0,
      appendix_reproduction);
  run(10, "mean Euler characteristic closed forms agree on 50 tables", 0,
      chi_m_consistency);

  if (g_failures == 0) {
    std::printf("all 10 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria failed\n", g_failures);
  return 1;
}
