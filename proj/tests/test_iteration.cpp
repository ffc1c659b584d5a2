#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "cziter/iteration.hpp"
#include "cziter/path.hpp"
#include "test_helpers.hpp"

using namespace cziter;

namespace {

Angle sqrt2_over_2() { return QuadIrrational(0, 1, 2, 2); }     // 0.7071...
Angle sqrt2_minus_1() { return QuadIrrational(-1, 1, 2, 1); }   // 0.4142...

}  // namespace

TEST_CASE("angle: validation of both representations") {
  CHECK_NOTHROW(QuadIrrational(0, 1, 2, 2));
  CHECK_NOTHROW(QuadIrrational(-1, 1, 2, 1));
  CHECK_THROWS_AS(QuadIrrational(0, 0, 2, 2), invariant_error);   // q = 0
  CHECK_THROWS_AS(QuadIrrational(0, 1, 4, 2), invariant_error);   // d square
  CHECK_THROWS_AS(QuadIrrational(0, 1, 2, 1), invariant_error);   // > 1
  CHECK_THROWS_AS(QuadIrrational(0, -1, 2, 2), invariant_error);  // < 0
  CHECK_THROWS_AS(QuadIrrational(2, 1, 2, 1), invariant_error);   // 2+sqrt2 > 1
  CHECK_NOTHROW(QuadIrrational(3, -2, 2, 1));  // 3 - 2 sqrt2 = 0.1716
  CHECK_NOTHROW(QuadIrrational(3, -1, 2, 2));  // (3 - sqrt2)/2 = 0.7928
  CHECK_NOTHROW(GuardedRational(Rat(1, 1000), 999));
  CHECK_THROWS_AS(GuardedRational(Rat(1, 1000), 1000), invariant_error);
  CHECK_THROWS_AS(GuardedRational(Rat(3, 2), 1), invariant_error);
}

TEST_CASE("floor_multiple: exact integer-comparison floors") {
  CHECK(floor_multiple(sqrt2_over_2(), 2) == 1);
  CHECK(floor_multiple(sqrt2_minus_1(), 5) == 2);  // 5*0.4142 = 2.071
  CHECK(floor_multiple(Angle(GuardedRational(Rat(1, 1000), 999)), 999) == 0);
  CHECK_THROWS_AS(floor_multiple(Angle(GuardedRational(Rat(1, 1000), 999)), 1000),
                  guard_error);
  // long sweep against a high-precision numeric oracle
  Angle th = QuadIrrational(1, 2, 3, 7);  // (1 + 2 sqrt3)/7 = 0.6378
  double v = (1 + 2 * std::sqrt(3.0)) / 7;
  for (int k = 1; k <= 2000; ++k)
    CHECK(floor_multiple(th, k) == Int(std::floor(k * v)));
}

TEST_CASE("iterated_index: canonical form") {
  IterationProfile base(2, {sqrt2_minus_1()}, 2);
  CHECK(iterated_index(base, 1) == 3);
  CHECK(base.base_index() == 3);
  CHECK(iterated_index(base, 2) == 5);  // 4 + 2*0 + 1
  CHECK(iterated_index(base, 3) == 9);  // 6 + 2*1 + 1

  IterationProfile hyp(2, {}, 2);
  CHECK(iterated_index(hyp, 7) == 14);
}

TEST_CASE("iterated_index: long form agrees or is rejected") {
  LongFormData ld{{Int(3)}, {}, {}, {sqrt2_minus_1()}};
  IterationProfile with_long(2, {sqrt2_minus_1()}, 2, ld);
  for (int k = 1; k <= 50; ++k)
    CHECK(iterated_index(with_long, k) ==
          iterated_index(IterationProfile(2, {sqrt2_minus_1()}, 2), k));

  // same k=1 totals, different angle: detected at k = 2
  LongFormData bad{{Int(3)}, {}, {}, {sqrt2_over_2()}};
  IterationProfile broken(2, {sqrt2_minus_1()}, 2, bad);
  CHECK(iterated_index(broken, 1) == 3);
  CHECK_THROWS_AS(iterated_index(broken, 2), invariant_error);

  // construction-time constraint: sum(P) + sum(W) + sum(Q) = r + j
  LongFormData off{{Int(5)}, {}, {}, {sqrt2_minus_1()}};
  CHECK_THROWS_AS(IterationProfile(2, {sqrt2_minus_1()}, 2, off),
                  invariant_error);
  LongFormData even_p{{Int(2)}, {Int(1)}, {}, {sqrt2_minus_1()}};
  CHECK_THROWS_AS(IterationProfile(2, {sqrt2_minus_1()}, 2, even_p),
                  invariant_error);
}

TEST_CASE("mean_index: exact surd-sum values") {
  IterationProfile hyp(2, {}, 2);
  CHECK(mean_index_exact(hyp) == SurdSum(Rat(2)));

  IterationProfile ell(2, {sqrt2_over_2()}, 2);
  SurdSum expect = SurdSum(Rat(2)) + SurdSum::sqrt_term(Rat(1), 2);
  CHECK(mean_index_exact(ell) == expect);
  CHECK(mean_index(ell) == Catch::Approx(3.41421356).epsilon(1e-8));

  // theta1 + theta2 = 3/2 exactly: the surds cancel
  Angle th1 = sqrt2_over_2();                 // sqrt2/2
  Angle th2 = QuadIrrational(3, -1, 2, 2);    // (3 - sqrt2)/2
  IterationProfile pair(0, {th1, th2}, 3);
  CHECK(mean_index_exact(pair) == SurdSum(Rat(3)));
}

TEST_CASE("is_good: parity rule (k-1) r even") {
  IterationProfile even_r(2, {sqrt2_minus_1()}, 2);
  for (int k = 1; k <= 6; ++k) CHECK(is_good(even_r, k));

  IterationProfile odd_r(1, {}, 2);
  CHECK(is_good(odd_r, 1));
  CHECK_FALSE(is_good(odd_r, 2));
  CHECK(is_good(odd_r, 3));
}

TEST_CASE("index_sequence: values and flags") {
  IndexSequence s = index_sequence(IterationProfile(2, {sqrt2_minus_1()}, 2), 3);
  CHECK(s.values == std::vector<Int>{3, 5, 9});
  CHECK(s.good_flags == std::vector<bool>{true, true, true});

  IndexSequence h = index_sequence(IterationProfile(1, {}, 2), 4);
  CHECK(h.values == std::vector<Int>{1, 2, 3, 4});
  CHECK(h.good_flags == std::vector<bool>{true, false, true, false});

  IndexSequence z = index_sequence(IterationProfile(0, {}, 2), 3);
  CHECK(z.values == std::vector<Int>{0, 0, 0});
  CHECK(z.good_flags == std::vector<bool>{true, true, true});

  // parity law: mu(k) = k r + j (mod 2)
  IterationProfile p(3, {sqrt2_over_2()}, 3);
  IndexSequence seq = index_sequence(p, 40);
  for (int k = 1; k <= 40; ++k)
    CHECK((seq.values[k - 1] - k * 3 - 1) % 2 == 0);
}

TEST_CASE("verify_sz_bound: strict deviation bound") {
  SzBoundReport hyp = verify_sz_bound(IterationProfile(2, {}, 2), 100);
  CHECK(hyp.ok);
  CHECK(hyp.max_deviation == 0.0);

  SzBoundReport ell =
      verify_sz_bound(IterationProfile(2, {sqrt2_minus_1()}, 2), 500);
  CHECK(ell.ok);
  CHECK(ell.max_deviation < 1.0);
  CHECK(ell.max_deviation > 0.5);  // fractional parts come close to 0 and 1

  // two angles crowding 1: deviation approaches 2 = n - 1 but never lands
  Angle near1a = GuardedRational(Rat(999999, 1000003), 1000000);
  Angle near1b = GuardedRational(Rat(1000001, 1000033), 1000000);
  SzBoundReport adv =
      verify_sz_bound(IterationProfile(0, {near1a, near1b}, 3), 200);
  CHECK(adv.ok);
  CHECK(adv.max_deviation < 2.0);
  CHECK(adv.max_deviation > 1.9);
}

TEST_CASE("monotonicity_report: the three regime predicates") {
  // mu1 = n - 1 (n = 3): nondecreasing
  IterationProfile low(0, {sqrt2_over_2(), sqrt2_minus_1()}, 3);
  MonotonicityReport a = monotonicity_report(low, 200);
  CHECK(a.nondecreasing);
  CHECK_FALSE(a.decreasing);

  // mu1 = n + 1 (n = 2): every step gains >= 2 and some step gains more
  IterationProfile high(2, {sqrt2_minus_1()}, 2);
  MonotonicityReport b = monotonicity_report(high, 100);
  CHECK(b.nondecreasing);
  CHECK(b.gap2);
  REQUIRE(b.strict_gap_found_at.has_value());
  // the first strict gap: floor jumps by 1 across k -> k+1
  Int k0 = *b.strict_gap_found_at;
  CHECK(iterated_index(high, k0 + 1) - iterated_index(high, k0) > 2);

  // mu1 <= -n: strictly decreasing
  IterationProfile neg(-3, {sqrt2_over_2()}, 2);
  CHECK(neg.base_index() == -2);
  MonotonicityReport c = monotonicity_report(neg, 100);
  CHECK(c.decreasing);
  CHECK_FALSE(c.nondecreasing);
}

TEST_CASE("iteration: random profiles satisfy parity and subadditivity") {
  std::mt19937 rng(20240817u);
  std::uniform_int_distribution<int> rdist(-6, 6), ndist(2, 4);
  std::uniform_int_distribution<int> pdist(1, 40), ddist(2, 30);
  for (int trial = 0; trial < 60; ++trial) {
    int n = ndist(rng);
    std::uniform_int_distribution<int> jdist(0, n - 1);
    int j = jdist(rng);
    std::vector<Angle> thetas;
    for (int i = 0; i < j; ++i) {
      // build a quad irrational in (0,1): (p + sqrt(d))/s with d nonsquare
      Int d = ddist(rng);
      Int root;
      while (is_square(d, &root)) d += 1;
      Int p = pdist(rng);
      Int s = 2 * p + 11;
      thetas.emplace_back(QuadIrrational(p, 1, d, s));
    }
    IterationProfile prof(rdist(rng), thetas, n);
    IndexSequence seq = index_sequence(prof, 60);
    for (int k = 1; k <= 60; ++k) {
      Int expect_parity = (k * prof.r() + prof.j()) % 2;
      CHECK((seq.values[k - 1] - expect_parity) % 2 == 0);
    }
    for (auto [k1, k2] : {std::pair(3, 5), std::pair(7, 20), std::pair(1, 59)}) {
      Int lhs = iterated_index(prof, k1 + k2);
      Int rhs = iterated_index(prof, k1) + iterated_index(prof, k2) -
                2 * prof.j();
      CHECK(lhs >= rhs);
    }
    // mean index as the k -> infinity slope
    double delta = mean_index(prof);
    Int mu_big = iterated_index(prof, 10000);
    CHECK(std::abs(mu_big.convert_to<double>() / 10000 - delta) <=
          2.0 * (n - 1) / 10000);
  }
}

TEST_CASE("iteration: cross-oracle against sampled path powers") {
  // rational angle 9/20: profile r=0, j=1 matches R(2 pi 0.45 t)
  IterationProfile prat(0, {Angle(GuardedRational(Rat(9, 20), 19))}, 2);
  SymplecticPath base = rotation_path(0.45, 32);
  for (int k = 1; k <= 8; ++k)
    CHECK(iterated_index(prat, k) == Int(cz_index(path_power(base, k))));

  // quadratic angle sqrt2 - 1
  IterationProfile pquad(0, {sqrt2_minus_1()}, 2);
  SymplecticPath qbase = rotation_path(std::sqrt(2.0) - 1, 48);
  for (int k = 1; k <= 6; ++k)
    CHECK(iterated_index(pquad, k) == Int(cz_index(path_power(qbase, k))));
}
