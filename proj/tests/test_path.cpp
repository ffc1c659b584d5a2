#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "cziter/path.hpp"
#include "test_helpers.hpp"

using namespace cziter;

namespace {

SymplecticMatrix rat_rot(const Rat& c, const Rat& s) { return block_R(c, s); }

// rotate to -1 along rational circle points, then stretch to D(-2)
SymplecticPath flip_then_stretch(int steps) {
  std::vector<PathSample> samples;
  const Int scale("1000000000000");
  const Real256 pi = pi_real256();
  for (int i = 0; i <= steps; ++i) {
    Real256 w = normalize_angle(pi * i / steps);
    Real256 t = tan(w / 2);
    Rat c, s;
    if (abs(t) > 1e10) {
      c = -1;
      s = 0;
    } else {
      Rat u(detail::round_real_to_int(t * Real256(scale)), scale);
      c = (1 - u * u) / (1 + u * u);
      s = 2 * u / (1 + u * u);
    }
    samples.push_back({0.5 * i / steps, rat_rot(c, s)});
  }
  for (int i = 1; i <= steps; ++i) {
    Rat r = 1 + Rat(i, steps);  // 1 -> 2
    RatMat m(2, 2);
    m(0, 0) = -r;
    m(1, 1) = Rat(-1) / r;
    samples.push_back({0.5 + 0.5 * i / steps, SymplecticMatrix(m)});
  }
  return SymplecticPath(std::move(samples), 1.0);
}

}  // namespace

TEST_CASE("path: constructor enforces the sampling contract") {
  SymplecticMatrix id = SymplecticMatrix::identity(1);
  // endpoint contract: a single sample at t = 0 cannot reach tau
  CHECK_THROWS_AS(SymplecticPath({{0.0, id}}, 1.0), invariant_error);
  // must start at the identity
  CHECK_THROWS_AS(
      SymplecticPath({{0.0, SymplecticMatrix(dpair(Rat(2)))}, {1.0, id}}, 1.0),
      invariant_error);
  // strictly increasing times, last at tau
  CHECK_THROWS_AS(SymplecticPath({{0.0, id}, {0.5, id}, {0.5, id}}, 1.0),
                  invariant_error);
  CHECK_THROWS_AS(SymplecticPath({{0.0, id}, {0.5, id}}, 1.0),
                  invariant_error);
  CHECK_THROWS_AS(SymplecticPath({{0.0, id}, {1.0, id}}, 0.0), input_error);
  CHECK_NOTHROW(SymplecticPath({{0.0, id}, {1.0, id}}, 1.0));
}

TEST_CASE("path: rho winding of rotations matches the closed form") {
  CHECK(rho_winding(rotation_path(2.5, 200)) == Catch::Approx(5.0).margin(1e-9));
  CHECK(rho_winding(rotation_path(0.45, 64)) ==
        Catch::Approx(0.9).margin(1e-9));
  CHECK(rho_winding(rotation_path(-0.3, 64)) ==
        Catch::Approx(-0.6).margin(1e-9));
  CHECK(mean_index_of_path(rotation_path(2.5, 200)) ==
        Catch::Approx(5.0).margin(1e-9));
}

TEST_CASE("path: hyperbolic stretches have zero winding") {
  CHECK(rho_winding(hyperbolic_path(Rat(2), 16)) ==
        Catch::Approx(0.0).margin(1e-30));
  CHECK(cz_index(hyperbolic_path(Rat(2), 16)) == 0);
}

TEST_CASE("path: density violations are reported, not absorbed") {
  // 2.5 turns over 9 samples: jump ~ 1.75 > pi/2
  CHECK_THROWS_AS(rho_winding(rotation_path(2.5, 9)), invariant_error);
}

TEST_CASE("path: rotation indices follow 2 floor(a) + 1") {
  CHECK(cz_index(rotation_path(0.45, 64)) == 1);
  CHECK(cz_index(rotation_path(2.5, 200)) == 5);
  CHECK(cz_index(rotation_path(-0.3, 64)) == -1);
  CHECK(cz_index(rotation_path(1.2, 96)) == 3);
  CHECK(cz_index(rotation_path(3.7, 256)) == 7);
}

TEST_CASE("path: degenerate endpoint is refused") {
  CHECK_THROWS_AS(cz_index(rotation_path(1.0, 64)), degeneracy_error);
}

TEST_CASE("path: refinement invariance and brute-force agreement") {
  for (double a : {0.45, 2.5, -1.3}) {
    long long coarse = cz_index(rotation_path(a, 64));
    CHECK(cz_index(rotation_path(a, 128)) == coarse);
    CHECK(cz_index(rotation_path(a, 111)) == coarse);
  }
  // the 10^3-sample brute force agrees on the flagship example
  CHECK(cz_index(rotation_path(2.5, 1000)) == 5);
}

TEST_CASE("path: index minus mean stays below 1 in Sp(2)") {
  for (double a : {0.1, 0.45, 0.9, 1.2, 2.5, 3.7, -0.3, -2.6}) {
    SymplecticPath p = rotation_path(a, 128);
    double gap = std::abs(double(cz_index(p)) - mean_index_of_path(p));
    CHECK(gap < 1.0);
  }
}

TEST_CASE("path: concatenation adds mean indices, powers scale them") {
  SymplecticPath p = rotation_path(0.45, 64);
  SymplecticPath p3 = path_power(p, 3);
  CHECK(mean_index_of_path(p3) == Catch::Approx(2.7).margin(1e-9));
  CHECK(cz_index(p3) == 3);  // 2 floor(1.35) + 1

  SymplecticPath q = concatenate(p, p);
  CHECK(mean_index_of_path(q) == Catch::Approx(1.8).margin(1e-9));
  CHECK(q.tau() == Catch::Approx(2.0));

  SymplecticPath h = hyperbolic_path(Rat(3), 64);
  CHECK(mean_index_of_path(path_power(h, 4)) ==
        Catch::Approx(0.0).margin(1e-30));
}

TEST_CASE("path: diamond of paths adds indices") {
  SymplecticPath rot = rotation_path(0.45, 64);
  SymplecticPath hyp = hyperbolic_path(Rat(2), 64);
  SymplecticPath both = path_diamond(rot, hyp);
  CHECK(both.dim() == 4);
  CHECK(cz_index(both) == 1);
  CHECK(mean_index_of_path(both) == Catch::Approx(0.9).margin(1e-9));

  SymplecticPath two = path_diamond(rot, rotation_path(1.2, 64));
  CHECK(cz_index(two) == 4);  // 1 + 3
}

TEST_CASE("path: hyperbolic endpoint forces mean = index exactly") {
  SymplecticPath p = flip_then_stretch(32);
  CHECK(cz_index(p) == 1);
  CHECK(mean_index_of_path(p) == Catch::Approx(1.0).margin(1e-12));
  SpectrumReport rep = spectrum(p.endpoint());
  CHECK(rep.unit_pairs.empty());
  CHECK(rep.negative_real_multiplicity() == 2);
}

TEST_CASE("path: grid mismatches are rejected") {
  CHECK_THROWS_AS(
      path_diamond(rotation_path(0.45, 64), rotation_path(0.45, 32)),
      input_error);
  CHECK_THROWS_AS(concatenate(rotation_path(0.45, 64),
                              path_diamond(rotation_path(0.45, 32),
                                           hyperbolic_path(Rat(2), 32))),
                  dimension_error);
}
