#include <catch2/catch_amalgamated.hpp>

#include "cziter/spectrum.hpp"
#include "test_helpers.hpp"

using namespace cziter;

namespace {

// closed-form oracle for the 2x2 case: the trace decides everything
struct Tiny2Oracle {
  bool unit;
  double cos_or_lambda;
};
Tiny2Oracle oracle2(const SymplecticMatrix& m) {
  double t = to_double(m(0, 0) + m(1, 1));
  if (std::abs(t) < 2) return {true, t / 2};
  double lam = (t + (t > 0 ? 1 : -1) * std::sqrt(t * t - 4)) / 2;
  return {false, lam};
}

}  // namespace

TEST_CASE("nondegeneracy_class matches exact determinant signs") {
  CHECK(nondegeneracy_class(SymplecticMatrix::identity(1)) == NondegeneracyClass::Degenerate);
  CHECK(nondegeneracy_class(SymplecticMatrix(mat2({{-1, 0}, {0, -1}}))) ==
        NondegeneracyClass::Plus);
  CHECK(nondegeneracy_class(dpair(Rat(2))) == NondegeneracyClass::Minus);
  CHECK(nondegeneracy_class(rot2(Rat(3, 5), Rat(4, 5))) == NondegeneracyClass::Plus);
  // N1(1,1) is degenerate
  CHECK(nondegeneracy_class(SymplecticMatrix(mat2({{1, 1}, {0, 1}}))) ==
        NondegeneracyClass::Degenerate);
}

TEST_CASE("nu: exact geometric multiplicities of rational candidates") {
  CHECK(nu(SymplecticMatrix::identity(1), Rat(1)) == 2);
  CHECK(nu(dpair(Rat(2)), Rat(1)) == 0);
  CHECK(nu(dpair(Rat(2)), Rat(2)) == 1);
  CHECK(nu(SymplecticMatrix(mat2({{1, 1}, {0, 1}})), Rat(1)) == 1);
  // complex rational candidate: R(pi/2) = [[0,1],[-1,0]] has eigenvalues +-i
  SymplecticMatrix quarter = rot2(Rat(0), Rat(1));
  CHECK(nu(quarter, Rat(0), Rat(1)) == 1);
  CHECK(nu(quarter, Rat(0), Rat(-1)) == 1);
  CHECK(nu(quarter, Rat(1)) == 0);
}

TEST_CASE("spectrum: rational rotation block") {
  SymplecticMatrix r = rot2(Rat(3, 5), Rat(4, 5));
  SpectrumReport rep = spectrum(r);
  CHECK(rep.exact);
  REQUIRE(rep.unit_pairs.size() == 1);
  const UnitPair& u = rep.unit_pairs[0];
  CHECK(u.alg == 1);
  CHECK(u.geom == 1);
  REQUIRE(u.cos_exact.has_value());
  CHECK(*u.cos_exact == SurdSum(Rat(3, 5)));
  REQUIRE(u.sin_exact.has_value());
  CHECK(*u.sin_exact == SurdSum(Rat(4, 5)));
  CHECK(u.krein_known);
  CHECK(u.krein_plus == 1);
  CHECK(u.krein_minus == 0);
  CHECK(u.theta0_d() == Catch::Approx(std::acos(0.6)));
  CHECK(rep.elliptic_height() == 2);
  CHECK(rep.real_pairs.empty());
  auto o = oracle2(r);
  CHECK(o.unit);
  CHECK(static_cast<double>(u.cos_approx) == Catch::Approx(o.cos_or_lambda));
}

TEST_CASE("spectrum: hyperbolic blocks, both signs") {
  SpectrumReport rep = spectrum(dpair(Rat(2)));
  CHECK(rep.exact);
  REQUIRE(rep.real_pairs.size() == 1);
  CHECK(rep.real_pairs[0].positive);
  CHECK(rep.real_pairs[0].alg == 1);
  REQUIRE(rep.real_pairs[0].lambda_exact.has_value());
  CHECK(*rep.real_pairs[0].lambda_exact == SurdSum(Rat(2)));
  CHECK(rep.elliptic_height() == 0);
  CHECK(rep.negative_real_multiplicity() == 0);

  SpectrumReport rn = spectrum(dpair(Rat(-2)));
  REQUIRE(rn.real_pairs.size() == 1);
  CHECK_FALSE(rn.real_pairs[0].positive);
  CHECK(rn.negative_real_multiplicity() == 2);
  auto o = oracle2(dpair(Rat(-2)));
  CHECK_FALSE(o.unit);
  CHECK(static_cast<double>(rn.real_pairs[0].lambda_approx) == Catch::Approx(o.cos_or_lambda));
}

TEST_CASE("spectrum: identity and minus identity") {
  SpectrumReport ri = spectrum(SymplecticMatrix::identity(2));
  CHECK(ri.plus_one.alg == 4);
  CHECK(ri.plus_one.geom == 4);
  CHECK(ri.elliptic_height() == 4);

  SpectrumReport rm = spectrum(SymplecticMatrix(mat2({{-1, 0}, {0, -1}})));
  CHECK(rm.minus_one.alg == 2);
  CHECK(rm.minus_one.geom == 2);
  CHECK(rm.negative_real_multiplicity() == 2);
}

TEST_CASE("spectrum: diamond products take multiset unions") {
  SymplecticMatrix r1 = rot2(Rat(3, 5), Rat(4, 5));
  SymplecticMatrix r2 = rot2(Rat(5, 13), Rat(12, 13));
  SpectrumReport rep = spectrum(diamond(r1, r2));
  CHECK(rep.exact);
  REQUIRE(rep.unit_pairs.size() == 2);
  // sorted by cos descending
  CHECK(*rep.unit_pairs[0].cos_exact == SurdSum(Rat(3, 5)));
  CHECK(*rep.unit_pairs[1].cos_exact == SurdSum(Rat(5, 13)));
  CHECK(rep.elliptic_height() == 4);

  SpectrumReport mixed = spectrum(diamond(dpair(Rat(2)), r1));
  CHECK(mixed.unit_pairs.size() == 1);
  CHECK(mixed.real_pairs.size() == 1);
  CHECK(mixed.elliptic_height() == 2);

  SpectrumReport dd = spectrum(diamond(dpair(Rat(2)), dpair(Rat(2))));
  REQUIRE(dd.real_pairs.size() == 1);
  CHECK(dd.real_pairs[0].alg == 2);
  CHECK(dd.real_pairs[0].geom == 2);
}

TEST_CASE("spectrum: repeated elliptic pair with aligned vs opposed Krein signs") {
  SymplecticMatrix r = rot2(Rat(3, 5), Rat(4, 5));
  SymplecticMatrix ropp = rot2(Rat(3, 5), Rat(-4, 5));

  SpectrumReport aligned = spectrum(diamond(r, r));
  REQUIRE(aligned.unit_pairs.size() == 1);
  CHECK(aligned.unit_pairs[0].alg == 2);
  CHECK(aligned.unit_pairs[0].geom == 2);
  CHECK(aligned.unit_pairs[0].krein_known);
  CHECK(aligned.unit_pairs[0].krein_plus == 2);
  CHECK(aligned.unit_pairs[0].krein_minus == 0);

  SpectrumReport opposed = spectrum(diamond(r, ropp));
  REQUIRE(opposed.unit_pairs.size() == 1);
  CHECK(opposed.unit_pairs[0].alg == 2);
  CHECK(opposed.unit_pairs[0].geom == 2);
  CHECK(opposed.unit_pairs[0].krein_plus == 1);
  CHECK(opposed.unit_pairs[0].krein_minus == 1);
}

TEST_CASE("spectrum: non-semisimple unit eigenvalue (one Jordan 2-block)") {
  SymplecticMatrix n2 = n2_of(Rat(3, 5), Rat(4, 5));
  SpectrumReport rep = spectrum(n2);
  CHECK(rep.exact);
  REQUIRE(rep.unit_pairs.size() == 1);
  const UnitPair& u = rep.unit_pairs[0];
  CHECK(u.alg == 2);
  CHECK(u.geom == 1);
  CHECK(u.krein_known);
  // the eigenvector of a 2-block is isotropic, so the signature is mixed
  CHECK(u.krein_plus == 1);
  CHECK(u.krein_minus == 1);
  CHECK(rep.elliptic_height() == 4);
  CHECK(nu(n2, Rat(0), Rat(1)) == 0);
}

TEST_CASE("spectrum: quadratic-irrational elliptic pairs (order-10 matrix)") {
  // B = [[0,1],[1,1]] has eigenvalues (1 +- sqrt5)/2, both in (-2, 2)
  RatMat b = mat_of({{0, 1}, {1, 1}});
  SymplecticMatrix m = b_factory(b);
  SpectrumReport rep = spectrum(m);
  CHECK(rep.exact);
  REQUIRE(rep.unit_pairs.size() == 2);
  // cos values (1 +- sqrt5)/4 = cos(pi/5), cos(3pi/5)
  SurdSum c0 = SurdSum(Rat(1, 4)) + SurdSum::sqrt_term(Rat(1, 4), 5);
  SurdSum c1 = SurdSum(Rat(1, 4)) - SurdSum::sqrt_term(Rat(1, 4), 5);
  REQUIRE(rep.unit_pairs[0].cos_exact.has_value());
  CHECK(*rep.unit_pairs[0].cos_exact == c0);
  CHECK(*rep.unit_pairs[1].cos_exact == c1);
  for (const auto& u : rep.unit_pairs) {
    CHECK(u.alg == 1);
    CHECK(u.geom == 1);
    CHECK(u.krein_known);
    CHECK(u.krein_plus == 1);  // this construction always has positive pairs
    CHECK(u.krein_minus == 0);
  }
  // order 10: theta = pi/5 and 3pi/5, so M^5 = -I
  RatMat minus_id = RatMat::identity(4) * Rat(-1);
  CHECK(m.pow(5).mat() == minus_id);
  CHECK(m.pow(10).mat() == RatMat::identity(4));
}

TEST_CASE("spectrum: quadratic-irrational hyperbolic pairs") {
  // B = [[1,2],[2,-1]]: char y^2 - 5, eigenvalues +-sqrt5, |y| > 2
  RatMat b = mat_of({{1, 2}, {2, -1}});
  SymplecticMatrix m = b_factory(b);
  SpectrumReport rep = spectrum(m);
  CHECK(rep.exact);
  REQUIRE(rep.real_pairs.size() == 2);
  CHECK(rep.unit_pairs.empty());
  // sorted by lambda descending: positive pair first
  CHECK(rep.real_pairs[0].positive);
  CHECK_FALSE(rep.real_pairs[1].positive);
  // lambda = (sqrt5 + 1)/2 for the positive pair
  SurdSum golden = SurdSum(Rat(1, 2)) + SurdSum::sqrt_term(Rat(1, 2), 5);
  REQUIRE(rep.real_pairs[0].lambda_exact.has_value());
  CHECK(*rep.real_pairs[0].lambda_exact == golden);
  CHECK(rep.negative_real_multiplicity() == 2);
  CHECK(rep.elliptic_height() == 0);
}

TEST_CASE("spectrum: mixed quadratic factor (one elliptic, one hyperbolic)") {
  // B = [[2,1],[1,1]]: char y^2 - 3y + 1, roots (3 +- sqrt5)/2 = 2.618, 0.382
  SymplecticMatrix m = b_factory(mat_of({{2, 1}, {1, 1}}));
  SpectrumReport rep = spectrum(m);
  CHECK(rep.exact);
  REQUIRE(rep.unit_pairs.size() == 1);
  REQUIRE(rep.real_pairs.size() == 1);
  SurdSum cos_small = SurdSum(Rat(3, 4)) - SurdSum::sqrt_term(Rat(1, 4), 5);
  CHECK(*rep.unit_pairs[0].cos_exact == cos_small);
  CHECK(rep.real_pairs[0].positive);
  CHECK_FALSE(rep.real_pairs[0].lambda_exact.has_value());  // nested radical
  REQUIRE(rep.real_pairs[0].y_exact.has_value());
  SurdSum y_big = SurdSum(Rat(3, 2)) + SurdSum::sqrt_term(Rat(1, 2), 5);
  CHECK(*rep.real_pairs[0].y_exact == y_big);
  // self-check: lambda + 1/lambda must reproduce y
  double lam = static_cast<double>(rep.real_pairs[0].lambda_approx);
  CHECK(lam > 1.0);
  CHECK(lam + 1.0 / lam ==
        Catch::Approx(static_cast<double>(y_big.to_real<Real256>())).epsilon(1e-12));
}

TEST_CASE("spectrum: exact complex quadruple") {
  // diag(A, A^{-T}) with A = [[1,-1],[1,1]]: eigenvalues 1 +- i and (1 -+ i)/2
  RatMat a = mat_of({{1, -1}, {1, 1}});
  SymplecticMatrix m = gl_embed(a);
  SpectrumReport rep = spectrum(m);
  CHECK(rep.exact);
  CHECK(rep.unit_pairs.empty());
  CHECK(rep.real_pairs.empty());
  REQUIRE(rep.quadruples.size() == 1);
  const Quadruple& q = rep.quadruples[0];
  CHECK(q.alg == 1);
  CHECK(q.geom == 1);
  REQUIRE(q.y_exact.has_value());
  CHECK(q.y_exact->a == Rat(3, 2));
  CHECK(q.y_exact->b == Rat(1, 2));
  CHECK(q.y_exact->d == 1);
  CHECK(static_cast<double>(q.lambda_approx.re) == Catch::Approx(1.0));
  CHECK(static_cast<double>(q.lambda_approx.im) == Catch::Approx(1.0));
  CHECK(rep.elliptic_height() == 0);
}

TEST_CASE("spectrum: cubic factor needs the numeric path") {
  RatMat b = mat_of({{0, 1, 0}, {1, 0, 1}, {0, 1, 1}});  // char y^3 - y^2 - 2y + 1
  SymplecticMatrix m = b_factory(b);
  SpectrumReport rep = spectrum(m);
  CHECK_FALSE(rep.exact);
  REQUIRE(rep.unit_pairs.size() == 3);
  CHECK(rep.elliptic_height() == 6);
  std::vector<double> expected = {1.8019377358048383, 0.44504186791262884,
                                  -1.2469796037174672};
  std::sort(expected.begin(), expected.end(), std::greater<double>());
  for (int i = 0; i < 3; ++i) {
    const UnitPair& u = rep.unit_pairs[i];
    CHECK(u.alg == 1);
    CHECK(u.geom == 1);
    CHECK(static_cast<double>(u.cos_approx) == Catch::Approx(expected[i] / 2));
    CHECK_FALSE(u.cos_exact.has_value());
    CHECK(u.krein_known);
    CHECK(u.krein_plus == 1);
    CHECK(u.krein_minus == 0);
  }
}

TEST_CASE("spectrum: invariance under symplectic conjugation") {
  SymplecticMatrix m = diamond(rot2(Rat(3, 5), Rat(4, 5)), dpair(Rat(-3)));
  SymplecticMatrix g = random_symplectic(2, 17, 5);
  SymplecticMatrix conj = g * m * g.inverse();
  SpectrumReport a = spectrum(m), b = spectrum(conj);
  REQUIRE(a.unit_pairs.size() == b.unit_pairs.size());
  REQUIRE(a.real_pairs.size() == b.real_pairs.size());
  for (size_t i = 0; i < a.unit_pairs.size(); ++i) {
    CHECK(*a.unit_pairs[i].cos_exact == *b.unit_pairs[i].cos_exact);
    CHECK(a.unit_pairs[i].alg == b.unit_pairs[i].alg);
    CHECK(a.unit_pairs[i].geom == b.unit_pairs[i].geom);
    CHECK(a.unit_pairs[i].krein_plus == b.unit_pairs[i].krein_plus);
    CHECK(a.unit_pairs[i].krein_minus == b.unit_pairs[i].krein_minus);
  }
  for (size_t i = 0; i < a.real_pairs.size(); ++i) {
    CHECK(a.real_pairs[i].positive == b.real_pairs[i].positive);
    CHECK(a.real_pairs[i].alg == b.real_pairs[i].alg);
  }
  CHECK(a.elliptic_height() == b.elliptic_height());
}

TEST_CASE("spectrum: total multiplicity fills the dimension") {
  for (unsigned seed : {2u, 9u, 23u, 31u}) {
    SymplecticMatrix m = random_symplectic(2, seed, 6);
    SpectrumReport rep = spectrum(m);
    CHECK(rep.total_algebraic() == 4);
  }
  SymplecticMatrix big = random_symplectic(3, 77, 6);
  CHECK(spectrum(big).total_algebraic() == 6);
}
