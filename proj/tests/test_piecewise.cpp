#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "degen1d/piecewise.hpp"
#include "degen1d/weight.hpp"

using namespace degen1d;

namespace {
const double kPi = 4.0 * std::atan(1.0);
}

TEST_CASE("evaluate closed forms") {
  auto f = make_poly(make_interval(-2, 2), {1, 0, -2, 0, 1});  // (1-x^2)^2
  CHECK(f.evaluate(0.0) == 1.0);
  CHECK(f.evaluate(1.0) == 0.0);
  CHECK(f.evaluate(-2.0) == 9.0);

  auto g = make_one_plus_sin_inv(make_interval(1e-3, 1.0));
  CHECK_THAT(g.evaluate(2.0 / kPi), Catch::Matchers::WithinAbs(2.0, 1e-14));

  auto ramp = make_samples(make_interval(0, 1), {0.0, 0.5, 1.0});
  CHECK_THAT(ramp.evaluate(0.25), Catch::Matchers::WithinAbs(0.25, 1e-15));
}

TEST_CASE("evaluate rejects points off the domain") {
  auto f = make_poly(make_interval(0, 1), {1});
  CHECK_THROWS_AS(f.evaluate(1.5), OutOfDomain);
  CHECK_THROWS_AS(f.evaluate(-0.1), OutOfDomain);
}

TEST_CASE("one-sided limits at a jump") {
  auto f = make_step(make_interval(0, 1), 0.5, 0.0, 1.0);
  auto s = f.one_sided_limits(0.5);
  REQUIRE(s.left);
  REQUIRE(s.right);
  CHECK(*s.left == 0.0);
  CHECK(*s.right == 1.0);
  // interior breakpoint evaluation takes the right piece
  CHECK(f.evaluate(0.5) == 1.0);
}

TEST_CASE("one-sided limits of a continuous piece agree with evaluate") {
  auto f = make_poly(make_interval(-1, 1), {0.5, 2.0, -1.0});
  for (double x : {-0.75, 0.0, 0.3, 0.9}) {
    auto s = f.one_sided_limits(x);
    CHECK_THAT(*s.left, Catch::Matchers::WithinAbs(f.evaluate(x), 1e-15));
    CHECK_THAT(*s.right, Catch::Matchers::WithinAbs(f.evaluate(x), 1e-15));
  }
}

TEST_CASE("one-sided limits with a singular endpoint") {
  auto f = make_power(make_interval(0, 1), 1.0, -3.0);  // 1/x^3
  auto s = f.one_sided_limits(0.0);
  CHECK_FALSE(s.left);
  REQUIRE(s.right);
  CHECK(*s.right == kInf);
}

TEST_CASE("ess sup of 1/w") {
  auto w1 = make_weight(make_constant(make_interval(0, 1), 1.0));
  CHECK(ess_sup_reciprocal(w1, {0, 1}) == 1.0);

  auto w = make_weight(make_poly(make_interval(-2, 2), {1, 0, -2, 0, 1}));
  // oracle: min of w on [-1/2,1/2] is (3/4)^2 at the ends
  CHECK_THAT(ess_sup_reciprocal(w, {-0.5, 0.5}),
             Catch::Matchers::WithinRel(16.0 / 9.0, 1e-14));
  // zero of w at -1 lies inside
  CHECK(ess_sup_reciprocal(w, {-2.0, 0.0}) == kInf);
}

TEST_CASE("ess sup reciprocal is antitone in the interval") {
  auto w = make_weight(make_poly(make_interval(-2, 2), {1, 0, -2, 0, 1}));
  std::mt19937_64 rng(7);
  auto u01 = [&] { return (rng() >> 11) * 0x1.0p-53; };
  for (int it = 0; it < 50; ++it) {
    double a = -2.0 + 4.0 * u01(), b = -2.0 + 4.0 * u01();
    if (a > b) std::swap(a, b);
    if (b - a < 1e-3) continue;
    const double pad = 0.25 * (b - a);
    const double inner = ess_sup_reciprocal(w, {a + pad, b - pad});
    const double outer = ess_sup_reciprocal(w, {a, b});
    CHECK(inner <= outer * (1.0 + 1e-12));
  }
}

TEST_CASE("derivative of the registry kinds") {
  auto f = make_poly(make_interval(0, 1), {0, 0, 1});  // x^2
  auto df = f.derivative();
  CHECK_THAT(df.evaluate(0.25), Catch::Matchers::WithinAbs(0.5, 1e-15));

  auto p = make_power(make_interval(0, 1), 1.0, -3.0);
  auto dp = p.derivative();
  CHECK_THAT(dp.evaluate(0.5), Catch::Matchers::WithinRel(-3.0 / std::pow(0.5, 4.0), 1e-13));

  auto s = make_samples(make_interval(0, 1), {0.0, 1.0, 0.0});
  auto ds = s.derivative();
  CHECK_THAT(ds.evaluate(0.25), Catch::Matchers::WithinAbs(2.0, 1e-13));
  CHECK_THAT(ds.evaluate(0.75), Catch::Matchers::WithinAbs(-2.0, 1e-13));
}

TEST_CASE("weight derivative density integrates back to the weight") {
  auto w = make_weight(make_poly(make_interval(-2, 2), {1, 0, -2, 0, 1}));
  REQUIRE(w.derivative_density);
  QuadratureConfig q;
  CHECK(derivative_consistency_defect(w, q) <= 1e-9);
}

TEST_CASE("total variation measure") {
  QuadratureConfig q;
  auto w1 = make_weight(make_constant(make_interval(0, 1), 1.0));
  CHECK(total_variation_measure(w1, {0, 1}, q) == 0.0);

  auto w = make_weight(make_poly(make_interval(-2, 2), {1, 0, -2, 0, 1}));
  // piecewise monotone: total variation is the sum of endpoint differences
  CHECK_THAT(total_variation_measure(w, {-1, 0}, q), Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THAT(total_variation_measure(w, {-2, 2}, q), Catch::Matchers::WithinAbs(20.0, 1e-11));

  auto s = make_weight(make_samples(make_interval(0, 1), {0.0, 1.0, 0.5}), false);
  CHECK_FALSE(s.derivative_density);
  CHECK_THROWS_AS(total_variation_measure(s, {0, 1}, q), MissingDerivative);
}

TEST_CASE("piecewise arithmetic keeps values") {
  auto f = make_poly(make_interval(0, 1), {1, 2});
  auto g = make_poly(make_interval(0, 1), {0, 0, 3});
  auto h = add(f, g);
  CHECK_THAT(h.evaluate(0.5), Catch::Matchers::WithinAbs(1 + 1 + 0.75, 1e-14));
  auto hs = scale(h, -2.0);
  CHECK_THAT(hs.evaluate(0.5), Catch::Matchers::WithinAbs(-5.5, 1e-14));

  auto p = make_power(make_interval(0, 1), 2.0, 0.5);
  auto shifted = add_constant(p, 1.0);
  CHECK_THAT(shifted.evaluate(0.25), Catch::Matchers::WithinAbs(2.0, 1e-14));
}

TEST_CASE("monotone local bases stay exact on thin spans") {
  // a ramp of width 1e-9 at x = -2: the local basis keeps values O(1)-correct
  // (the global monomial basis loses ~1e9 of precision here); the remaining
  // wobble is the quantization of the abscissa itself
  Piece thin;
  thin.lo = -2.0;
  thin.hi = -2.0 + 1e-9;
  thin.kind = PieceKind::Poly;
  thin.origin = -2.0;
  thin.coeffs = {0.0, 1e9};  // ramps from 0 to 1
  CHECK_THAT(thin.eval(-2.0 + 0.5e-9), Catch::Matchers::WithinAbs(0.5, 1e-6));
  auto v = piece_integral(thin, thin.lo, thin.hi);
  REQUIRE(v);
  CHECK_THAT(*v, Catch::Matchers::WithinRel(0.5e-9, 1e-6));
}
