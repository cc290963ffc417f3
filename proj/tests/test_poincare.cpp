#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "degen1d/corpus.hpp"
#include "degen1d/counterexample.hpp"
#include "degen1d/poincare.hpp"

using namespace degen1d;

namespace {

struct Setup {
  Weight w;
  DegeneracyDecomposition dec;
  HatWeight hw;
};

Setup make_setup(Weight w) {
  auto dec = detect_intervals(w, w.domain());
  auto hw = build_hat(w, dec);
  return {std::move(w), std::move(dec), std::move(hw)};
}

}  // namespace

TEST_CASE("pointwise bounds on the flat weight") {
  QuadratureConfig q;
  auto s = make_setup(make_weight(make_constant(make_interval(0, 1), 1.0)));

  auto c = make_constant(make_interval(0, 1), 4.0);
  auto [l0, r0] = pointwise_bounds(s.w, s.hw, c, 0, PointwiseBound::B1, 0.1, 0.4, q);
  CHECK(l0 == 0.0);
  CHECK_THAT(r0, Catch::Matchers::WithinAbs(0.0, 1e-14));

  auto u = make_poly(make_interval(0, 1), {0, 1});
  auto [l1, r1] = pointwise_bounds(s.w, s.hw, u, 0, PointwiseBound::B1, 0.1, 0.5, q);
  CHECK_THAT(l1, Catch::Matchers::WithinAbs(0.4, 1e-13));
  CHECK_THAT(r1, Catch::Matchers::WithinAbs(0.4, 1e-13));

  CHECK_THROWS_AS(pointwise_bounds(s.w, s.hw, u, 0, PointwiseBound::B1, 0.6, 0.5, q),
                  OrderingViolation);
  CHECK_THROWS_AS(pointwise_bounds(s.w, s.hw, u, 0, PointwiseBound::B3, 0.9, 0.95, q),
                  OrderingViolation);
}

TEST_CASE("pointwise bound on the degenerate component") {
  QuadratureConfig q;
  auto s = make_setup(make_weight(make_poly(make_interval(-2, 2), {1, 0, -2, 0, 1})));
  auto u = make_poly(make_interval(-2, 2), {0, 1});
  auto [lhs, rhs] = pointwise_bounds(s.w, s.hw, u, 1, PointwiseBound::B1, -0.9, 0.0, q);
  // lhs = 0.9 * w(-0.9) = 0.9 * 0.0361; rhs = antiderivative of w over (-0.9, 0)
  CHECK_THAT(lhs, Catch::Matchers::WithinRel(0.9 * 0.0361, 1e-12));
  const double hand = 0.9 - 2.0 * std::pow(0.9, 3) / 3.0 + std::pow(0.9, 5) / 5.0;
  CHECK_THAT(rhs, Catch::Matchers::WithinRel(hand, 1e-10));
  CHECK(lhs <= rhs);
}

TEST_CASE("b2 chain inequality sampled over admissible pairs") {
  QuadratureConfig q;
  auto s = make_setup(make_weight(make_poly(make_interval(-2, 2), {1, 0, -2, 0, 1})));
  auto u = make_poly(make_interval(-2, 2), {0.4, 1.0, -0.3, 0.2});
  const auto& hi = s.hw.intervals[1];
  for (int a = 1; a <= 5; ++a) {
    for (int b = a; b <= 5; ++b) {
      const double eta = hi.a + (hi.mid - hi.a) * a / 6.0;
      const double x = hi.a + (hi.mid - hi.a) * b / 6.0;
      auto [lhs, rhs] = pointwise_bounds(s.w, s.hw, u, 1, PointwiseBound::B2, eta, x, q);
      CHECK(lhs <= rhs + 1e-10);
    }
  }
}

TEST_CASE("sup bound of u hat on the right half") {
  QuadratureConfig q;
  auto s = make_setup(make_weight(make_poly(make_interval(-2, 2), {1, 0, -2, 0, 1})));
  auto u = make_poly(make_interval(-2, 2), {0.4, 1.0, -0.3});
  const auto& hi = s.hw.intervals[1];
  const double cap = std::abs(u.evaluate(hi.mid)) * hi.sup_bound +
                     pairing_total_variation(s.w, u, {hi.mid, hi.b}, q).value;
  for (int k = 0; k < 40; ++k) {
    const double eta = hi.mid + (hi.b - hi.mid) * (k + 0.5) / 41.0;
    CHECK(std::abs(u.evaluate(eta)) * s.hw.evaluate(eta) <= cap + 1e-10);
  }
}

TEST_CASE("poincare gap closed forms") {
  QuadratureConfig q;
  auto s = make_setup(make_weight(make_constant(make_interval(0, 1), 1.0)));

  auto c = make_constant(make_interval(0, 1), 2.0);
  auto rep = poincare_gap(s.w, s.hw, s.dec, c, q);
  CHECK(rep.lhs == 0.0);
  CHECK(rep.rhs == 0.0);
  CHECK(rep.pass);

  auto u = make_poly(make_interval(0, 1), {0, 1});
  rep = poincare_gap(s.w, s.hw, s.dec, u, q);
  CHECK_THAT(rep.lhs, Catch::Matchers::WithinAbs(0.25, 1e-12));
  CHECK_THAT(rep.rhs, Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THAT(rep.margin, Catch::Matchers::WithinAbs(0.75, 1e-11));
}

TEST_CASE("poincare gap on the degenerate weight at two panel counts") {
  auto s = make_setup(make_weight(make_poly(make_interval(-2, 2), {1, 0, -2, 0, 1})));
  auto u = make_poly(make_interval(-2, 2), {0, 1});
  QuadratureConfig q1;
  q1.panels = 16;
  QuadratureConfig q2;
  q2.panels = 32;
  const auto r1 = poincare_gap(s.w, s.hw, s.dec, u, q1);
  const auto r2 = poincare_gap(s.w, s.hw, s.dec, u, q2);
  CHECK(r1.pass);
  CHECK(r2.pass);
  CHECK(r1.margin > 0.0);
  CHECK_THAT(r1.lhs, Catch::Matchers::WithinAbs(r2.lhs, 1e-8));
  CHECK_THAT(r1.rhs, Catch::Matchers::WithinAbs(r2.rhs, 1e-8));
}

TEST_CASE("membership is enforced") {
  QuadratureConfig q;
  auto s = make_setup(make_weight(make_poly(make_interval(-2, 2), {1, 0, -2, 0, 1})));
  auto heavy = make_step(make_interval(-2, 2), 0.25, 0.0, 1.0);
  CHECK_THROWS_AS(poincare_gap(s.w, s.hw, s.dec, heavy, q), NotInDomain);
}

TEST_CASE("batch over a random corpus") {
  QuadratureConfig q;
  auto s = make_setup(make_weight(make_poly(make_interval(-2, 2), {1, 0, -2, 0, 1})));
  const auto corpus = random_corpus(42, {-2, 2}, 25);
  const auto br = batch_verify(s.w, s.hw, s.dec, corpus, q);
  CHECK(br.all_pass);
  CHECK(br.failures.empty());

  std::vector<PiecewiseFunction> constants;
  for (double c : {-1.0, 0.0, 2.5})
    constants.push_back(make_constant(make_interval(-2, 2), c));
  const auto bc = batch_verify(s.w, s.hw, s.dec, constants, q);
  for (const auto& r : bc.reports) {
    CHECK(r.lhs == 0.0);
    CHECK(r.rhs == 0.0);
  }
}

TEST_CASE("block counterexample with the singular member, clipped partial sums") {
  QuadratureConfig q;
  auto s = make_setup(counterexample_weight(2.0, 0.5, 20));
  auto u3 = make_power(make_interval(0, 2), 1.0, -3.0);
  const auto m = dom_w_membership(s.w, u3, s.dec, s.hw, q);
  CHECK(m.verdict);
  const auto rep = poincare_gap(s.w, s.hw, s.dec, u3, q, 1e-3);
  CHECK(rep.pass);
  CHECK(rep.margin >= 0.0);
}
