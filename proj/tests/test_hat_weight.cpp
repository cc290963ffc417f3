#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "degen1d/counterexample.hpp"
#include "degen1d/hat_weight.hpp"

using namespace degen1d;

namespace {

Weight squared_parabola() {
  return make_weight(make_poly(make_interval(-2, 2), {1, 0, -2, 0, 1}));
}

}  // namespace

TEST_CASE("hat of the squared parabola on the middle component") {
  auto w = squared_parabola();
  const auto dec = detect_intervals(w, {-2, 2});
  const auto hw = build_hat(w, dec);

  // on (-1,1): equals w on the increasing quarter, constant 9/16 in the middle
  for (double x : {-0.95, -0.8, -0.6}) {
    CHECK_THAT(hw.evaluate(x), Catch::Matchers::WithinRel(w(x), 1e-13));
  }
  for (double x : {-0.5, -0.2, 0.0, 0.3, 0.5}) {
    CHECK_THAT(hw.evaluate(x), Catch::Matchers::WithinRel(9.0 / 16.0, 1e-13));
  }
  for (double x : {0.6, 0.8, 0.95}) {
    CHECK_THAT(hw.evaluate(x), Catch::Matchers::WithinRel(w(x), 1e-13));
  }
  CHECK(hw.evaluate(-1.0) == 0.0);
  CHECK(hw.evaluate(1.0) == 0.0);
  // outer components carry running minima toward the interior zeros
  CHECK_THAT(hw.evaluate(-1.8), Catch::Matchers::WithinRel(w(-1.5), 1e-13));
  CHECK_THAT(hw.evaluate(-1.1), Catch::Matchers::WithinRel(w(-1.1), 1e-13));
}

TEST_CASE("hat of the constant weight") {
  auto w = make_weight(make_constant(make_interval(0, 1), 1.0));
  const auto dec = detect_intervals(w, {0, 1});
  const auto hw = build_hat(w, dec);
  for (double x : {0.01, 0.25, 0.5, 0.9, 0.99}) CHECK(hw.evaluate(x) == 1.0);
  const auto rep = check_hat_properties(hw, w);
  CHECK(rep.all_pass);
  CHECK(rep.bounded_reciprocal_case);
  CHECK_THAT(rep.two_sided_constant, Catch::Matchers::WithinAbs(1.0, 1e-14));
}

TEST_CASE("hat matches the block-weight closed form") {
  const double beta = 2.0, gamma = 0.5;
  const int H = 50;
  auto w = counterexample_weight(beta, gamma, H);
  const auto dec = detect_intervals(w, {0, 2});
  REQUIRE(dec.n_w == 1);
  const auto hw = build_hat(w, dec);

  double worst = 0.0;
  int checked = 0;
  const double lo = (1.0 / (H + 1)) * 1.000001, hi = 0.4999;
  for (int k = 0; k < 1000; ++k) {
    const double x = lo * std::pow(hi / lo, static_cast<double>(k) / 999.0);
    bool near_bp = false;
    for (double b : w.f.breakpoints())
      if (std::abs(x - b) < 1e-9) near_bp = true;
    if (near_bp) continue;
    const double got = hw.evaluate(x);
    const double expect = counterexample_hat_closed_form(beta, gamma, x);
    worst = std::max(worst, std::abs(got - expect));
    ++checked;
  }
  CHECK(checked > 900);
  CHECK(worst <= 1e-10);
}

TEST_CASE("hat never exceeds the weight") {
  auto w = squared_parabola();
  const auto dec = detect_intervals(w, {-2, 2});
  const auto hw = build_hat(w, dec);
  for (int k = 1; k < 2000; ++k) {
    const double x = -2.0 + 4.0 * static_cast<double>(k) / 2000.0;
    bool near_bp = std::abs(x + 1) < 1e-9 || std::abs(x - 1) < 1e-9;
    if (near_bp) continue;
    CHECK(hw.evaluate(x) <= w(x) * (1.0 + 1e-12) + 1e-300);
  }
}

TEST_CASE("structural clauses of the auxiliary weight") {
  auto w = squared_parabola();
  const auto dec = detect_intervals(w, {-2, 2});
  const auto hw = build_hat(w, dec);
  const auto rep = check_hat_properties(hw, w);
  CHECK(rep.all_pass);
  // endpoint values vanish exactly where 1/w is unbounded on the half
  CHECK(hw.intervals[1].value_a == 0.0);
  CHECK(hw.intervals[1].value_b == 0.0);
  CHECK(hw.intervals[0].value_a > 0.0);  // w(-2) = 9 keeps 1/w bounded there
  CHECK(rep.global_sup > 0.0);
}

TEST_CASE("nonzero endpoint value iff 1/w stays bounded on the half") {
  // w = x+1 on (0,1): single component, hat(0) = essinf over (0, 1/2) = 1
  auto w = make_weight(make_poly(make_interval(0, 1), {1, 1}));
  const auto dec = detect_intervals(w, {0, 1});
  const auto hw = build_hat(w, dec);
  REQUIRE(dec.n_w == 1);
  CHECK_THAT(hw.intervals[0].value_a, Catch::Matchers::WithinRel(1.0, 1e-14));
  const auto rep = check_hat_properties(hw, w);
  CHECK(rep.all_pass);
}

TEST_CASE("support of the hat weight") {
  auto w = squared_parabola();
  const auto dec = detect_intervals(w, {-2, 2});
  CHECK(support_full_measure(build_hat(w, dec), {-2, 2}));

  auto step = make_weight(make_step(make_interval(0, 1), 0.5, 0.0, 1.0));
  const auto dec2 = detect_intervals(step, {0, 1});
  CHECK_FALSE(support_full_measure(build_hat(step, dec2), {0, 1}));

  auto one = make_weight(make_constant(make_interval(0, 1), 1.0));
  const auto dec3 = detect_intervals(one, {0, 1});
  CHECK(support_full_measure(build_hat(one, dec3), {0, 1}));
}

TEST_CASE("hat is the weight on monotone quarters") {
  // wherever w is increasing on (a_i, q1], the running infimum equals w
  auto w = squared_parabola();
  const auto dec = detect_intervals(w, {-2, 2});
  const auto hw = build_hat(w, dec);
  const auto& mid = hw.intervals[1];
  for (int k = 1; k < 64; ++k) {
    const double x = mid.a + (mid.q1 - mid.a) * static_cast<double>(k) / 64.0;
    CHECK_THAT(hw.evaluate(x), Catch::Matchers::WithinRel(w(x), 1e-12));
  }
}
