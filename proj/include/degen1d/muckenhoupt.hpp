#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "degen1d/errors.hpp"
#include "degen1d/piecewise.hpp"
#include "degen1d/quadrature.hpp"
#include "degen1d/weight.hpp"

namespace degen1d {

struct A1Report {
  double best_c = 1.0;
  std::optional<std::pair<double, double>> violating_ball;  // (x, r) attaining best_c
  int centers = 0;
  int radii = 0;
  std::vector<std::array<double, 3>> samples;  // (x, r, ratio) rows
};

namespace detail {

inline double ball_average(const Weight& w, double x, double r, const Interval& clip,
                           const QuadratureConfig& q) {
  const double lo = std::max(x - r, clip.lo);
  const double hi = std::min(x + r, clip.hi);
  if (!(hi > lo)) throw BadParameters("empty ball");
  const PiecewiseFunction one = make_constant(w.domain(), 1.0);
  double v;
  if (auto exact = integrate_exact(w.f, one, {lo, hi}))
    v = *exact;
  else
    v = integrate(w.f, one, {lo, hi}, q).value;
  return v / (hi - lo);
}

inline std::vector<double> log_spaced_radii(double r_min, double r_max, int per_decade) {
  std::vector<double> rs;
  const double decades = std::log10(r_max / r_min);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * per_decade)));
  for (int i = 0; i <= n; ++i)
    rs.push_back(r_min * std::pow(r_max / r_min, static_cast<double>(i) / n));
  return rs;
}

}  // namespace detail

/// Empirical A1 constant: the infimum of w(x) / ball-average over a sampled
/// center x radius family with balls inside Omega0. Reports the attaining
/// ball; a vanishing trend under refinement signals A1 failure.
inline A1Report a1_constant(const Weight& w, const Interval& omega0,
                            const std::vector<double>& radii, int grid,
                            const QuadratureConfig& q, bool keep_samples = false) {
  // positivity precondition
  for (int k = 0; k <= grid; ++k) {
    const double x = omega0.lo + omega0.length() * static_cast<double>(k) / grid;
    double v;
    try {
      v = w.f.evaluate(x);
    } catch (const OutOfDomain&) {
      continue;
    }
    if (!(v > 0.0)) throw NotPositive("weight must be strictly positive on Omega0");
  }

  A1Report rep;
  rep.best_c = kInf;
  rep.centers = grid;
  rep.radii = static_cast<int>(radii.size());
  for (int k = 1; k < grid; ++k) {
    const double x = omega0.lo + omega0.length() * static_cast<double>(k) / grid;
    const double wx = w.f.evaluate(x);
    for (double r : radii) {
      if (x - r < omega0.lo || x + r > omega0.hi) continue;  // balls inside Omega0 only
      const double avg = detail::ball_average(w, x, r, omega0, q);
      if (!(avg > 0.0)) continue;
      const double ratio = wx / avg;
      if (keep_samples) rep.samples.push_back({x, r, ratio});
      if (ratio < rep.best_c) {
        rep.best_c = ratio;
        rep.violating_ball = {x, r};
      }
    }
  }
  if (!std::isfinite(rep.best_c)) rep.best_c = 1.0;
  rep.best_c = std::min(rep.best_c, 1.0);  // r -> 0 attains 1 at Lebesgue points
  return rep;
}

inline A1Report a1_constant(const Weight& w, const Interval& omega0, const QuadratureConfig& q,
                            int per_decade = 20, int grid = 64, bool keep_samples = false) {
  const double len = omega0.length();
  return a1_constant(w, omega0, detail::log_spaced_radii(1e-3 * len, 0.5 * len, per_decade),
                     grid, q, keep_samples);
}

/// Centered maximal value sup_r averages over balls clipped to Omega0.
inline double maximal_weight(const Weight& w, double x, const std::vector<double>& radii,
                             const Interval& omega0, const QuadratureConfig& q) {
  if (!(x > omega0.lo && x < omega0.hi)) throw BadParameters("center must be interior");
  double best = -kInf;
  for (double r : radii) {
    if (!(r > 0.0)) continue;
    best = std::max(best, detail::ball_average(w, x, r, omega0, q));
  }
  return best;
}

/// Grid realization of the largest lsc minorant: at every node the value is
/// min(w(x), liminf of w at x), the liminf being the smaller one-sided limit.
inline double lsc_value_at(const Weight& w, double x) {
  const SideLimits s = w.f.one_sided_limits(x);
  double v = kInf;
  if (s.left) v = std::min(v, *s.left);
  if (s.right) v = std::min(v, *s.right);
  try {
    const Interval d = w.domain();
    if (x > d.lo && x < d.hi) v = std::min(v, w.f.evaluate(x));
  } catch (const OutOfDomain&) {
  }
  return v;
}

inline PiecewiseFunction lsc_envelope(const Weight& w, int grid) {
  const Interval d = w.domain();
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(grid) + 1);
  for (int k = 0; k <= grid; ++k) {
    const double x = d.lo + d.length() * static_cast<double>(k) / grid;
    values.push_back(lsc_value_at(w, x));
  }
  return make_samples(d, std::move(values));
}

/// Weighted total variation: integral w |u'| dx plus jump terms weighted by
/// the lsc envelope value at each jump.
inline double baldi_tv(const Weight& w, const PiecewiseFunction& u, const Interval& omega,
                       const QuadratureConfig& q) {
  const PiecewiseFunction du = u.derivative();
  double tv;
  if (auto exact = integrate_abs_times_exact(du, w.f, omega)) {
    tv = *exact;
  } else {
    tv = integrate_abs_times(du, w.f, omega, q).value;
  }
  for (double b : u.interior_breakpoints()) {
    if (!(b > omega.lo && b < omega.hi)) continue;
    const SideLimits s = u.one_sided_limits(b);
    if (!s.left || !s.right) continue;
    const double jump = std::abs(*s.right - *s.left);
    if (jump > 0.0) tv += lsc_value_at(w, b) * jump;
  }
  return tv;
}

struct GrowthReport {
  double best_c = 0.0;  // smallest admissible constant over the family
  bool pass = false;    // finite and stable under refinement
  double refined_c = 0.0;
};

/// Local growth condition: mass(B_r)/mass(B_s) <= c (r/s)^{q/(q-1)} over
/// nested ball pairs; reports the smallest admissible c and whether it is
/// stable when the family is refined toward smaller ratios.
inline GrowthReport local_growth_check(const Weight& w, double q_exponent,
                                       const std::vector<std::array<double, 3>>& ball_family,
                                       const QuadratureConfig& q) {
  if (!(q_exponent > 1.0)) throw BadParameters("need q > 1");
  const double expo = q_exponent / (q_exponent - 1.0);
  const PiecewiseFunction one = make_constant(w.domain(), 1.0);
  auto required_c = [&](double x, double r, double s) {
    const double mr = integrate(w.f, one, {x - r, x + r}, q).value;
    const double ms = integrate(w.f, one, {x - s, x + s}, q).value;
    if (!(ms > 0.0)) return kInf;
    return (mr / ms) / std::pow(r / s, expo);
  };
  GrowthReport rep;
  for (const auto& b : ball_family) rep.best_c = std::max(rep.best_c, required_c(b[0], b[1], b[2]));
  // refinement: halve the inner radii
  for (const auto& b : ball_family)
    rep.refined_c = std::max(rep.refined_c, required_c(b[0], 0.5 * b[1], b[2]));
  rep.pass = std::isfinite(rep.best_c) && rep.refined_c <= 1.5 * rep.best_c;
  return rep;
}

struct BaldiPoincareReport {
  double lhs = 0.0;         // (avg |u-u_B|^q w)^{1/q}
  double rhs_scaled = 0.0;  // r * TV(u;w)(B) / |B|
  double raw_tv = 0.0;      // TV(u;w)(B)
  double ratio = 0.0;       // empirical C1 estimate
};

inline BaldiPoincareReport baldi_poincare_check(const Weight& w, const PiecewiseFunction& u,
                                                double x, double r, double q_exponent,
                                                const QuadratureConfig& q) {
  const Interval B{x - r, x + r};
  const Interval d = w.domain();
  const Interval Bc{std::max(B.lo, d.lo), std::min(B.hi, d.hi)};
  const PiecewiseFunction one = make_constant(d, 1.0);
  const double ub = integrate(u, one, Bc, q).value / Bc.length();
  auto fn = [&](double xx) {
    return std::pow(std::abs(u.evaluate(xx) - ub), q_exponent) * w.f.evaluate(xx);
  };
  auto splits = merged_breakpoints({&u, &w.f}, Bc);
  const double num = integrate_callable(fn, Bc.lo, Bc.hi, splits, q).value;
  BaldiPoincareReport rep;
  rep.lhs = std::pow(num / Bc.length(), 1.0 / q_exponent);
  rep.raw_tv = baldi_tv(w, u, Bc, q);
  rep.rhs_scaled = r * rep.raw_tv / Bc.length();
  rep.ratio = (rep.rhs_scaled > 0.0) ? rep.lhs / rep.rhs_scaled : 0.0;
  return rep;
}

}  // namespace degen1d
