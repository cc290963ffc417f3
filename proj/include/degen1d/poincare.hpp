#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "degen1d/degeneracy.hpp"
#include "degen1d/errors.hpp"
#include "degen1d/hat_weight.hpp"
#include "degen1d/pairing.hpp"
#include "degen1d/piecewise.hpp"
#include "degen1d/quadrature.hpp"
#include "degen1d/weight.hpp"

namespace degen1d {

enum class PointwiseBound { B1, B2, B3, B4 };

/// Both sides of the selected pointwise inequality on component i:
///  B1: |u(x)-u(eta)| hat(eta) <= int_eta^x |u'| w   (a_i < eta <= x <= mid)
///  B2: |u(eta)| hat(eta) <= |u(x)| hat(eta) + int_{a_i}^x |u'| w
///  B3/B4: mirrored on the right half (mid <= x <= eta < b_i).
inline std::pair<double, double> pointwise_bounds(const Weight& w, const HatWeight& hw,
                                                  const PiecewiseFunction& u, std::size_t i,
                                                  PointwiseBound which, double eta, double x,
                                                  const QuadratureConfig& q) {
  if (i >= hw.intervals.size()) throw BadParameters("interval index out of range");
  const HatInterval& hi = hw.intervals[i];
  const bool left_case = (which == PointwiseBound::B1 || which == PointwiseBound::B2);
  if (left_case) {
    if (!(hi.a < eta && eta <= x && x <= hi.mid))
      throw OrderingViolation("need a_i < eta <= x <= mid for b1/b2");
  } else {
    if (!(hi.mid <= x && x <= eta && eta < hi.b))
      throw OrderingViolation("need mid <= x <= eta < b_i for b3/b4");
  }
  const double hat_eta = hw.evaluate(eta);
  auto tv = [&](double lo, double hi_) {
    if (hi_ - lo <= 0.0) return 0.0;
    return pairing_total_variation(w, u, {lo, hi_}, q).value;
  };
  switch (which) {
    case PointwiseBound::B1:
      return {std::abs(u.evaluate(x) - u.evaluate(eta)) * hat_eta, tv(eta, x)};
    case PointwiseBound::B2:
      return {std::abs(u.evaluate(eta)) * hat_eta,
              std::abs(u.evaluate(x)) * hat_eta + tv(hi.a, x)};
    case PointwiseBound::B3:
      return {std::abs(u.evaluate(x) - u.evaluate(eta)) * hat_eta, tv(x, eta)};
    case PointwiseBound::B4:
      return {std::abs(u.evaluate(eta)) * hat_eta,
              std::abs(u.evaluate(x)) * hat_eta + tv(x, hi.b)};
  }
  throw BadParameters("unknown bound");
}

struct PoincareReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double quadrature_error = 0.0;
  std::vector<std::array<double, 3>> per_interval;  // (index, lhs_i, rhs_i)
  bool pass = false;
};

/// The double-weight inequality: sum over components of the interval average
/// of |u - u(mid)| hat against the full weighted gradient mass. A positive
/// clip fraction evaluates both sides on the centrally clipped components
/// (partial sums; the per-point bound still applies there).
inline PoincareReport poincare_gap(const Weight& w, const HatWeight& hw,
                                   const DegeneracyDecomposition& dec,
                                   const PiecewiseFunction& u, const QuadratureConfig& q,
                                   double clip_fraction = 0.0) {
  DomMembership m = dom_w_membership(w, u, dec, hw, q);
  if (!m.verdict) throw NotInDomain("function is not in Dom_w");

  PoincareReport rep;
  const PiecewiseFunction hat = hw.as_piecewise();
  for (std::size_t i = 0; i < hw.intervals.size(); ++i) {
    const HatInterval& hi = hw.intervals[i];
    const double clip = clip_fraction * (hi.b - hi.a);
    const Interval I{hi.a + clip, hi.b - clip};
    const double umid = u.evaluate(hi.mid);
    const PiecewiseFunction shifted = add_constant(u, -umid);
    double lhs_i;
    double err_i = 0.0;
    if (auto exact = integrate_abs_times_exact(shifted, hat, I)) {
      lhs_i = *exact / I.length();
    } else {
      ProductIntegrand pi({{&shifted, true, false}, {&hat, false, false}}, I);
      const IntegralResult r = pi.integrate(q);
      lhs_i = r.value / I.length();
      err_i += r.error / I.length();
    }
    const IntegralResult tv = pairing_total_variation(w, u, I, q);
    rep.per_interval.push_back({static_cast<double>(i), lhs_i, tv.value});
    rep.lhs += lhs_i;
    rep.rhs += tv.value;
    rep.quadrature_error += err_i + tv.error;
  }
  rep.margin = rep.rhs - rep.lhs;
  rep.pass = rep.margin >= -(rep.quadrature_error + 1e-10);
  return rep;
}

struct BatchReport {
  std::vector<PoincareReport> reports;
  std::vector<std::size_t> failures;
  bool all_pass = true;
};

inline BatchReport batch_verify(const Weight& w, const HatWeight& hw,
                                const DegeneracyDecomposition& dec,
                                const std::vector<PiecewiseFunction>& corpus,
                                const QuadratureConfig& q) {
  BatchReport br;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    br.reports.push_back(poincare_gap(w, hw, dec, corpus[k], q));
    if (!br.reports.back().pass) {
      br.failures.push_back(k);
      br.all_pass = false;
    }
  }
  return br;
}

}  // namespace degen1d
