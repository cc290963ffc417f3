#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "degen1d/errors.hpp"
#include "degen1d/piecewise.hpp"
#include "degen1d/quadrature.hpp"

namespace degen1d {

/// Nonnegative weight with optional derivative density (w' where w is W^{1,1}
/// on the relevant open set).
struct Weight {
  PiecewiseFunction f;
  bool nonneg = true;
  std::optional<PiecewiseFunction> derivative_density;

  Interval domain() const { return f.domain(); }
  double operator()(double x) const { return f.evaluate(x); }
};

inline Weight make_weight(PiecewiseFunction f, bool derive = true) {
  Weight w;
  // nonnegativity: closed-form minimum per piece
  for (const Piece& p : f.pieces()) {
    const MinMax mm = piece_min_max(p, p.lo, p.hi);
    if (mm.min < -1e-12 * std::max(1.0, std::abs(mm.max)))
      throw BadParameters("weight must be nonnegative");
  }
  if (derive && f.differentiable()) {
    try {
      w.derivative_density = f.derivative();
    } catch (const MissingDerivative&) {
      w.derivative_density.reset();
    }
  }
  w.f = std::move(f);
  return w;
}

/// Essential infimum of w over the open interval I (limit values at piece
/// edges included; isolated-point dips of the representation are immaterial
/// for every kind in the registry).
inline double essential_infimum(const Weight& w, const Interval& I) {
  const Interval d = w.domain();
  if (I.lo < d.lo - 1e-12 || I.hi > d.hi + 1e-12)
    throw OutOfDomain("interval leaves the weight's domain");
  double m = kInf;
  for (const Piece& p : w.f.pieces()) {
    const double l = std::max(p.lo, I.lo), r = std::min(p.hi, I.hi);
    if (r - l <= 0.0) continue;
    m = std::min(m, piece_min_max(p, l, r).min);
  }
  return m;
}

/// ess sup of 1/w over I; +infinity when the essential infimum of w vanishes.
inline double ess_sup_reciprocal(const Weight& w, const Interval& I) {
  const double m = essential_infimum(w, I);
  if (!(m > 0.0)) return kInf;
  return 1.0 / m;
}

/// |Dw|(I) realized as integral |w'| dx; requires the derivative density.
inline double total_variation_measure(const Weight& w, const Interval& I,
                                      const QuadratureConfig& q) {
  if (!w.derivative_density) throw MissingDerivative("weight has no derivative density");
  const PiecewiseFunction& dw = *w.derivative_density;
  const PiecewiseFunction one = make_constant(w.domain(), 1.0);
  if (auto exact = integrate_abs_times_exact(dw, one, I)) return *exact;
  return integrate_abs_times(dw, one, I, q).value;
}

/// Consistency of the stored derivative density: integral w' over each piece
/// must reproduce the increment of w. Returns the worst absolute defect.
inline double derivative_consistency_defect(const Weight& w, const QuadratureConfig& q) {
  if (!w.derivative_density) throw MissingDerivative("weight has no derivative density");
  double worst = 0.0;
  for (const Piece& p : w.f.pieces()) {
    Interval I{p.lo, p.hi};
    IntegralResult r;
    const PiecewiseFunction one = make_constant(w.domain(), 1.0);
    try {
      r = integrate(*w.derivative_density, one, I, q);
    } catch (const NonIntegrable&) {
      continue;  // improper piece; skip
    }
    const double inc = p.limit_at(p.hi) - p.limit_at(p.lo);
    if (std::isfinite(inc)) worst = std::max(worst, std::abs(r.value - inc) - r.error);
  }
  return std::max(0.0, worst);
}

}  // namespace degen1d
