#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "degen1d/degeneracy.hpp"
#include "degen1d/errors.hpp"
#include "degen1d/hat_weight.hpp"
#include "degen1d/piecewise.hpp"
#include "degen1d/quadrature.hpp"
#include "degen1d/weight.hpp"

namespace degen1d {

/// Precise representative u^{1/2} at a point: midpoint of the one-sided
/// limits, zero when they are -inf/+inf (the Z_u convention).
struct PreciseValue {
  double x = 0.0;
  double u_minus = 0.0;  // approximate liminf (min of side limits)
  double u_plus = 0.0;   // approximate limsup
  double u_half = 0.0;
};

inline PreciseValue precise_representative(const PiecewiseFunction& u, double x) {
  const SideLimits s = u.one_sided_limits(x);
  PreciseValue pv;
  pv.x = x;
  double lo, hi;
  if (s.left && s.right) {
    lo = std::min(*s.left, *s.right);
    hi = std::max(*s.left, *s.right);
  } else if (s.left) {
    lo = hi = *s.left;
  } else if (s.right) {
    lo = hi = *s.right;
  } else {
    throw OutOfDomain("no one-sided limits at point");
  }
  pv.u_minus = lo;
  pv.u_plus = hi;
  if (lo == -kInf && hi == kInf) {
    pv.u_half = 0.0;  // Z_u
  } else if (!std::isfinite(lo) || !std::isfinite(hi)) {
    pv.u_half = std::isfinite(lo) ? hi : lo;
  } else {
    pv.u_half = 0.5 * (lo + hi);
  }
  return pv;
}

struct PairingReport {
  double test_value = 0.0;        // <(w,Du), phi>
  double tv = 0.0;                // |(w,Du)| over the reported interval
  bool tv_finite = true;
  double quadrature_error = 0.0;
};

namespace detail {

inline void require_compact_support(const PiecewiseFunction& phi, const Interval& omega) {
  const Interval d = phi.domain();
  const double tol = 1e-10;
  auto near_zero = [&](std::optional<double> v) { return v && std::abs(*v) <= tol; };
  if (d.lo > omega.lo && d.hi < omega.hi) return;  // zero-extended inside
  const SideLimits lo = phi.one_sided_limits(d.lo);
  const SideLimits hi = phi.one_sided_limits(d.hi);
  if (!near_zero(lo.right) || !near_zero(hi.left))
    throw BadParameters("test function must be compactly supported inside the domain");
}

}  // namespace detail

/// Distributional pairing <(w,Du), phi> = -int u^{1/2} phi w' dx
///                                        -int u phi' w dx.
/// phi is zero-extended outside its own domain. u^{1/2} agrees a.e. with u for
/// the representable classes, so integration is piece-aware with u directly.
inline IntegralResult pairing_apply(const Weight& w, const PiecewiseFunction& u,
                                    const PiecewiseFunction& phi, const QuadratureConfig& q) {
  if (!w.derivative_density) throw MissingDerivative("pairing needs w' (hypothesis H3)");
  detail::require_compact_support(phi, w.domain());
  const PiecewiseFunction dphi = phi.derivative();
  const PiecewiseFunction& dw = *w.derivative_density;
  const Interval support = intersect(phi.domain(), w.domain());

  ProductIntegrand first({{&u, false, false}, {&phi, false, true}, {&dw, false, false}},
                         support);
  ProductIntegrand second({{&u, false, false}, {&dphi, false, true}, {&w.f, false, false}},
                          support);
  const IntegralResult a = first.integrate(q);
  const IntegralResult b = second.integrate(q);
  return {-a.value - b.value, a.error + b.error};
}

/// Reference route for smooth data: the measure expression int u' w phi dx.
inline IntegralResult pairing_direct(const Weight& w, const PiecewiseFunction& u,
                                     const PiecewiseFunction& phi, const QuadratureConfig& q) {
  const PiecewiseFunction du = u.derivative();
  const Interval support = intersect(phi.domain(), w.domain());
  ProductIntegrand pi({{&du, false, false}, {&w.f, false, false}, {&phi, false, true}}, support);
  return pi.integrate(q);
}

/// |(w,Du)|(I) = int_I |u'| w dx for u in W^{1,1}_loc representations.
/// Exact when the piece products stay in the closed-form registry.
inline IntegralResult pairing_total_variation(const Weight& w, const PiecewiseFunction& u,
                                              const Interval& I, const QuadratureConfig& q) {
  const PiecewiseFunction du = u.derivative();
  if (auto exact = integrate_abs_times_exact(du, w.f, I)) {
    if (std::isfinite(*exact)) return {*exact, 0.0};
    throw NonIntegrable("total variation integral diverges");
  }
  return integrate_abs_times(du, w.f, I, q);
}

/// Membership in Dom_w: locally W^{1,1} on the decomposition and a locally
/// finite pairing measure there. The Banach norm ||u||_{L1(hat)} + |(w,Du)|(I)
/// is attached only when both global integrals converge.
struct DomMembership {
  bool in_w11_loc = false;
  bool pairing_tv_finite = false;
  bool verdict = false;
  std::optional<double> norm;
  double l1_hat = 0.0;
  std::optional<double> global_tv;
};

inline DomMembership dom_w_membership(const Weight& w, const PiecewiseFunction& u,
                                      const DegeneracyDecomposition& dec, const HatWeight& hw,
                                      const QuadratureConfig& q) {
  DomMembership m;

  // W^{1,1}_loc: no jumps or infinite one-sided limits at interior points of
  // any component; derivative exists by representation.
  bool w11 = u.differentiable();
  for (const auto& I : dec.intervals) {
    for (double b : u.interior_breakpoints()) {
      if (!(b > I.lo && b < I.hi)) continue;
      const SideLimits s = u.one_sided_limits(b);
      if (!s.left || !s.right || !std::isfinite(*s.left) || !std::isfinite(*s.right)) {
        w11 = false;
        break;
      }
      const double scale = std::max({1.0, std::abs(*s.left), std::abs(*s.right)});
      if (std::abs(*s.left - *s.right) > 1e-10 * scale) {
        w11 = false;
        break;
      }
    }
    if (!w11) break;
  }
  m.in_w11_loc = w11;

  // local Radon property: finite variation on compacts well inside components
  bool local_tv = w11;
  if (w11) {
    for (const auto& I : dec.intervals) {
      const double pad = 0.01 * I.length();
      try {
        (void)pairing_total_variation(w, u, {I.lo + pad, I.hi - pad}, q);
      } catch (const NonIntegrable&) {
        local_tv = false;
        break;
      }
    }
  }
  m.pairing_tv_finite = local_tv;
  m.verdict = m.in_w11_loc && m.pairing_tv_finite;
  if (!m.verdict) return m;

  // norm, when the global quantities exist
  const PiecewiseFunction hat = hw.as_piecewise();
  bool finite = true;
  double l1 = 0.0, tv = 0.0;
  double err = 0.0;
  for (const auto& I : dec.intervals) {
    try {
      if (auto exact = integrate_abs_times_exact(u, hat, I)) {
        if (!std::isfinite(*exact)) throw NonIntegrable("l1 hat diverges");
        l1 += *exact;
      } else {
        ProductIntegrand pi({{&u, true, false}, {&hat, false, false}}, I);
        const IntegralResult r = pi.integrate(q);
        l1 += r.value;
        err += r.error;
      }
      const IntegralResult r2 = pairing_total_variation(w, u, I, q);
      tv += r2.value;
      err += r2.error;
    } catch (const NonIntegrable&) {
      finite = false;
      break;
    }
  }
  if (finite) {
    m.l1_hat = l1;
    m.global_tv = tv;
    m.norm = l1 + tv;
  }
  return m;
}

}  // namespace degen1d
