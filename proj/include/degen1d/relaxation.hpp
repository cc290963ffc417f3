#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "degen1d/counterexample.hpp"
#include "degen1d/degeneracy.hpp"
#include "degen1d/errors.hpp"
#include "degen1d/hat_weight.hpp"
#include "degen1d/pairing.hpp"
#include "degen1d/piecewise.hpp"
#include "degen1d/poincare.hpp"
#include "degen1d/quadrature.hpp"
#include "degen1d/weight.hpp"

namespace degen1d {

struct RelaxedValue {
  bool finite = false;
  std::optional<double> value;
};

/// Relaxed functional: |(w,Du)|(I_{Omega,w}) on Dom_w, +infinity otherwise.
/// Requires the finitely-degenerate hypotheses (exact decomposition, w').
inline RelaxedValue relaxed_functional(const Weight& w, const PiecewiseFunction& u,
                                       const DegeneracyDecomposition& dec, const HatWeight& hw,
                                       const QuadratureConfig& q) {
  if (dec.truncated) throw HypothesisViolated("decomposition truncated: N_w not finite");
  if (!w.derivative_density) throw HypothesisViolated("weight lacks derivative density");
  const DomMembership m = dom_w_membership(w, u, dec, hw, q);
  RelaxedValue rv;
  if (!m.verdict) return rv;
  double total = 0.0;
  try {
    for (const auto& I : dec.intervals) total += pairing_total_variation(w, u, I, q).value;
  } catch (const NonIntegrable&) {
    return rv;  // pairing mass diverges toward a component endpoint
  }
  rv.finite = true;
  rv.value = total;
  return rv;
}

// ---------------------------------------------------------------------------
// helpers

namespace detail {

inline PiecewiseFunction slice_function(const PiecewiseFunction& f, double lo, double hi) {
  std::vector<Piece> out;
  for (const Piece& p : f.pieces()) {
    const double l = std::max(p.lo, lo), r = std::min(p.hi, hi);
    if (r - l <= 0.0) continue;
    out.push_back(slice(p, l, r));
  }
  if (out.empty()) throw BadParameters("slice produced no pieces");
  out.front().lo = lo;
  out.back().hi = hi;
  return PiecewiseFunction(std::move(out));
}

// product of two piecewise functions on [lo,hi]; poly*poly stays exact
inline PiecewiseFunction product_function(const PiecewiseFunction& f,
                                          const PiecewiseFunction& g, double lo, double hi) {
  auto xs = merged_breakpoints({&f, &g}, {lo, hi});
  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double l = xs[i], r = xs[i + 1];
    const double m = 0.5 * (l + r);
    const Piece& a = f.piece_at(m);
    const Piece& b = g.piece_at(m);
    if (a.kind == PieceKind::Poly && b.kind == PieceKind::Poly) {
      Piece pr;
      pr.lo = l;
      pr.hi = r;
      pr.kind = PieceKind::Poly;
      pr.origin = l;
      const auto pa =
          poly_to_origin(a.coeffs.empty() ? std::vector<double>{0.0} : a.coeffs, a.origin, l);
      const auto pb =
          poly_to_origin(b.coeffs.empty() ? std::vector<double>{0.0} : b.coeffs, b.origin, l);
      pr.coeffs = poly_mul(pa, pb);
      out.push_back(pr);
    } else {
      Piece pr;
      pr.lo = l;
      pr.hi = r;
      pr.kind = PieceKind::Samples;
      const int n = 65;
      pr.samples.resize(n);
      for (int k = 0; k < n; ++k) {
        const double x = l + (r - l) * static_cast<double>(k) / static_cast<double>(n - 1);
        pr.samples[static_cast<std::size_t>(k)] = a.limit_at(x) * b.limit_at(x);
      }
      out.push_back(pr);
    }
  }
  return PiecewiseFunction(std::move(out));
}

// expand samples pieces into per-cell linear polynomials
inline std::vector<Piece> as_poly_cells(const Piece& p) {
  if (p.kind != PieceKind::Samples) return {p};
  std::vector<Piece> out;
  const std::size_t n = p.samples.size();
  const double dx = (p.hi - p.lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Piece c;
    c.lo = p.lo + dx * static_cast<double>(i);
    c.hi = (i + 2 == n) ? p.hi : p.lo + dx * static_cast<double>(i + 1);
    c.kind = PieceKind::Poly;
    c.origin = c.lo;
    c.coeffs = {p.samples[i], (p.samples[i + 1] - p.samples[i]) / dx};
    out.push_back(c);
  }
  return out;
}

// antiderivative of a piece anchored so F(anchor_x) = anchor_val
inline Piece piece_antiderivative(const Piece& p, double anchor_x, double anchor_val) {
  switch (p.kind) {
    case PieceKind::Poly: {
      Piece f = p;
      f.coeffs = poly_antiderivative(p.coeffs);
      f.coeffs[0] += anchor_val - poly_eval(f.coeffs, anchor_x - f.origin);
      return f;
    }
    case PieceKind::Power: {
      if (p.offset != 0.0 || p.exponent == -1.0)
        throw BadParameters("unsupported power antiderivative");
      Piece f = p;
      f.scale = static_cast<double>(p.sign) * p.scale / (p.exponent + 1.0);
      f.exponent = p.exponent + 1.0;
      f.offset = 0.0;
      f.offset = anchor_val - f.eval(anchor_x);
      return f;
    }
    case PieceKind::PolySine: {
      Piece f = p;
      f.coeffs = poly_antiderivative(p.coeffs);
      if (p.freq != 0.0) {
        f.amp = -p.amp / p.freq;
        f.phase = p.phase + std::asin(1.0);
      } else {
        f.amp = 0.0;
        f.coeffs[0] += p.amp * std::sin(p.phase);
      }
      f.coeffs[0] += anchor_val - f.eval(anchor_x);
      return f;
    }
    default:
      throw BadParameters("no closed-form antiderivative for piece kind");
  }
}

struct L1Diff {
  double value = 0.0;
  double error = 0.0;
  bool padded = false;
};

// integral |f-g| wgt over I; exact when representable, a fixed-padding value
// (flagged) when the improper ladder diverges or kinds are not subtractable.
inline L1Diff l1_weighted_diff(const PiecewiseFunction& f, const PiecewiseFunction& g,
                               const PiecewiseFunction& wgt, const Interval& I,
                               const QuadratureConfig& q) {
  L1Diff out;
  std::optional<PiecewiseFunction> diff;
  try {
    diff = add(f, scale(g, -1.0));
  } catch (const BadParameters&) {
    diff.reset();
  }
  if (diff) {
    if (auto exact = integrate_abs_times_exact(*diff, wgt, I)) {
      if (std::isfinite(*exact)) {
        out.value = *exact;
        return out;
      }
    }
    try {
      ProductIntegrand pi({{&*diff, true, false}, {&wgt, false, false}}, I);
      const IntegralResult r = pi.integrate(q);
      out.value = r.value;
      out.error = r.error;
      return out;
    } catch (const NonIntegrable&) {
      // fall through to the padded route
    }
  }
  const double pad = q.singular_endpoint_padding;
  const Interval J{I.lo + pad, I.hi - pad};
  auto splits = merged_breakpoints({&f, &g, &wgt}, J);
  auto fn = [&](double x) { return std::abs(f.evaluate(x) - g.evaluate(x)) * wgt.evaluate(x); };
  const IntegralResult r = integrate_callable(fn, J.lo, J.hi, splits, q);
  out.value = r.value;
  out.error = r.error;
  out.padded = true;
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// bar weight

/// Cumulative-integral object of the auxiliary weight on one component. The
/// recovery construction uses only the outer-quarter branches; their signed
/// values follow the convention that both branches are <= 0 away from the
/// midpoint and |bar| grows toward the endpoints, with bar' = -hat a.e. on
/// the right branch.
struct BarWeight {
  double a = 0, b = 0, q1 = 0, mid = 0, q3 = 0;
  PiecewiseFunction cumulative;  // C(x) = integral_a^x hat, exact pieces
  double c_mid = 0.0;

  double signed_left(double x) const { return cumulative.evaluate(x) - c_mid; }
  double signed_right(double x) const { return c_mid - cumulative.evaluate(x); }
  double abs_value(double x) const { return std::abs(cumulative.evaluate(x) - c_mid); }
};

inline BarWeight bar_weight(const HatWeight& hw, std::size_t i) {
  if (i >= hw.intervals.size()) throw BadParameters("interval index out of range");
  const HatInterval& hi = hw.intervals[i];
  BarWeight bw;
  bw.a = hi.a;
  bw.b = hi.b;
  bw.q1 = hi.q1;
  bw.mid = hi.mid;
  bw.q3 = hi.q3;

  // assemble hat pieces on [a,b] and antiderive with running constants
  std::vector<Piece> hat_pieces;
  for (const Piece& p : hi.left_profile.pieces()) hat_pieces.push_back(p);
  {
    Piece m;
    m.lo = hi.q1;
    m.hi = hi.q3;
    m.kind = PieceKind::Poly;
    m.coeffs = {hi.middle_value};
    hat_pieces.push_back(m);
  }
  for (const Piece& p : hi.right_profile.pieces()) hat_pieces.push_back(p);

  std::vector<Piece> cum;
  double carry = 0.0;
  for (const Piece& p : hat_pieces) {
    for (const Piece& cell : detail::as_poly_cells(p)) {
      Piece f = detail::piece_antiderivative(cell, cell.lo, carry);
      carry = f.eval(f.hi);
      cum.push_back(std::move(f));
    }
  }
  bw.cumulative = PiecewiseFunction(std::move(cum));
  bw.c_mid = bw.cumulative.evaluate(bw.mid);
  return bw;
}

// ---------------------------------------------------------------------------
// mollified derivative

struct Mollified {
  std::vector<PiecewiseFunction> per_interval;  // v_h restricted to each component
  double error = 0.0;                           // ||v_h - u'||_{L1(I,w)}
  double target = 0.0;
  bool schedule_met = false;
  bool padded = false;
};

/// Continuous approximation of u' with compact support in each component:
/// u' damped by linear ramps near the endpoints and bridged across its jump
/// points. Widths start at (b_i-a_i)/(4h) and halve until the w-weighted
/// error meets the schedule; the tightened floor keeps recovery energies
/// within the lower-semicontinuity tolerance.
inline Mollified mollify_derivative(const Weight& w, const PiecewiseFunction& u,
                                    const DegeneracyDecomposition& dec, int h,
                                    const QuadratureConfig& q) {
  if (h < 1) throw BadParameters("h >= 1 required");
  const PiecewiseFunction du = u.derivative();

  Mollified mol;
  // error target: the 1/h schedule, tightened when the total mass is finite
  double tv_total = 0.0;
  bool tv_finite = true;
  try {
    for (const auto& I : dec.intervals) tv_total += pairing_total_variation(w, u, I, q).value;
  } catch (const NonIntegrable&) {
    tv_finite = false;
  }
  mol.target = tv_finite
                   ? std::min(1.0 / static_cast<double>(h),
                              8e-9 * (1.0 + tv_total) * (8.0 / static_cast<double>(h)))
                   : 1.0 / static_cast<double>(h);

  auto build_interval = [&](const Interval& I, double delta, double win) -> PiecewiseFunction {
    const double a = I.lo, b = I.hi;
    std::vector<Piece> out;
    // jump points of u' strictly inside the plateau
    std::vector<double> kinks;
    for (double p : du.interior_breakpoints()) {
      if (p <= a + delta || p >= b - delta) continue;
      const SideLimits s = du.one_sided_limits(p);
      if (!s.left || !s.right) continue;
      if (!std::isfinite(*s.left) || !std::isfinite(*s.right)) continue;
      const double sc = std::max({1.0, std::abs(*s.left), std::abs(*s.right)});
      if (std::abs(*s.left - *s.right) > 1e-12 * sc) kinks.push_back(p);
    }
    std::sort(kinks.begin(), kinks.end());
    std::vector<std::pair<double, double>> windows;
    for (std::size_t j = 0; j < kinks.size(); ++j) {
      double wj = win;
      if (j > 0) wj = std::min(wj, 0.45 * (kinks[j] - kinks[j - 1]));
      if (j + 1 < kinks.size()) wj = std::min(wj, 0.45 * (kinks[j + 1] - kinks[j]));
      wj = std::min({wj, kinks[j] - (a + delta), (b - delta) - kinks[j]});
      if (wj > 0.0) windows.push_back({kinks[j] - wj, kinks[j] + wj});
    }

    auto inner_value = [&](double x) {
      const SideLimits s = du.one_sided_limits(x);
      const double v = s.right ? *s.right : s.left.value_or(0.0);
      return std::isfinite(v) ? v : 0.0;
    };
    auto inner_value_left = [&](double x) {
      const SideLimits s = du.one_sided_limits(x);
      const double v = s.left ? *s.left : s.right.value_or(0.0);
      return std::isfinite(v) ? v : 0.0;
    };
    // taper: a single linear piece from zero at the component endpoint to the
    // derivative's value just inside; stays polynomial even when u' blows up
    // toward the endpoint
    auto emit_taper = [&](double lo, double hi, bool zero_at_lo) {
      if (hi - lo <= 0.0) return;
      Piece p;
      p.lo = lo;
      p.hi = hi;
      p.kind = PieceKind::Poly;
      p.origin = lo;
      const double v = zero_at_lo ? inner_value(hi) : inner_value_left(lo);
      if (zero_at_lo)
        p.coeffs = {0.0, v / (hi - lo)};
      else
        p.coeffs = {v, -v / (hi - lo)};
      out.push_back(p);
    };
    auto emit_plain = [&](double lo, double hi) {
      if (hi - lo <= 0.0) return;
      for (const Piece& p : du.pieces()) {
        const double l = std::max(p.lo, lo), r = std::min(p.hi, hi);
        if (r - l <= 0.0) continue;
        out.push_back(detail::slice(p, l, r));
      }
    };
    auto emit_bridge = [&](double lo, double hi) {
      const double v0 = du.one_sided_limits(lo).left.value_or(0.0);
      const double v1 = du.one_sided_limits(hi).right.value_or(0.0);
      Piece p;
      p.lo = lo;
      p.hi = hi;
      p.kind = PieceKind::Poly;
      p.origin = lo;
      p.coeffs = {v0, (v1 - v0) / (hi - lo)};
      out.push_back(p);
    };

    emit_taper(a, a + delta, true);
    double cursor = a + delta;
    for (const auto& win_j : windows) {
      emit_plain(cursor, win_j.first);
      emit_bridge(win_j.first, win_j.second);
      cursor = win_j.second;
    }
    emit_plain(cursor, b - delta);
    emit_taper(b - delta, b, false);
    return PiecewiseFunction(std::move(out));
  };

  const int max_halvings = 48;
  for (int k = 0; k <= max_halvings; ++k) {
    const double shrink = std::pow(0.5, k);
    mol.per_interval.clear();
    double err = 0.0, err_est = 0.0;
    bool padded = false;
    for (const auto& I : dec.intervals) {
      const double delta = 0.25 * I.length() / static_cast<double>(h) * shrink;
      const double win = 0.5 * delta;
      PiecewiseFunction v = build_interval(I, delta, win);
      const auto d = detail::l1_weighted_diff(v, detail::slice_function(du, I.lo, I.hi), w.f,
                                              I, q);
      err += d.value;
      err_est += d.error;
      padded = padded || d.padded;
      mol.per_interval.push_back(std::move(v));
    }
    mol.error = err;
    mol.padded = padded;
    if (padded) {
      // the w-weighted error itself diverges; the padded value is reported
      // and the schedule marked unmet (the density hypothesis fails here)
      mol.schedule_met = false;
      return mol;
    }
    if (err <= mol.target + err_est) {
      mol.schedule_met = true;
      return mol;
    }
  }
  throw ScheduleUnreachable("mollifier cannot reach the error schedule");
}

/// Midpoint-anchored primitive of the mollified derivative on one component.
inline PiecewiseFunction build_primitive(const PiecewiseFunction& u, const PiecewiseFunction& v,
                                         const Interval& I) {
  const double mid = I.midpoint();
  const double u_mid = u.evaluate(mid);
  std::vector<Piece> cells;
  for (const Piece& p : v.pieces())
    for (const Piece& c : detail::as_poly_cells(p)) cells.push_back(c);

  std::size_t k0 = 0;
  while (k0 + 1 < cells.size() && !(mid >= cells[k0].lo && mid <= cells[k0].hi)) ++k0;

  std::vector<Piece> prim(cells.size());
  prim[k0] = detail::piece_antiderivative(cells[k0], mid, u_mid);
  for (std::size_t k = k0 + 1; k < cells.size(); ++k)
    prim[k] = detail::piece_antiderivative(cells[k], cells[k].lo, prim[k - 1].eval(cells[k - 1].hi));
  for (std::size_t k = k0; k-- > 0;)
    prim[k] = detail::piece_antiderivative(cells[k], cells[k].hi, prim[k + 1].eval(cells[k + 1].lo));
  return PiecewiseFunction(std::move(prim));
}

// ---------------------------------------------------------------------------
// recovery sequences

struct RecoveryStep {
  int h = 0;
  PiecewiseFunction u_h;
  double l1_hat_error = 0.0;
  double energy = 0.0;
  std::optional<double> energy_gap;
  bool schedule_met = true;
  bool padded_metrics = false;
};

/// The absolutely continuous approximant of the relaxation argument:
/// midpoint primitives on the outer halves, the function itself inside,
/// linear bridges across separated gaps and bar-weight collars at touching
/// points (joined continuously by a vanishing ramp).
inline RecoveryStep build_recovery(const Weight& w, const HatWeight& hw,
                                   const DegeneracyDecomposition& dec,
                                   const PiecewiseFunction& u, int h,
                                   const QuadratureConfig& q) {
  if (dec.intervals.empty()) throw HypothesisViolated("empty decomposition");
  const DomMembership mem = dom_w_membership(w, u, dec, hw, q);
  if (!mem.verdict) throw NotInDomain("function is not in Dom_w");

  // admissibility guard for the touching-interval branch
  bool any_touching = false;
  double min_len = kInf;
  for (std::size_t i = 0; i < dec.intervals.size(); ++i) {
    min_len = std::min(min_len, dec.intervals[i].length());
    if (i + 1 < dec.intervals.size() &&
        dec.intervals[i + 1].lo - dec.intervals[i].hi <= 1e-12)
      any_touching = true;
  }
  const double hd = static_cast<double>(h);
  if (any_touching && !(1.0 / hd < 0.25 * min_len))
    throw HNotAdmissible("need 1/h < min interval length / 4 for touching collars");

  Mollified mol = mollify_derivative(w, u, dec, h, q);

  const std::size_t n = dec.intervals.size();
  std::vector<PiecewiseFunction> prim;
  prim.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    prim.push_back(build_primitive(u, mol.per_interval[i], dec.intervals[i]));

  auto touching_right = [&](std::size_t i) {
    return i + 1 < n && dec.intervals[i + 1].lo - dec.intervals[i].hi <= 1e-12;
  };
  auto touching_left = [&](std::size_t i) {
    return i > 0 && dec.intervals[i].lo - dec.intervals[i - 1].hi <= 1e-12;
  };

  std::vector<Piece> parts;
  auto push_function = [&](const PiecewiseFunction& f) {
    for (const Piece& p : f.pieces()) parts.push_back(p);
  };
  auto push_const = [&](double lo, double hi, double v) {
    if (hi - lo <= 0.0) return;
    Piece c;
    c.lo = lo;
    c.hi = hi;
    c.kind = PieceKind::Poly;
    c.coeffs = {v};
    parts.push_back(c);
  };
  auto push_linear = [&](double lo, double hi, double v0, double v1) {
    if (hi - lo <= 0.0) return;
    Piece c;
    c.lo = lo;
    c.hi = hi;
    c.kind = PieceKind::Poly;
    c.origin = lo;
    c.coeffs = {v0, (v1 - v0) / (hi - lo)};
    parts.push_back(c);
  };

  // collar factor rho = |bar(x)| / |bar(edge)| as an explicit function
  auto collar_factor = [&](const BarWeight& bw, double lo, double hi, bool right_branch,
                           double denom_x) {
    PiecewiseFunction c = detail::slice_function(bw.cumulative, lo, hi);
    PiecewiseFunction centered = add_constant(c, -bw.c_mid);
    const double denom = std::abs(bw.cumulative.evaluate(denom_x) - bw.c_mid);
    if (!(denom > 0.0)) throw HypothesisViolated("vanishing bar-weight mass at the collar");
    return scale(centered, (right_branch ? 1.0 : -1.0) / denom);
  };

  double carry_mismatch = 0.0;  // u_h left limit at a touching point, absorbed by the next collar
  bool have_mismatch = false;

  const Interval omega = dec.omega;
  // leading constant
  push_const(omega.lo, dec.intervals[0].lo, prim[0].evaluate(dec.intervals[0].lo));

  for (std::size_t i = 0; i < n; ++i) {
    const Interval I = dec.intervals[i];
    const double mid = I.midpoint();
    const double col = 1.0 / hd;
    const bool tl = touching_left(i);
    const bool tr = touching_right(i);
    BarWeight bw;
    if (tl || tr) bw = bar_weight(hw, i);

    // left half [a, mid)
    if (tl) {
      PiecewiseFunction rho = collar_factor(bw, I.lo, I.lo + col, false, I.lo + col);
      PiecewiseFunction up = detail::slice_function(u, I.lo, I.lo + col);
      PiecewiseFunction collar = detail::product_function(up, rho, I.lo, I.lo + col);
      if (have_mismatch) {
        // close the touching-point gap with a ramp vanishing at the collar end:
        // value -delta at I.lo, 0 at I.lo + col
        const double delta = collar.evaluate(I.lo) - carry_mismatch;
        const PiecewiseFunction ramp =
            make_poly({I.lo, I.lo + col}, {-delta - delta * hd * I.lo, delta * hd});
        collar = add(collar, ramp);
        have_mismatch = false;
      }
      push_function(collar);
      push_function(detail::slice_function(u, I.lo + col, mid));
    } else {
      push_function(detail::slice_function(prim[i], I.lo, mid));
    }

    // right half [mid, b)
    if (tr) {
      push_function(detail::slice_function(u, mid, I.hi - col));
      PiecewiseFunction rho = collar_factor(bw, I.hi - col, I.hi, true, I.hi - col);
      PiecewiseFunction up = detail::slice_function(u, I.hi - col, I.hi);
      PiecewiseFunction collar = detail::product_function(up, rho, I.hi - col, I.hi);
      push_function(collar);
      carry_mismatch = collar.evaluate(I.hi);
      have_mismatch = true;
    } else {
      push_function(detail::slice_function(prim[i], mid, I.hi));
    }

    // gap to the next component
    if (i + 1 < n && !tr) {
      const Interval J = dec.intervals[i + 1];
      push_linear(I.hi, J.lo, prim[i].evaluate(I.hi), prim[i + 1].evaluate(J.lo));
    }
  }
  // trailing constant
  {
    const Interval last = dec.intervals[n - 1];
    const Piece& lastp = parts.back();
    push_const(last.hi, omega.hi, lastp.limit_at(lastp.hi));
  }

  RecoveryStep step;
  step.h = h;
  step.schedule_met = mol.schedule_met;
  step.u_h = PiecewiseFunction(std::move(parts));

  // reported errors
  const PiecewiseFunction hat = hw.as_piecewise();
  double l1 = 0.0;
  bool padded = mol.padded;
  for (const auto& I : dec.intervals) {
    const auto d = detail::l1_weighted_diff(step.u_h, u, hat, I, q);
    l1 += d.value;
    padded = padded || d.padded;
  }
  step.l1_hat_error = l1;
  step.padded_metrics = padded;
  step.energy = pairing_total_variation(w, step.u_h, omega, q).value;
  try {
    RelaxedValue fb = relaxed_functional(w, u, dec, hw, q);
    if (fb.finite) step.energy_gap = std::abs(step.energy - *fb.value);
  } catch (const HypothesisViolated&) {
  }
  return step;
}

// ---------------------------------------------------------------------------
// lower semicontinuity probe

struct LscReport {
  std::vector<double> f_values;  // +inf encoded as infinity() for non-AC members
  double fbar_limit = 0.0;
  double min_tail = 0.0;
  bool pass = false;
};

namespace detail {

inline bool is_ac(const PiecewiseFunction& f) {
  if (!f.differentiable()) return false;
  for (double b : f.interior_breakpoints()) {
    const SideLimits s = f.one_sided_limits(b);
    if (!s.left || !s.right) return false;
    if (!std::isfinite(*s.left) || !std::isfinite(*s.right)) return false;
    const double sc = std::max({1.0, std::abs(*s.left), std::abs(*s.right)});
    if (std::abs(*s.left - *s.right) > 1e-9 * sc) return false;
  }
  const SideLimits lo = f.one_sided_limits(f.domain().lo);
  const SideLimits hi = f.one_sided_limits(f.domain().hi);
  return lo.right && hi.left && std::isfinite(*lo.right) && std::isfinite(*hi.left);
}

}  // namespace detail

/// Checks the liminf inequality along a family converging to u_limit in the
/// weak double-weight sense (probed against interior bump test functions).
inline LscReport lsc_probe(const Weight& w, const HatWeight& hw,
                           const DegeneracyDecomposition& dec,
                           const std::vector<PiecewiseFunction>& family,
                           const PiecewiseFunction& u_limit, const QuadratureConfig& q,
                           double tolerance = 1e-6) {
  if (family.size() < 2) throw BadParameters("family needs >= 2 members");
  const RelaxedValue fb = relaxed_functional(w, u_limit, dec, hw, q);
  if (!fb.finite) throw BadParameters("limit must have finite relaxed value for the probe");

  // weak-convergence probes against one interior bump per component
  const PiecewiseFunction hat = hw.as_piecewise();
  const PiecewiseFunction* dw = w.derivative_density ? &*w.derivative_density : nullptr;
  for (const auto& I : dec.intervals) {
    const Interval supp{0.75 * I.lo + 0.25 * I.hi, 0.25 * I.lo + 0.75 * I.hi};
    const PiecewiseFunction phi = make_bump({I.lo, I.hi}, supp);
    double head = 0.0, tail = 0.0;
    for (std::size_t k = 0; k < family.size(); ++k) {
      std::optional<PiecewiseFunction> diff;
      try {
        diff = add(family[k], scale(u_limit, -1.0));
      } catch (const BadParameters&) {
      }
      double a;
      if (diff) {
        ProductIntegrand pi({{&*diff, false, false}, {&phi, false, true}, {&hat, false, false}},
                            I);
        a = pi.integrate(q).value;
      } else {
        auto fn = [&](double x) {
          return (family[k].evaluate(x) - u_limit.evaluate(x)) * phi.evaluate(x) *
                 hat.evaluate(x);
        };
        auto splits = merged_breakpoints({&family[k], &u_limit, &phi, &hat}, I);
        a = integrate_callable(fn, I.lo + q.singular_endpoint_padding,
                               I.hi - q.singular_endpoint_padding, splits, q)
                .value;
      }
      if (k < family.size() / 2)
        head = std::max(head, std::abs(a));
      else
        tail = std::max(tail, std::abs(a));
    }
    const double floor_tol = 1e-7 * (1.0 + std::abs(*fb.value));
    if (tail > std::max(head * 1.05, floor_tol))
      throw ConvergenceNotEstablished("weak L1(hat) probe does not settle");
    (void)dw;
  }

  LscReport rep;
  rep.fbar_limit = *fb.value;
  for (const auto& member : family) {
    if (!detail::is_ac(member)) {
      rep.f_values.push_back(kInf);
      continue;
    }
    rep.f_values.push_back(pairing_total_variation(w, member, dec.omega, q).value);
  }
  // the tail is the last quarter of the family (at least one member)
  const std::size_t tail_len = std::max<std::size_t>(1, family.size() / 4);
  const std::size_t tail_start = family.size() - tail_len;
  double mn = kInf;
  for (std::size_t k = tail_start; k < rep.f_values.size(); ++k)
    mn = std::min(mn, rep.f_values[k]);
  rep.min_tail = mn;
  rep.pass = mn >= rep.fbar_limit - tolerance;
  return rep;
}

// ---------------------------------------------------------------------------
// compactness demonstration

struct CompactnessReport {
  bool hypothesis_ok = false;
  double sup_midpoint = 0.0;
  double sup_tv = 0.0;
  double w11_l1_bound = 0.0;
  double w11_dl1_bound = 0.0;
  std::vector<double> successive_distances;  // L1(K, hat) between consecutive members
  bool cauchy_evidence = false;
};

inline CompactnessReport compactness_demo(const Weight& w, const HatWeight& hw,
                                          const DegeneracyDecomposition& dec,
                                          const std::vector<PiecewiseFunction>& family,
                                          const QuadratureConfig& q,
                                          double hypothesis_bound = 1e6) {
  if (family.size() < 3) throw BadParameters("family needs >= 3 members");
  CompactnessReport rep;
  for (const auto& member : family) {
    for (const auto& I : dec.intervals)
      rep.sup_midpoint =
          std::max(rep.sup_midpoint, std::abs(member.evaluate(I.midpoint())));
    double tv = 0.0;
    try {
      for (const auto& I : dec.intervals)
        tv += pairing_total_variation(w, member, I, q).value;
    } catch (const NonIntegrable&) {
      tv = kInf;
    }
    rep.sup_tv = std::max(rep.sup_tv, tv);
  }
  rep.hypothesis_ok = rep.sup_midpoint < hypothesis_bound && rep.sup_tv < hypothesis_bound;
  if (!rep.hypothesis_ok)
    throw HypothesisViolated("unbounded midpoint values or pairing masses in the family");

  // K: middle half of the longest component
  std::size_t best = 0;
  for (std::size_t i = 1; i < dec.intervals.size(); ++i)
    if (dec.intervals[i].length() > dec.intervals[best].length()) best = i;
  const Interval I = dec.intervals[best];
  const Interval K{0.75 * I.lo + 0.25 * I.hi, 0.25 * I.lo + 0.75 * I.hi};
  const PiecewiseFunction hat = hw.as_piecewise();
  const PiecewiseFunction one = make_constant(w.domain(), 1.0);

  for (const auto& member : family) {
    rep.w11_l1_bound = std::max(
        rep.w11_l1_bound, integrate_abs_times(member, one, K, q).value);
    rep.w11_dl1_bound = std::max(
        rep.w11_dl1_bound, integrate_abs_times(member.derivative(), one, K, q).value);
  }
  for (std::size_t k = 0; k + 1 < family.size(); ++k) {
    const auto d = detail::l1_weighted_diff(family[k + 1], family[k], hat, K, q);
    rep.successive_distances.push_back(d.value);
  }
  const std::size_t m = rep.successive_distances.size();
  double head = 0.0, tail = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (k < m / 2)
      head = std::max(head, rep.successive_distances[k]);
    else
      tail = std::max(tail, rep.successive_distances[k]);
  }
  rep.cauchy_evidence = tail <= head + 1e-12;
  return rep;
}

}  // namespace degen1d
