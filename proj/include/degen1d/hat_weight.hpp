#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "degen1d/degeneracy.hpp"
#include "degen1d/errors.hpp"
#include "degen1d/piecewise.hpp"
#include "degen1d/weight.hpp"

namespace degen1d {

/// One component (a_i,b_i) of the auxiliary weight: constant on the middle
/// half, running essential infimum of w toward the midpoint on the outer
/// quarters. Profiles are exact piece reuses (monotone-segment walk), so no
/// sampling error enters.
struct HatInterval {
  double a = 0, b = 0, q1 = 0, mid = 0, q3 = 0;
  double middle_value = 0;
  double value_a = 0, value_b = 0;  // one-sided limits at the endpoints
  double sup_bound = 0;             // L_i
  PiecewiseFunction left_profile;   // on [a, q1]
  PiecewiseFunction right_profile;  // on [q3, b]
};

struct HatWeight {
  Interval omega;
  std::vector<HatInterval> intervals;
  bool truncated = false;

  /// Pointwise value; quarter points take the middle constant, endpoints take
  /// their one-sided limits, and everything off the closure of the
  /// decomposition is zero.
  double evaluate(double x) const {
    for (const auto& hi : intervals) {
      if (x < hi.a) break;
      if (x == hi.a) return hi.value_a;
      if (x == hi.b) return hi.value_b;
      if (x > hi.a && x < hi.b) {
        if (x == hi.q1 || x == hi.q3) return hi.middle_value;
        if (x < hi.q1) return hi.left_profile.evaluate(x);
        if (x > hi.q3) return hi.right_profile.evaluate(x);
        return hi.middle_value;
      }
    }
    return 0.0;
  }

  /// Assembled piecewise form over omega (gaps filled with zero); pointwise
  /// conventions at breakpoints are immaterial for integration.
  PiecewiseFunction as_piecewise() const {
    std::vector<Piece> out;
    auto push_zero = [&](double l, double r) {
      if (r - l <= 0.0) return;
      Piece z;
      z.lo = l;
      z.hi = r;
      z.kind = PieceKind::Poly;
      z.coeffs = {0.0};
      out.push_back(z);
    };
    double cursor = omega.lo;
    for (const auto& hi : intervals) {
      push_zero(cursor, hi.a);
      for (const Piece& p : hi.left_profile.pieces()) out.push_back(p);
      Piece m;
      m.lo = hi.q1;
      m.hi = hi.q3;
      m.kind = PieceKind::Poly;
      m.coeffs = {hi.middle_value};
      out.push_back(m);
      for (const Piece& p : hi.right_profile.pieces()) out.push_back(p);
      cursor = hi.b;
    }
    push_zero(cursor, omega.hi);
    return PiecewiseFunction(std::move(out));
  }
};

namespace detail {

struct MonotoneSegment {
  double lo, hi;
  const Piece* piece;
  bool increasing;
  bool constant;
};

inline std::vector<MonotoneSegment> monotone_segments(const Weight& w, double lo, double hi) {
  std::vector<MonotoneSegment> segs;
  for (const Piece& p : w.f.pieces()) {
    const double l = std::max(p.lo, lo), r = std::min(p.hi, hi);
    if (r - l <= 1e-15) continue;
    const auto splits = monotone_splits(p, l, r);
    for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
      const double a = splits[i], b = splits[i + 1];
      if (b - a <= 1e-15) continue;
      const double va = p.limit_at(a), vb = p.limit_at(b);
      MonotoneSegment s{a, b, &p, vb > va, std::abs(vb - va) == 0.0};
      segs.push_back(s);
    }
  }
  std::sort(segs.begin(), segs.end(),
            [](const MonotoneSegment& a, const MonotoneSegment& b) { return a.lo < b.lo; });
  return segs;
}

inline Piece const_piece(double lo, double hi, double v) {
  Piece c;
  c.lo = lo;
  c.hi = hi;
  c.kind = PieceKind::Poly;
  c.coeffs = {v};
  return c;
}

// Running essential infimum walked away from the midpoint. `leftward` builds
// R(x) = essinf_{(x,mid)} w recorded on [rec_lo, rec_hi]; otherwise
// R(x) = essinf_{(mid,x)} w.
inline std::vector<Piece> running_inf_profile(const Weight& w, double mid, double rec_lo,
                                              double rec_hi, bool leftward, double* final_min) {
  std::vector<Piece> profile;  // built in walk order, fixed up afterwards
  auto segs = monotone_segments(w, leftward ? rec_lo : mid, leftward ? mid : rec_hi);
  if (leftward) std::reverse(segs.begin(), segs.end());

  double m = kInf;
  auto record = [&](double lo, double hi, const Piece* live, double cv) {
    // live == nullptr: constant cv on [lo,hi]
    const double l = std::max(lo, rec_lo), r = std::min(hi, rec_hi);
    if (r - l <= 0.0) return;
    if (live == nullptr) {
      profile.push_back(const_piece(l, r, cv));
    } else {
      profile.push_back(slice(*live, l, r));
    }
  };

  for (const auto& s : segs) {
    const double v_near = leftward ? s.piece->limit_at(s.hi) : s.piece->limit_at(s.lo);
    const double v_far = leftward ? s.piece->limit_at(s.lo) : s.piece->limit_at(s.hi);
    const bool value_is_running = leftward ? s.increasing : !s.increasing;
    if (s.constant || !value_is_running) {
      // the segment contributes a single infimum; profile is flat across it
      const double inf_here = std::min(v_near, v_far);
      record(s.lo, s.hi, nullptr, std::min(m, v_near));
      m = std::min(m, inf_here);
    } else {
      // inf over (x, near end) is w(x) itself; split at the crossing with m
      if (v_near <= m) {
        record(s.lo, s.hi, s.piece, 0.0);
      } else if (v_far >= m) {
        record(s.lo, s.hi, nullptr, m);
      } else {
        auto roots = piece_roots(*s.piece, m, s.lo, s.hi);
        const double xstar = roots.empty() ? (leftward ? s.lo : s.hi) : roots[0];
        if (leftward) {
          record(xstar, s.hi, nullptr, m);
          record(s.lo, xstar, s.piece, 0.0);
        } else {
          record(s.lo, xstar, nullptr, m);
          record(xstar, s.hi, s.piece, 0.0);
        }
      }
      m = std::min(m, v_far);
    }
  }
  if (final_min) *final_min = m;

  std::sort(profile.begin(), profile.end(),
            [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  // close rounding gaps from the walk
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) profile[i + 1].lo = profile[i].hi;
  if (!profile.empty()) {
    profile.front().lo = rec_lo;
    profile.back().hi = rec_hi;
  } else {
    profile.push_back(const_piece(rec_lo, rec_hi, m));
  }
  return profile;
}

}  // namespace detail

/// The auxiliary weight of the decomposition: constant middle half, running
/// essential infima on the outer quarters, zero off the closure.
inline HatWeight build_hat(const Weight& w, const DegeneracyDecomposition& dec) {
  HatWeight hw;
  hw.omega = dec.omega;
  hw.truncated = dec.truncated;
  for (const auto& I : dec.intervals) {
    HatInterval hi;
    hi.a = I.lo;
    hi.b = I.hi;
    hi.mid = I.midpoint();
    hi.q1 = 0.75 * I.lo + 0.25 * I.hi;
    hi.q3 = 0.25 * I.lo + 0.75 * I.hi;
    hi.middle_value = essential_infimum(w, {hi.q1, hi.q3});

    double min_left = kInf, min_right = kInf;
    auto left = detail::running_inf_profile(w, hi.mid, hi.a, hi.q1, true, &min_left);
    auto right = detail::running_inf_profile(w, hi.mid, hi.q3, hi.b, false, &min_right);
    hi.left_profile = PiecewiseFunction(std::move(left));
    hi.right_profile = PiecewiseFunction(std::move(right));
    hi.value_a = min_left;   // essinf over (a, mid)
    hi.value_b = min_right;  // essinf over (mid, b)
    hi.sup_bound = std::max({hi.left_profile.one_sided_limits(hi.q1).left.value_or(0.0),
                             hi.right_profile.one_sided_limits(hi.q3).right.value_or(0.0),
                             hi.middle_value});
    hw.intervals.push_back(std::move(hi));
  }
  return hw;
}

/// Clause-by-clause verification of the auxiliary weight's structure.
struct HatIntervalReport {
  bool monotone_left = false;
  bool monotone_right = false;
  bool middle_matches_essinf = false;
  bool positive_inside = false;
  bool middle_positive = false;
  bool endpoint_iff_left = false;
  bool endpoint_iff_right = false;
  double sup_bound = 0.0;
};

struct HatPropertyReport {
  std::vector<HatIntervalReport> per_interval;
  bool bounded_reciprocal_case = false;  // 1/w in Linf(Omega)
  double two_sided_constant = 0.0;       // c with 1/c <= hat <= c when applicable
  bool two_sided_ok = false;
  double global_sup = 0.0;
  bool all_pass = false;
};

inline HatPropertyReport check_hat_properties(const HatWeight& hw, const Weight& w,
                                              int grid = 512) {
  HatPropertyReport rep;
  bool all = true;
  double gsup = 0.0;
  for (const auto& hi : hw.intervals) {
    HatIntervalReport r;
    r.sup_bound = hi.sup_bound;
    gsup = std::max(gsup, hi.sup_bound);

    auto sample = [&](const PiecewiseFunction& f, double lo, double hi_, int n,
                      std::vector<double>& out) {
      for (int k = 0; k <= n; ++k) {
        const double x = lo + (hi_ - lo) * static_cast<double>(k) / static_cast<double>(n);
        out.push_back(f.evaluate(x));
      }
    };
    std::vector<double> lv, rv;
    sample(hi.left_profile, hi.a, hi.q1, grid, lv);
    sample(hi.right_profile, hi.q3, hi.b, grid, rv);
    r.monotone_left = std::is_sorted(lv.begin(), lv.end(), [](double a, double b) {
      return a < b - 1e-12 * (1.0 + std::abs(a));
    });
    r.monotone_right = std::is_sorted(rv.begin(), rv.end(), [](double a, double b) {
      return a > b + 1e-12 * (1.0 + std::abs(a));
    });
    const double essmid = essential_infimum(w, {hi.q1, hi.q3});
    r.middle_matches_essinf =
        std::abs(hi.middle_value - essmid) <= 1e-12 * (1.0 + std::abs(essmid));
    r.middle_positive = hi.middle_value > 0.0;
    bool pos = true;
    for (int k = 1; k < grid; ++k) {
      const double x = hi.a + (hi.b - hi.a) * static_cast<double>(k) / static_cast<double>(grid);
      if (!(hw.evaluate(x) > 0.0)) {
        pos = false;
        break;
      }
    }
    r.positive_inside = pos;
    const bool left_unbounded = !std::isfinite(ess_sup_reciprocal(w, {hi.a, hi.mid}));
    const bool right_unbounded = !std::isfinite(ess_sup_reciprocal(w, {hi.mid, hi.b}));
    r.endpoint_iff_left = (hi.value_a == 0.0) == left_unbounded;
    r.endpoint_iff_right = (hi.value_b == 0.0) == right_unbounded;

    all = all && r.monotone_left && r.monotone_right && r.middle_matches_essinf &&
          r.positive_inside && r.middle_positive && r.endpoint_iff_left && r.endpoint_iff_right;
    rep.per_interval.push_back(r);
  }
  rep.global_sup = gsup;

  const double recip = ess_sup_reciprocal(w, hw.omega);
  rep.bounded_reciprocal_case = std::isfinite(recip);
  if (rep.bounded_reciprocal_case && !hw.intervals.empty()) {
    double lo = kInf, hi_v = 0.0;
    for (const auto& hi : hw.intervals) {
      lo = std::min({lo, hi.value_a, hi.value_b, hi.middle_value});
      hi_v = std::max(hi_v, hi.sup_bound);
    }
    if (lo > 0.0) {
      rep.two_sided_constant = std::max(hi_v, 1.0 / lo);
      rep.two_sided_ok = true;
    }
    all = all && rep.two_sided_ok;
  }
  rep.all_pass = all;
  return rep;
}

/// Lebesgue measure of Omega minus supp(hat) vanishes (up to tol).
inline bool support_full_measure(const HatWeight& hw, const Interval& omega,
                                 double tol = 1e-9) {
  double covered = 0.0;
  for (const auto& hi : hw.intervals) covered += hi.b - hi.a;
  return omega.length() - covered <= tol * std::max(1.0, omega.length());
}

}  // namespace degen1d
