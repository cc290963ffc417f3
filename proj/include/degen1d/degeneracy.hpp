#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "degen1d/errors.hpp"
#include "degen1d/piecewise.hpp"
#include "degen1d/weight.hpp"

namespace degen1d {

/// The maximal open set where 1/w is locally bounded, as ordered disjoint
/// intervals. n_w counts the kept intervals; `truncated` marks decompositions
/// cut off at max_intervals (the not-finitely-degenerate case).
struct DegeneracyDecomposition {
  Interval omega;
  std::vector<Interval> intervals;
  int n_w = 0;
  bool truncated = false;
  std::vector<double> zero_set_points;

  double interval_measure() const {
    double s = 0.0;
    for (const auto& I : intervals) s += I.length();
    return s;
  }
};

namespace detail {

struct Exclusion {
  double lo, hi;  // lo == hi for point degeneracies
};

// Degenerate sets of a single piece: points where the essential infimum of w
// vanishes locally and whole sub-ranges where the piece is (numerically) zero.
inline void piece_degeneracies(const Piece& p, double theta_rel, std::vector<Exclusion>& out) {
  const MinMax mm = piece_min_max(p, p.lo, p.hi);
  const double ref = std::max(std::abs(mm.max), std::abs(mm.min));
  if (ref <= 0.0) {
    out.push_back({p.lo, p.hi});  // identically zero piece
    return;
  }
  const double theta = theta_rel * ref;

  switch (p.kind) {
    case PieceKind::Poly:
    case PieceKind::PolySine: {
      // sign-change roots
      for (double x : piece_roots(p, 0.0, p.lo, p.hi)) out.push_back({x, x});
      // touching zeros at interior minima
      for (double x : piece_critical_points(p, p.lo, p.hi)) {
        const double v = p.eval(x);
        if (std::abs(v) <= theta) out.push_back({x, x});
      }
      break;
    }
    case PieceKind::Power: {
      if (p.exponent > 0.0) {
        const double x = p.origin;
        if (x >= p.lo && x <= p.hi) out.push_back({x, x});
      }
      if (p.scale == 0.0) out.push_back({p.lo, p.hi});
      break;
    }
    case PieceKind::OnePlusSinInv: {
      // zeros exactly where sin(1/x) = -1: x = 1/(pi(3/2 + 2k))
      const double pi = 4.0 * std::atan(1.0);
      const double l = p.lo, r = p.hi;
      if (l <= 0.0) break;
      double k = std::ceil((1.0 / r / pi - 1.5) / 2.0);
      if (k < 0.0) k = 0.0;
      // enumerate from the right (largest x 1st would need descending k; keep
      // ascending k = descending x and cap hard)
      for (int count = 0; count < (1 << 16); ++count, k += 1.0) {
        const double x = 1.0 / (pi * (1.5 + 2.0 * k));
        if (x >= r) continue;
        if (x <= l) break;
        out.push_back({x, x});
      }
      break;
    }
    case PieceKind::CosInvSq: {
      for (double x : piece_roots(p, 0.0, p.lo, p.hi)) out.push_back({x, x});
      break;
    }
    case PieceKind::Samples: {
      const std::size_t n = p.samples.size();
      const double dx = (p.hi - p.lo) / static_cast<double>(n - 1);
      std::size_t run_start = n;
      for (std::size_t i = 0; i < n; ++i) {
        const bool degenerate = p.samples[i] <= theta;
        if (degenerate && run_start == n) run_start = i;
        if ((!degenerate || i + 1 == n) && run_start < n) {
          const std::size_t run_end = degenerate ? i : i - 1;
          const double a = p.lo + dx * static_cast<double>(run_start);
          const double b = p.lo + dx * static_cast<double>(run_end);
          out.push_back({a, b});
          run_start = n;
        }
      }
      break;
    }
  }
}

}  // namespace detail

/// Locate I_{Omega,w} for a weight on Omega. Interval endpoints are exact for
/// closed-form pieces and within `resolution` for sampled ones. When more than
/// max_intervals components exist, the longest max_intervals are kept (in
/// ascending order) and the decomposition is flagged truncated.
inline DegeneracyDecomposition detect_intervals(const Weight& w, const Interval& omega,
                                                double resolution = 1e-4, int max_intervals = 64,
                                                double theta_rel = 1e-12) {
  const Interval d = w.domain();
  if (omega.lo < d.lo - 1e-12 || omega.hi > d.hi + 1e-12)
    throw OutOfDomain("omega leaves the weight's domain");

  std::vector<detail::Exclusion> ex;
  for (const Piece& p : w.f.pieces()) {
    if (p.hi <= omega.lo || p.lo >= omega.hi) continue;
    detail::piece_degeneracies(p, theta_rel, ex);
  }
  // piece joints where a one-sided limit vanishes count as degenerate points
  for (double b : w.f.interior_breakpoints()) {
    if (b <= omega.lo || b >= omega.hi) continue;
    const SideLimits s = w.f.one_sided_limits(b);
    const double v = std::min(s.left.value_or(kInf), s.right.value_or(kInf));
    if (v <= 0.0) ex.push_back({b, b});
  }

  // clip, sort, merge
  std::vector<detail::Exclusion> merged;
  for (auto e : ex) {
    e.lo = std::max(e.lo, omega.lo);
    e.hi = std::min(e.hi, omega.hi);
    if (e.lo > e.hi) continue;
    merged.push_back(e);
  }
  std::sort(merged.begin(), merged.end(),
            [](const detail::Exclusion& a, const detail::Exclusion& b) { return a.lo < b.lo; });
  std::vector<detail::Exclusion> fused;
  for (const auto& e : merged) {
    if (!fused.empty() && e.lo <= fused.back().hi + 1e-13) {
      fused.back().hi = std::max(fused.back().hi, e.hi);
    } else {
      fused.push_back(e);
    }
  }

  DegeneracyDecomposition dec;
  dec.omega = omega;
  double cursor = omega.lo;
  for (const auto& e : fused) {
    if (e.lo - cursor > std::max(resolution * 1e-6, 1e-13))
      dec.intervals.push_back({cursor, e.lo});
    cursor = std::max(cursor, e.hi);
    dec.zero_set_points.push_back(e.lo);
    if (e.hi > e.lo) dec.zero_set_points.push_back(e.hi);
  }
  if (omega.hi - cursor > std::max(resolution * 1e-6, 1e-13))
    dec.intervals.push_back({cursor, omega.hi});

  if (static_cast<int>(dec.intervals.size()) > max_intervals) {
    auto kept = dec.intervals;
    std::stable_sort(kept.begin(), kept.end(), [](const Interval& a, const Interval& b) {
      return a.length() > b.length();
    });
    kept.resize(static_cast<std::size_t>(max_intervals));
    std::sort(kept.begin(), kept.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    dec.intervals = std::move(kept);
    dec.truncated = true;
  }
  dec.n_w = static_cast<int>(dec.intervals.size());
  return dec;
}

/// c_{i,K}: ess sup of 1/w on a compact K well inside one component.
inline double local_bound_constant(const Weight& w, const DegeneracyDecomposition& dec,
                                   const Interval& K) {
  for (const auto& I : dec.intervals) {
    if (K.lo > I.lo && K.hi < I.hi) return ess_sup_reciprocal(w, K);
  }
  throw NotCompactlyContained("K is not compactly contained in any component");
}

}  // namespace degen1d
