#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "degen1d/errors.hpp"
#include "degen1d/piecewise.hpp"

namespace degen1d {

enum class QuadratureRule { Trapezoid, Simpson };

struct QuadratureConfig {
  QuadratureRule rule = QuadratureRule::Simpson;
  int panels = 16;                          // per smooth sub-span, before refinement
  double singular_endpoint_padding = 1e-5;  // innermost pad of the improper ladder

  void validate() const {
    if (panels < 2) throw BadParameters("quadrature needs panels >= 2");
    if (!(singular_endpoint_padding > 0.0))
      throw BadParameters("singular endpoint padding must be positive");
  }
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;  // a posteriori: |fine - coarse| (+ extrapolation tail)

  IntegralResult& operator+=(const IntegralResult& o) {
    value += o.value;
    error += o.error;
    return *this;
  }
};

namespace detail {

template <class F>
double rule_sum(const F& f, double a, double b, int n, QuadratureRule rule) {
  const double h = (b - a) / static_cast<double>(n);
  if (rule == QuadratureRule::Trapezoid) {
    double s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i));
    return s * h;
  }
  // Simpson on n panels (2n+1 nodes)
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += 2.0 * f(a + h * static_cast<double>(i));
  for (int i = 0; i < n; ++i) s += 4.0 * f(a + h * (static_cast<double>(i) + 0.5));
  return s * h / 6.0;
}

}  // namespace detail

/// Two-level composite quadrature of a callable over [a,b] split at `splits`.
/// The callable must be finite on the open sub-spans; end values are taken as
/// one-sided limits by the caller's construction of `f`.
template <class F>
IntegralResult integrate_callable(const F& f, double a, double b,
                                  const std::vector<double>& splits, const QuadratureConfig& q) {
  q.validate();
  std::vector<double> xs{a, b};
  for (double s : splits)
    if (s > a && s < b) xs.push_back(s);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  IntegralResult total;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double l = xs[i], r = xs[i + 1];
    if (r - l <= 0.0) continue;
    const double coarse = detail::rule_sum(f, l, r, q.panels, q.rule);
    const double fine = detail::rule_sum(f, l, r, 2 * q.panels, q.rule);
    total.value += fine;
    total.error += std::abs(fine - coarse);
  }
  return total;
}

namespace detail {

// A factor of a product integrand, bound to one function. `abs_val` wraps the
// factor in |.|; kink splits must then be supplied by the caller.
struct Factor {
  const PiecewiseFunction* f = nullptr;
  bool abs_val = false;
  bool zero_extend = false;  // treat points outside f's domain as 0
};

inline double eval_factor(const Factor& fa, const Piece* piece, double x) {
  if (piece == nullptr) return 0.0;
  double v = piece->limit_at(x);
  return fa.abs_val ? std::abs(v) : v;
}

}  // namespace detail

/// Product integrand over I with piece-aware splitting. Extra splits (e.g.
/// kinks of |.| factors) may be passed in. Throws NonIntegrable when the
/// improper-endpoint ladder diverges.
class ProductIntegrand {
 public:
  ProductIntegrand(std::vector<detail::Factor> factors, Interval I)
      : factors_(std::move(factors)), I_(I) {}

  void add_splits(const std::vector<double>& s) {
    extra_.insert(extra_.end(), s.begin(), s.end());
  }

  IntegralResult integrate(const QuadratureConfig& q) const {
    q.validate();
    const bool sing_lo = singular_at(I_.lo);
    const bool sing_hi = singular_at(I_.hi);
    if (!sing_lo && !sing_hi) return integrate_between(I_.lo, I_.hi, q, {});

    // Padded ladder with geometric extrapolation; diverges when successive
    // values grow by more than 1.5x.
    const double pad0 = q.singular_endpoint_padding * 100.0;
    const double len = I_.length();
    std::vector<double> vals;
    IntegralResult last;
    for (int k = 0; k < 3; ++k) {
      const double pad = pad0 / std::pow(10.0, k);
      const double lo = sing_lo ? I_.lo + std::min(pad, 0.25 * len) : I_.lo;
      const double hi = sing_hi ? I_.hi - std::min(pad, 0.25 * len) : I_.hi;
      // dyadic refinement toward the singular endpoints keeps composite rules
      // accurate on power-type integrands
      std::vector<double> geo;
      if (sing_lo) {
        for (double d = pad; I_.lo + d < hi - 0.25 * (hi - lo); d *= 2.0)
          geo.push_back(I_.lo + d);
      }
      if (sing_hi) {
        for (double d = pad; I_.hi - d > lo + 0.25 * (hi - lo); d *= 2.0)
          geo.push_back(I_.hi - d);
      }
      last = integrate_between(lo, hi, q, geo);
      vals.push_back(last.value);
    }
    const double d1 = vals[1] - vals[0];
    const double d2 = vals[2] - vals[1];
    const double scale = std::max({std::abs(vals[0]), std::abs(vals[1]), std::abs(vals[2]), 1.0});
    if (std::abs(d2) > 1.5 * std::abs(d1) && std::abs(d2) > 1e-9 * scale)
      throw NonIntegrable("padded partial integrals diverge near a singular endpoint");
    IntegralResult out = last;
    if (std::abs(d1) > 0.0 && std::abs(d2) < std::abs(d1)) {
      const double rho = d2 / d1;
      const double tail = d2 * rho / (1.0 - rho);
      out.value += tail;
      out.error += std::abs(tail) + std::abs(d2);
    } else {
      out.error += std::abs(d2);
    }
    return out;
  }

 private:
  bool singular_at(double x) const {
    for (const auto& fa : factors_) {
      const Interval d = fa.f->domain();
      if (x < d.lo || x > d.hi) continue;
      SideLimits s = fa.f->one_sided_limits(x);
      const std::optional<double> v = (x <= I_.midpoint()) ? s.right : s.left;
      if (v && !std::isfinite(*v)) return true;
    }
    return false;
  }

  IntegralResult integrate_between(double lo, double hi, const QuadratureConfig& q,
                                   const std::vector<double>& geo) const {
    std::vector<double> xs{lo, hi};
    for (const auto& fa : factors_) {
      for (double b : fa.f->breakpoints())
        if (b > lo && b < hi) xs.push_back(b);
      const Interval d = fa.f->domain();
      if (fa.zero_extend) {
        if (d.lo > lo && d.lo < hi) xs.push_back(d.lo);
        if (d.hi > lo && d.hi < hi) xs.push_back(d.hi);
      }
    }
    for (double s : extra_)
      if (s > lo && s < hi) xs.push_back(s);
    for (double s : geo)
      if (s > lo && s < hi) xs.push_back(s);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [](double a, double b) { return std::abs(a - b) <= 1e-15; }),
             xs.end());

    IntegralResult total;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double l = xs[i], r = xs[i + 1];
      if (r - l <= 0.0) continue;
      const double mid = 0.5 * (l + r);
      std::vector<const Piece*> bound(factors_.size(), nullptr);
      bool zero_span = false;
      for (std::size_t j = 0; j < factors_.size(); ++j) {
        const Interval d = factors_[j].f->domain();
        if (mid < d.lo || mid > d.hi) {
          if (!factors_[j].zero_extend) throw OutOfDomain("integrand factor undefined on span");
          zero_span = true;
          break;
        }
        bound[j] = &factors_[j].f->piece_at(mid);
      }
      if (zero_span) continue;
      auto f = [&](double x) {
        double v = 1.0;
        for (std::size_t j = 0; j < factors_.size(); ++j)
          v *= detail::eval_factor(factors_[j], bound[j], x);
        return v;
      };
      // oscillatory factors need the rule to resolve their period
      int panels = q.panels;
      for (const Piece* p : bound) {
        if (p->kind == PieceKind::PolySine) {
          const double periods = std::abs(p->freq) * (r - l) / 6.283185307179586;
          panels = std::max(panels,
                            static_cast<int>(std::min(1e6, 8.0 * periods + q.panels)));
        } else if (p->kind == PieceKind::OnePlusSinInv || p->kind == PieceKind::CosInvSq) {
          if (l > 0.0) {
            const double periods = (1.0 / l - 1.0 / r) / 6.283185307179586;
            panels = std::max(panels,
                              static_cast<int>(std::min(1e6, 8.0 * periods + q.panels)));
          }
        }
      }
      const double coarse = detail::rule_sum(f, l, r, panels, q.rule);
      const double fine = detail::rule_sum(f, l, r, 2 * panels, q.rule);
      total.value += fine;
      total.error += std::abs(fine - coarse);
    }
    return total;
  }

  std::vector<detail::Factor> factors_;
  Interval I_;
  std::vector<double> extra_;
};

/// integral of f*g over I with a posteriori error estimate.
inline IntegralResult integrate(const PiecewiseFunction& f, const PiecewiseFunction& g,
                                const Interval& I, const QuadratureConfig& q) {
  ProductIntegrand pi({{&f, false, false}, {&g, false, false}}, I);
  return pi.integrate(q);
}

/// integral of |f|*g over I; kinks of f are split at its sign changes.
inline IntegralResult integrate_abs_times(const PiecewiseFunction& f, const PiecewiseFunction& g,
                                          const Interval& I, const QuadratureConfig& q) {
  ProductIntegrand pi({{&f, true, false}, {&g, false, false}}, I);
  std::vector<double> kinks;
  const Interval fi = intersect(f.domain(), I);
  for (const Piece& p : f.pieces()) {
    const double l = std::max(p.lo, fi.lo), r = std::min(p.hi, fi.hi);
    if (r <= l) continue;
    auto roots = piece_roots(p, 0.0, l, r);
    kinks.insert(kinks.end(), roots.begin(), roots.end());
  }
  pi.add_splits(kinks);
  return pi.integrate(q);
}

// ---------------------------------------------------------------------------
// Exact path for piecewise integrands whose per-span products stay in the
// closed-form registry (poly*poly, power*power around the same origin, const
// scalings). Returns nullopt when any span falls outside the registry.

namespace detail {

inline std::optional<Piece> product_piece(const Piece& a, const Piece& b, double lo, double hi) {
  Piece r;
  r.lo = lo;
  r.hi = hi;
  auto is_const = [](const Piece& p, double& c) {
    if (p.kind == PieceKind::Poly && p.coeffs.size() <= 1) {
      c = p.coeffs.empty() ? 0.0 : p.coeffs[0];
      return true;
    }
    return false;
  };
  double ca, cb;
  if (a.kind == PieceKind::Poly && b.kind == PieceKind::Poly) {
    r.kind = PieceKind::Poly;
    r.origin = lo;
    const auto pa = poly_to_origin(a.coeffs.empty() ? std::vector<double>{0.0} : a.coeffs,
                                   a.origin, lo);
    const auto pb = poly_to_origin(b.coeffs.empty() ? std::vector<double>{0.0} : b.coeffs,
                                   b.origin, lo);
    r.coeffs = poly_mul(pa, pb);
    return r;
  }
  if (a.kind == PieceKind::Power && b.kind == PieceKind::Power && a.origin == b.origin &&
      a.sign == b.sign && a.offset == 0.0 && b.offset == 0.0) {
    r.kind = PieceKind::Power;
    r.scale = a.scale * b.scale;
    r.exponent = a.exponent + b.exponent;
    r.origin = a.origin;
    r.sign = a.sign;
    return r;
  }
  if (is_const(a, ca) && b.kind == PieceKind::Power) {
    r = b;
    r.lo = lo;
    r.hi = hi;
    r.scale *= ca;
    r.offset *= ca;
    return r;
  }
  if (is_const(b, cb) && a.kind == PieceKind::Power) {
    r = a;
    r.lo = lo;
    r.hi = hi;
    r.scale *= cb;
    r.offset *= cb;
    return r;
  }
  return std::nullopt;
}

}  // namespace detail

/// Exact signed integral of s*f*g over I where s = sign(f) per monotone span;
/// i.e. the exact value of integral |f| g when g >= 0. Returns nullopt when
/// products leave the closed-form registry or improper spans appear.
inline std::optional<double> integrate_abs_times_exact(const PiecewiseFunction& f,
                                                       const PiecewiseFunction& g,
                                                       const Interval& I) {
  auto xs = merged_breakpoints({&f, &g}, I);
  // add sign kinks of f
  std::vector<double> kinks;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double m = 0.5 * (xs[i] + xs[i + 1]);
    const Piece& p = f.piece_at(m);
    auto roots = piece_roots(p, 0.0, xs[i], xs[i + 1]);
    kinks.insert(kinks.end(), roots.begin(), roots.end());
  }
  xs.insert(xs.end(), kinks.begin(), kinks.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return std::abs(a - b) <= 1e-15; }),
           xs.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double l = xs[i], r = xs[i + 1];
    if (r - l <= 0.0) continue;
    const double m = 0.5 * (l + r);
    const Piece& pf = f.piece_at(m);
    const Piece& pg = g.piece_at(m);
    auto prod = detail::product_piece(pf, pg, l, r);
    if (!prod) return std::nullopt;
    auto v = piece_integral(*prod, l, r);
    if (!v) return std::nullopt;
    const double sgn = (pf.eval(m) < 0.0) ? -1.0 : 1.0;
    total += sgn * *v;
  }
  return total;
}

/// Exact integral of f*g over I when representable; see above.
inline std::optional<double> integrate_exact(const PiecewiseFunction& f,
                                             const PiecewiseFunction& g, const Interval& I) {
  auto xs = merged_breakpoints({&f, &g}, I);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double l = xs[i], r = xs[i + 1];
    if (r - l <= 0.0) continue;
    const double m = 0.5 * (l + r);
    auto prod = detail::product_piece(f.piece_at(m), g.piece_at(m), l, r);
    if (!prod) return std::nullopt;
    auto v = piece_integral(*prod, l, r);
    if (!v) return std::nullopt;
    total += *v;
  }
  return total;
}

}  // namespace degen1d
