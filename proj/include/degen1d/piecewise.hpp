#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "degen1d/errors.hpp"

namespace degen1d {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Bounded open interval (a,b).
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x > lo && x < hi; }
  bool contains_closure(double x) const { return x >= lo && x <= hi; }
};

inline Interval make_interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw BadParameters("interval requires finite lo < hi");
  }
  return {lo, hi};
}

inline Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

enum class PieceKind {
  Poly,           // c0 + c1 x + ...
  Power,          // scale * (sign*(x-origin))^exponent
  OnePlusSinInv,  // 1 + sin(1/x)
  CosInvSq,       // scale * cos(1/x) / x^2   (derivative of sin(1/x) is -1/x^2 cos; kept for w')
  PolySine,       // poly(x) + amp * sin(freq x + phase)
  Samples         // uniform samples, linear interpolation
};

namespace detail {

inline double poly_eval(const std::vector<double>& c, double x) {
  double r = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
  return r;
}

inline std::vector<double> poly_derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

inline std::vector<double> poly_antiderivative(const std::vector<double>& c) {
  std::vector<double> a(c.size() + 1, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) a[i + 1] = c[i] / static_cast<double>(i + 1);
  return a;
}

inline std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline std::vector<double> poly_add(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

inline std::vector<double> poly_scale(std::vector<double> a, double s) {
  for (double& c : a) c *= s;
  return a;
}

// Substitute x -> alpha*t + beta into poly(x), returning coefficients in t.
inline std::vector<double> poly_compose_affine(const std::vector<double>& c, double alpha,
                                               double beta) {
  std::vector<double> r{0.0};
  const std::vector<double> lin{beta, alpha};
  for (std::size_t i = c.size(); i-- > 0;) {
    r = poly_mul(r, lin);
    if (r.empty()) r = {0.0};
    r[0] += c[i];
  }
  return r;
}

inline void trim_poly(std::vector<double>& c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
}

// Re-express coefficients about a new origin: p = sum c_k (x-o1)^k becomes
// sum c'_k (x-o2)^k with c' = compose(c, 1, o2-o1). Exact binomial arithmetic.
inline std::vector<double> poly_to_origin(const std::vector<double>& c, double o1, double o2) {
  if (o1 == o2) return c;
  return poly_compose_affine(c, 1.0, o2 - o1);
}

}  // namespace detail

/// One evaluable span of a piecewise function. The expression registry is
/// intentionally closed: polynomials, powers about an origin, 1+sin(1/x),
/// poly+sine, and uniform linear-interpolated samples. Poly coefficients are
/// taken about `origin` so thin spans keep a well-conditioned local basis.
struct Piece {
  double lo = 0.0;
  double hi = 1.0;
  PieceKind kind = PieceKind::Poly;

  std::vector<double> coeffs;  // Poly, PolySine: coefficients in (x - origin)
  double scale = 0.0;          // Power, CosInvSq
  double exponent = 0.0;       // Power
  double origin = 0.0;         // Poly/PolySine basis shift; Power pivot
  int sign = +1;               // Power: argument is sign*(x-origin)
  double offset = 0.0;         // Power: additive constant
  double amp = 0.0, freq = 0.0, phase = 0.0;  // PolySine
  std::vector<double> samples;                // Samples

  double length() const { return hi - lo; }

  double eval(double x) const {
    switch (kind) {
      case PieceKind::Poly:
        return detail::poly_eval(coeffs, x - origin);
      case PieceKind::Power: {
        const double t = sign * (x - origin);
        if (t > 0.0) return offset + scale * std::pow(t, exponent);
        if (t == 0.0) {
          if (exponent > 0.0) return offset;
          if (exponent == 0.0) return offset + scale;
          return scale > 0 ? kInf : (scale < 0 ? -kInf : offset);
        }
        throw OutOfDomain("power piece evaluated on the wrong side of its origin");
      }
      case PieceKind::OnePlusSinInv:
        if (x == 0.0) throw OutOfDomain("1+sin(1/x) undefined at 0");
        return 1.0 + std::sin(1.0 / x);
      case PieceKind::CosInvSq:
        if (x == 0.0) throw OutOfDomain("cos(1/x)/x^2 undefined at 0");
        return scale * std::cos(1.0 / x) / (x * x);
      case PieceKind::PolySine:
        return detail::poly_eval(coeffs, x - origin) + amp * std::sin(freq * x + phase);
      case PieceKind::Samples: {
        const std::size_t n = samples.size();
        if (n < 2) throw BadParameters("samples piece needs >= 2 nodes");
        const double t = (x - lo) / (hi - lo) * static_cast<double>(n - 1);
        const double fi = std::floor(t);
        std::size_t i = static_cast<std::size_t>(std::max(0.0, fi));
        if (i >= n - 1) i = n - 2;
        const double u = t - static_cast<double>(i);
        return samples[i] * (1.0 - u) + samples[i + 1] * u;
      }
    }
    return kNaN;
  }

  // One-sided limit taken from inside the piece toward x (x in [lo,hi]).
  double limit_at(double x) const { return eval(x); }

  bool differentiable() const {
    return kind == PieceKind::Poly || kind == PieceKind::Power ||
           kind == PieceKind::OnePlusSinInv || kind == PieceKind::PolySine ||
           kind == PieceKind::Samples || kind == PieceKind::CosInvSq;
  }

  // Derivative pieces: Samples expands to step polynomials (one per cell),
  // CosInvSq has no closed-form derivative in the registry.
  std::vector<Piece> derivative_pieces() const {
    switch (kind) {
      case PieceKind::Poly: {
        Piece d = *this;
        d.coeffs = detail::poly_derivative(coeffs);
        return {d};
      }
      case PieceKind::Power: {
        Piece d = *this;
        d.scale = scale * exponent * sign;
        d.exponent = exponent - 1.0;
        d.offset = 0.0;
        return {d};
      }
      case PieceKind::OnePlusSinInv: {
        Piece d;
        d.lo = lo;
        d.hi = hi;
        d.kind = PieceKind::CosInvSq;
        d.scale = -1.0;
        return {d};
      }
      case PieceKind::PolySine: {
        Piece d = *this;
        d.coeffs = detail::poly_derivative(coeffs);
        d.amp = amp * freq;
        d.phase = phase + std::asin(1.0) /* pi/2 */;
        return {d};
      }
      case PieceKind::Samples: {
        std::vector<Piece> out;
        const std::size_t n = samples.size();
        const double dx = (hi - lo) / static_cast<double>(n - 1);
        out.reserve(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
          Piece d;
          d.lo = lo + dx * static_cast<double>(i);
          d.hi = (i + 2 == n) ? hi : lo + dx * static_cast<double>(i + 1);
          d.kind = PieceKind::Poly;
          d.coeffs = {(samples[i + 1] - samples[i]) / dx};
          out.push_back(std::move(d));
        }
        return out;
      }
      case PieceKind::CosInvSq:
        throw MissingDerivative("no closed-form derivative for cos(1/x)/x^2 piece");
    }
    throw MissingDerivative("unknown piece kind");
  }

  // Exact integral over [l,r] subset [lo,hi] when a closed form exists.
  std::optional<double> integral_closed(double l, double r) const {
    switch (kind) {
      case PieceKind::Poly: {
        const auto a = detail::poly_antiderivative(coeffs);
        return detail::poly_eval(a, r - origin) - detail::poly_eval(a, l - origin);
      }
      case PieceKind::Power:
        return std::nullopt;  // handled by piece_integral()
      case PieceKind::CosInvSq:
        // d/dx sin(1/x) = -cos(1/x)/x^2
        return scale * (std::sin(1.0 / l) - std::sin(1.0 / r));
      case PieceKind::PolySine: {
        const auto a = detail::poly_antiderivative(coeffs);
        double v = detail::poly_eval(a, r - origin) - detail::poly_eval(a, l - origin);
        if (amp != 0.0 && freq != 0.0)
          v += -amp / freq * (std::cos(freq * r + phase) - std::cos(freq * l + phase));
        else if (amp != 0.0)
          v += amp * std::sin(phase) * (r - l);
        return v;
      }
      case PieceKind::Samples: {
        // Exact for linear interpolation: trapezoid over covered cells.
        const std::size_t n = samples.size();
        const double dx = (hi - lo) / static_cast<double>(n - 1);
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
          const double cl = lo + dx * static_cast<double>(i);
          const double cr = cl + dx;
          const double a = std::max(l, cl), b = std::min(r, cr);
          if (b <= a) continue;
          const double fa = eval(a), fb = eval(b);
          total += 0.5 * (fa + fb) * (b - a);
        }
        return total;
      }
      case PieceKind::OnePlusSinInv:
        return std::nullopt;  // no elementary antiderivative
    }
    return std::nullopt;
  }
};

namespace detail {

// Power-piece integral needs care with orientation; reimplemented cleanly here
// and used instead of the inline expression above.
inline std::optional<double> power_integral(const Piece& p, double l, double r) {
  const double s = static_cast<double>(p.sign);
  const double tl = s * (l - p.origin), tr = s * (r - p.origin);
  const double lo_t = std::min(tl, tr), hi_t = std::max(tl, tr);
  if (lo_t < 0.0) return std::nullopt;
  const double e = p.exponent;
  auto prim = [&](double t) -> double {
    if (t == 0.0) return (e + 1.0 > 0.0) ? 0.0 : kInf;
    if (e == -1.0) return std::log(t);
    return std::pow(t, e + 1.0) / (e + 1.0);
  };
  const double a = prim(lo_t), b = prim(hi_t);
  if (!std::isfinite(a) || !std::isfinite(b)) return std::nullopt;
  // substitution t = s (x - origin): dx = s dt; integral over x in [l,r]
  // equals s * (prim(tr) - prim(tl)).
  return p.scale * s * (prim(tr) - prim(tl)) + p.offset * (r - l);
}

}  // namespace detail

inline std::optional<double> piece_integral(const Piece& p, double l, double r) {
  if (p.kind == PieceKind::Power) return detail::power_integral(p, l, r);
  return p.integral_closed(l, r);
}

struct SideLimits {
  std::optional<double> left;   // limit from below; nullopt outside domain closure
  std::optional<double> right;  // limit from above
};

/// Piecewise function on a bounded interval: contiguous pieces, strictly
/// increasing breakpoints, one-sided limits everywhere on the closure.
/// Evaluation at an interior breakpoint uses the right piece.
class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;

  explicit PiecewiseFunction(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw BadParameters("piecewise function needs >= 1 piece");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (!(pieces_[i].lo < pieces_[i].hi))
        throw BadParameters("piece range must satisfy lo < hi");
      if (i > 0 && std::abs(pieces_[i].lo - pieces_[i - 1].hi) > 0.0)
        throw BadParameters("pieces must cover the domain without gaps");
    }
  }

  Interval domain() const { return {pieces_.front().lo, pieces_.back().hi}; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  std::vector<double> breakpoints() const {
    std::vector<double> b;
    b.reserve(pieces_.size() + 1);
    b.push_back(pieces_.front().lo);
    for (const auto& p : pieces_) b.push_back(p.hi);
    return b;
  }

  std::vector<double> interior_breakpoints() const {
    std::vector<double> b;
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) b.push_back(pieces_[i].hi);
    return b;
  }

  std::size_t piece_index(double x) const {
    const Interval d = domain();
    if (x < d.lo || x > d.hi) throw OutOfDomain("point outside covered domain");
    if (x >= pieces_.back().lo) return pieces_.size() - 1;
    std::size_t lo = 0, hi = pieces_.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (x < pieces_[mid].hi && x >= pieces_[mid].lo) return mid;
      if (x >= pieces_[mid].hi)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  }

  const Piece& piece_at(double x) const { return pieces_[piece_index(x)]; }

  double evaluate(double x) const {
    const Interval d = domain();
    if (x < d.lo || x > d.hi) throw OutOfDomain("point outside covered domain");
    if (x == d.hi) return pieces_.back().limit_at(x);
    return piece_at(x).eval(x);
  }

  SideLimits one_sided_limits(double x) const {
    const Interval d = domain();
    if (x < d.lo || x > d.hi) throw OutOfDomain("point outside domain closure");
    SideLimits s;
    if (x > d.lo) {
      std::size_t i = piece_index(x);
      if (x == pieces_[i].lo) --i;
      s.left = pieces_[i].limit_at(x);
    }
    if (x < d.hi) s.right = piece_at(x).limit_at(x);
    return s;
  }

  bool differentiable() const {
    return std::all_of(pieces_.begin(), pieces_.end(),
                       [](const Piece& p) { return p.differentiable(); });
  }

  PiecewiseFunction derivative() const {
    std::vector<Piece> out;
    for (const auto& p : pieces_) {
      if (!p.differentiable()) throw MissingDerivative("piece has no derivative");
      auto d = p.derivative_pieces();
      out.insert(out.end(), d.begin(), d.end());
    }
    return PiecewiseFunction(std::move(out));
  }

 private:
  std::vector<Piece> pieces_;
};

// ---------------------------------------------------------------------------
// Builders

inline PiecewiseFunction make_poly(const Interval& dom, std::vector<double> coeffs) {
  Piece p;
  p.lo = dom.lo;
  p.hi = dom.hi;
  p.kind = PieceKind::Poly;
  detail::trim_poly(coeffs);
  p.coeffs = std::move(coeffs);
  return PiecewiseFunction({p});
}

inline PiecewiseFunction make_constant(const Interval& dom, double c) {
  return make_poly(dom, {c});
}

inline PiecewiseFunction make_power(const Interval& dom, double scale, double exponent,
                                    double origin = 0.0, int sign = +1) {
  Piece p;
  p.lo = dom.lo;
  p.hi = dom.hi;
  p.kind = PieceKind::Power;
  p.scale = scale;
  p.exponent = exponent;
  p.origin = origin;
  p.sign = sign;
  if (sign * (dom.lo - origin) < 0.0 || sign * (dom.hi - origin) < 0.0)
    throw BadParameters("power piece domain must lie on the oriented side of its origin");
  return PiecewiseFunction({p});
}

inline PiecewiseFunction make_one_plus_sin_inv(const Interval& dom) {
  if (dom.lo <= 0.0) throw BadParameters("1+sin(1/x) piece requires domain in (0,inf)");
  Piece p;
  p.lo = dom.lo;
  p.hi = dom.hi;
  p.kind = PieceKind::OnePlusSinInv;
  return PiecewiseFunction({p});
}

inline PiecewiseFunction make_samples(const Interval& dom, std::vector<double> values) {
  if (values.size() < 2) throw BadParameters("samples need >= 2 values");
  Piece p;
  p.lo = dom.lo;
  p.hi = dom.hi;
  p.kind = PieceKind::Samples;
  p.samples = std::move(values);
  return PiecewiseFunction({p});
}

inline PiecewiseFunction make_poly_sine(const Interval& dom, std::vector<double> coeffs,
                                        double amp, double freq, double phase = 0.0) {
  Piece p;
  p.lo = dom.lo;
  p.hi = dom.hi;
  p.kind = PieceKind::PolySine;
  p.coeffs = std::move(coeffs);
  p.amp = amp;
  p.freq = freq;
  p.phase = phase;
  return PiecewiseFunction({p});
}

inline PiecewiseFunction make_step(const Interval& dom, double split, double left_value,
                                   double right_value) {
  Piece a, b;
  a.lo = dom.lo;
  a.hi = split;
  a.kind = PieceKind::Poly;
  a.coeffs = {left_value};
  b.lo = split;
  b.hi = dom.hi;
  b.kind = PieceKind::Poly;
  b.coeffs = {right_value};
  return PiecewiseFunction({a, b});
}

/// C^1 bump ((1-t^2)^2 with t the affine map of [lo,hi] onto [-1,1]),
/// extended by zero over `dom`.
inline PiecewiseFunction make_bump(const Interval& dom, const Interval& support) {
  if (!(support.lo >= dom.lo && support.hi <= dom.hi))
    throw BadParameters("bump support must sit inside the domain");
  const double alpha = 2.0 / support.length();
  const double beta = -(support.lo + support.hi) / support.length();
  // (1 - t^2)^2 = 1 - 2 t^2 + t^4, composed with t = alpha x + beta
  const std::vector<double> in_t{1.0, 0.0, -2.0, 0.0, 1.0};
  std::vector<double> c = detail::poly_compose_affine(in_t, alpha, beta);
  std::vector<Piece> ps;
  if (support.lo > dom.lo) {
    Piece z;
    z.lo = dom.lo;
    z.hi = support.lo;
    z.coeffs = {0.0};
    ps.push_back(z);
  }
  Piece m;
  m.lo = support.lo;
  m.hi = support.hi;
  m.coeffs = std::move(c);
  ps.push_back(m);
  if (support.hi < dom.hi) {
    Piece z;
    z.lo = support.hi;
    z.hi = dom.hi;
    z.coeffs = {0.0};
    ps.push_back(z);
  }
  return PiecewiseFunction(std::move(ps));
}

// ---------------------------------------------------------------------------
// Arithmetic on representable kinds (poly / poly+sine); used by test corpora
// and recovery assembly.

namespace detail {

inline Piece slice(const Piece& p, double l, double r) {
  Piece q = p;
  if (p.kind == PieceKind::Samples) {
    // re-sample the sub-range so nodes stay uniform
    const int n = std::max<std::size_t>(2, p.samples.size());
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double x = l + (r - l) * static_cast<double>(i) / static_cast<double>(n - 1);
      v[static_cast<std::size_t>(i)] = p.eval(x);
    }
    q.samples = std::move(v);
  }
  q.lo = l;
  q.hi = r;
  return q;
}

inline bool is_const_piece(const Piece& p, double& c) {
  if (p.kind == PieceKind::Poly && p.coeffs.size() <= 1) {
    c = p.coeffs.empty() ? 0.0 : p.coeffs[0];
    return true;
  }
  return false;
}

inline bool addable(const Piece& a, const Piece& b) {
  auto k = [](const Piece& p) {
    return p.kind == PieceKind::Poly || p.kind == PieceKind::PolySine;
  };
  double c;
  if (a.kind == PieceKind::Power && is_const_piece(b, c)) return true;
  if (b.kind == PieceKind::Power && is_const_piece(a, c)) return true;
  if (a.kind == PieceKind::Samples && b.kind == PieceKind::Poly) return true;
  if (b.kind == PieceKind::Samples && a.kind == PieceKind::Poly) return true;
  if (!k(a) || !k(b)) return false;
  if (a.kind == PieceKind::PolySine && b.kind == PieceKind::PolySine)
    return a.freq == b.freq && a.phase == b.phase;
  return true;
}

inline Piece add_pieces(const Piece& a, const Piece& b) {
  Piece r;
  r.lo = a.lo;
  r.hi = a.hi;
  double c;
  if (a.kind == PieceKind::Power && is_const_piece(b, c)) {
    r = a;
    r.offset += c;
    return r;
  }
  if (b.kind == PieceKind::Power && is_const_piece(a, c)) {
    r = b;
    r.lo = a.lo;
    r.hi = a.hi;
    r.offset += c;
    return r;
  }
  if (a.kind == PieceKind::Samples || b.kind == PieceKind::Samples) {
    const Piece& s = (a.kind == PieceKind::Samples) ? a : b;
    const Piece& o = (a.kind == PieceKind::Samples) ? b : a;
    r = s;
    r.lo = a.lo;
    r.hi = a.hi;
    const std::size_t n = r.samples.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double x =
          r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
      r.samples[i] = s.eval(x) + o.eval(x);
    }
    return r;
  }
  // common local basis keeps thin spans well conditioned
  const double o = a.lo;
  const auto ca = poly_to_origin(a.coeffs, a.origin, o);
  const auto cb = poly_to_origin(b.coeffs, b.origin, o);
  r.origin = o;
  if (a.kind == PieceKind::Poly && b.kind == PieceKind::Poly) {
    r.kind = PieceKind::Poly;
    r.coeffs = poly_add(ca, cb);
  } else {
    r.kind = PieceKind::PolySine;
    r.coeffs = poly_add(ca, cb);
    const Piece& s = (a.kind == PieceKind::PolySine) ? a : b;
    r.amp = (a.kind == PieceKind::PolySine ? a.amp : 0.0) +
            (b.kind == PieceKind::PolySine ? b.amp : 0.0);
    r.freq = s.freq;
    r.phase = s.phase;
  }
  trim_poly(r.coeffs);
  return r;
}

}  // namespace detail

/// Merge of two breakpoint sets over a common domain.
inline std::vector<double> merged_breakpoints(const std::vector<const PiecewiseFunction*>& fs,
                                              const Interval& I) {
  std::vector<double> xs{I.lo, I.hi};
  for (const auto* f : fs) {
    for (double b : f->breakpoints())
      if (b > I.lo && b < I.hi) xs.push_back(b);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return std::abs(a - b) <= 1e-15; }),
           xs.end());
  return xs;
}

inline PiecewiseFunction add(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  const Interval df = f.domain(), dg = g.domain();
  if (df.lo != dg.lo || df.hi != dg.hi) throw BadParameters("add: domains must coincide");
  auto xs = merged_breakpoints({&f, &g}, df);
  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double m = 0.5 * (xs[i] + xs[i + 1]);
    Piece a = detail::slice(f.piece_at(m), xs[i], xs[i + 1]);
    Piece b = detail::slice(g.piece_at(m), xs[i], xs[i + 1]);
    if (!detail::addable(a, b)) throw BadParameters("add: unsupported piece kinds");
    out.push_back(detail::add_pieces(a, b));
  }
  return PiecewiseFunction(std::move(out));
}

inline PiecewiseFunction scale(const PiecewiseFunction& f, double s) {
  std::vector<Piece> out = f.pieces();
  for (Piece& p : out) {
    switch (p.kind) {
      case PieceKind::Poly:
      case PieceKind::PolySine:
        p.coeffs = detail::poly_scale(p.coeffs, s);
        p.amp *= s;
        break;
      case PieceKind::Power:
      case PieceKind::CosInvSq:
        p.scale *= s;
        p.offset *= s;
        break;
      case PieceKind::Samples:
        for (double& v : p.samples) v *= s;
        break;
      case PieceKind::OnePlusSinInv:
        throw BadParameters("scale: unsupported for 1+sin(1/x) piece");
    }
  }
  return PiecewiseFunction(std::move(out));
}

inline PiecewiseFunction add_constant(const PiecewiseFunction& f, double c) {
  return add(f, make_constant(f.domain(), c));
}

// ---------------------------------------------------------------------------
// Scalar root finding / extrema per piece.

namespace detail {

inline double bisect(const Piece& p, double c, double a, double b) {
  double fa = p.eval(a) - c;
  double fb = p.eval(b) - c;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = p.eval(m) - c;
    if (fm == 0.0 || 0.5 * (b - a) < 1e-16 * (1.0 + std::abs(m))) return m;
    if ((fa < 0) != (fm < 0)) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

// All real roots of poly(x) = 0 in [l,r] found through monotone bracketing on
// the derivative's critical points (recursively).
inline std::vector<double> poly_roots(const std::vector<double>& coeffs, double l, double r) {
  std::vector<double> c = coeffs;
  trim_poly(c);
  std::vector<double> out;
  if (c.size() == 1) return out;  // constant
  if (c.size() == 2) {
    const double x = -c[0] / c[1];
    if (x >= l && x <= r) out.push_back(x);
    return out;
  }
  const auto crit = poly_roots(poly_derivative(c), l, r);
  std::vector<double> nodes{l};
  nodes.insert(nodes.end(), crit.begin(), crit.end());
  nodes.push_back(r);
  std::sort(nodes.begin(), nodes.end());
  Piece tmp;
  tmp.kind = PieceKind::Poly;
  tmp.coeffs = c;
  tmp.lo = l;
  tmp.hi = r;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i], b = nodes[i + 1];
    if (b - a <= 0.0) continue;
    const double fa = poly_eval(c, a), fb = poly_eval(c, b);
    if (fa == 0.0 && (out.empty() || std::abs(out.back() - a) > 1e-14)) out.push_back(a);
    if ((fa < 0) != (fb < 0)) out.push_back(bisect(tmp, 0.0, a, b));
  }
  const double fr = poly_eval(c, r);
  if (fr == 0.0 && (out.empty() || std::abs(out.back() - r) > 1e-14)) out.push_back(r);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-13; }),
            out.end());
  return out;
}

// Scan-based sign-change roots for non-polynomial pieces.
inline std::vector<double> scan_roots(const Piece& p, double c, double l, double r, int n) {
  std::vector<double> out;
  double prev_x = l;
  double prev_f;
  try {
    prev_f = p.eval(l) - c;
  } catch (const OutOfDomain&) {
    prev_f = kNaN;
  }
  for (int i = 1; i <= n; ++i) {
    const double x = l + (r - l) * static_cast<double>(i) / static_cast<double>(n);
    double f;
    try {
      f = p.eval(x) - c;
    } catch (const OutOfDomain&) {
      f = kNaN;
    }
    if (std::isfinite(prev_f) && std::isfinite(f) && (prev_f < 0) != (f < 0))
      out.push_back(bisect(p, c, prev_x, x));
    prev_x = x;
    prev_f = f;
  }
  return out;
}

}  // namespace detail

/// Interior solutions of piece(x) = c on [l,r] (sign changes only).
inline std::vector<double> piece_roots(const Piece& p, double c, double l, double r) {
  switch (p.kind) {
    case PieceKind::Poly: {
      auto sh = p.coeffs;
      if (sh.empty()) sh = {0.0};
      sh[0] -= c;
      auto roots = detail::poly_roots(sh, l - p.origin, r - p.origin);
      for (double& x : roots) x += p.origin;
      return roots;
    }
    case PieceKind::Power: {
      if (p.scale == 0.0) return {};
      const double v = (c - p.offset) / p.scale;
      std::vector<double> out;
      if (v > 0.0 && p.exponent != 0.0) {
        const double t = std::pow(v, 1.0 / p.exponent);
        const double x = p.origin + p.sign * t;
        if (x > l && x < r) out.push_back(x);
      }
      return out;
    }
    case PieceKind::Samples: {
      std::vector<double> out;
      const std::size_t n = p.samples.size();
      const double dx = (p.hi - p.lo) / static_cast<double>(n - 1);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = p.samples[i] - c, b = p.samples[i + 1] - c;
        if ((a < 0) != (b < 0)) {
          const double t = a / (a - b);
          const double x = p.lo + dx * (static_cast<double>(i) + t);
          if (x > l && x < r) out.push_back(x);
        }
      }
      return out;
    }
    case PieceKind::PolySine: {
      const int n = std::max(512, static_cast<int>(8.0 * std::abs(p.freq) * (r - l)));
      return detail::scan_roots(p, c, l, r, std::min(n, 1 << 20));
    }
    case PieceKind::OnePlusSinInv:
    case PieceKind::CosInvSq: {
      const double span = (l > 0.0) ? (1.0 / l - 1.0 / r) : 1e6;
      const int n = std::max(512, static_cast<int>(8.0 * span));
      return detail::scan_roots(p, c, l, r, std::min(n, 1 << 21));
    }
  }
  return {};
}

/// Critical points (interior extrema candidates) of a piece on [l,r].
inline std::vector<double> piece_critical_points(const Piece& p, double l, double r) {
  switch (p.kind) {
    case PieceKind::Poly: {
      auto roots =
          detail::poly_roots(detail::poly_derivative(p.coeffs), l - p.origin, r - p.origin);
      for (double& x : roots) x += p.origin;
      return roots;
    }
    case PieceKind::Power:
      return {};  // monotone
    case PieceKind::Samples: {
      std::vector<double> out;
      const std::size_t n = p.samples.size();
      const double dx = (p.hi - p.lo) / static_cast<double>(n - 1);
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x = p.lo + dx * static_cast<double>(i);
        if (x > l && x < r) out.push_back(x);
      }
      return out;
    }
    case PieceKind::OnePlusSinInv: {
      // extrema where 1/x = pi/2 + k pi
      std::vector<double> out;
      const double pi = 4.0 * std::atan(1.0);
      if (l <= 0.0) return out;
      const double kmin = std::ceil((1.0 / r - 0.5 * pi) / pi);
      const double kmax = std::floor((1.0 / l - 0.5 * pi) / pi);
      if (kmax - kmin > 4096.0) return out;  // caller should use period shortcut
      for (double k = kmin; k <= kmax; k += 1.0) {
        const double x = 1.0 / (0.5 * pi + k * pi);
        if (x > l && x < r) out.push_back(x);
      }
      std::sort(out.begin(), out.end());
      return out;
    }
    case PieceKind::PolySine:
    case PieceKind::CosInvSq: {
      // derivative sign scan
      std::vector<double> out;
      const int n = (p.kind == PieceKind::PolySine)
                        ? std::max(512, static_cast<int>(8.0 * std::abs(p.freq) * (r - l)))
                        : std::max(2048, std::min(1 << 20, static_cast<int>(
                                                               8.0 * (1.0 / std::max(l, 1e-9)))));
      double px = l, pv = p.eval(l);
      double ppx = l, ppv = pv;
      for (int i = 1; i <= n; ++i) {
        const double x = l + (r - l) * static_cast<double>(i) / static_cast<double>(n);
        const double v = p.eval(x);
        if (i >= 2) {
          if ((pv - ppv) * (v - pv) < 0.0) out.push_back(px);
        }
        ppx = px;
        ppv = pv;
        px = x;
        pv = v;
      }
      return out;
    }
  }
  return {};
}

struct MinMax {
  double min = kInf;
  double max = -kInf;
  double argmin = 0.0;
  double argmax = 0.0;
};

/// Min/max of a piece over the closure of [l,r] (limit values included).
inline MinMax piece_min_max(const Piece& p, double l, double r) {
  MinMax mm;
  auto consider = [&](double x) {
    double v;
    try {
      v = p.limit_at(x);
    } catch (const OutOfDomain&) {
      return;
    }
    if (v < mm.min) {
      mm.min = v;
      mm.argmin = x;
    }
    if (v > mm.max) {
      mm.max = v;
      mm.argmax = x;
    }
  };
  consider(l);
  consider(r);
  if (p.kind == PieceKind::OnePlusSinInv && l > 0.0) {
    const double pi = 4.0 * std::atan(1.0);
    if (1.0 / l - 1.0 / r >= 2.0 * pi) {
      // at least a full period: exact range [0,2]
      mm.min = 0.0;
      mm.max = 2.0;
      const double k = std::ceil((1.0 / r - 1.5 * pi) / (2.0 * pi));
      mm.argmin = 1.0 / (1.5 * pi + 2.0 * pi * k);
      mm.argmax = mm.argmin;
      return mm;
    }
  }
  for (double x : piece_critical_points(p, l, r)) consider(x);
  if (p.kind == PieceKind::PolySine || p.kind == PieceKind::CosInvSq) {
    const int n = 4096;
    for (int i = 1; i < n; ++i)
      consider(l + (r - l) * static_cast<double>(i) / static_cast<double>(n));
  }
  return mm;
}

/// Monotone segmentation of a piece on [l,r]: returns split points
/// (l = s_0 < ... < s_k = r) with the piece monotone on each [s_i, s_{i+1}].
inline std::vector<double> monotone_splits(const Piece& p, double l, double r) {
  std::vector<double> s{l};
  for (double x : piece_critical_points(p, l, r))
    if (x > s.back() + 1e-15) s.push_back(x);
  if (r > s.back()) s.push_back(r);
  return s;
}

}  // namespace degen1d
