#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "degen1d/errors.hpp"
#include "degen1d/piecewise.hpp"
#include "degen1d/quadrature.hpp"
#include "degen1d/weight.hpp"

namespace degen1d {

/// Oscillating block weight on (0,2): w = h^-2 x^gamma on I_h^1 and
/// h^-2 x^beta on I_h^2 for the dyadic-harmonic blocks
/// I_h^1 = (1/(h+1), m_h], I_h^2 = (m_h, 1/h], m_h = (1/(h+1)+1/h)/2,
/// mirrored by w(x) = w(2-x), with a constant continuation below 1/(H+1).
inline Weight counterexample_weight(double beta, double gamma, int blocks) {
  if (!(beta > 1.0) || !(gamma > 0.0 && gamma < 1.0) || blocks < 1)
    throw BadParameters("need beta > 1, gamma in (0,1), blocks >= 1");
  const int H = blocks;
  std::vector<Piece> ps;

  const double tail_hi = 1.0 / static_cast<double>(H + 1);
  const double tail_value =
      std::pow(static_cast<double>(H), -2.0) * std::pow(tail_hi, gamma);
  {
    Piece t;
    t.lo = 0.0;
    t.hi = tail_hi;
    t.kind = PieceKind::Poly;
    t.coeffs = {tail_value};
    ps.push_back(t);
  }
  auto power_piece = [](double lo, double hi, double scale, double expo, double origin,
                        int sign) {
    Piece p;
    p.lo = lo;
    p.hi = hi;
    p.kind = PieceKind::Power;
    p.scale = scale;
    p.exponent = expo;
    p.origin = origin;
    p.sign = sign;
    return p;
  };
  for (int h = H; h >= 1; --h) {
    const double hl = 1.0 / static_cast<double>(h + 1);
    const double hr = 1.0 / static_cast<double>(h);
    const double m = 0.5 * (hl + hr);
    const double c = std::pow(static_cast<double>(h), -2.0);
    ps.push_back(power_piece(hl, m, c, gamma, 0.0, +1));
    ps.push_back(power_piece(m, hr, c, beta, 0.0, +1));
  }
  // mirror onto (1,2): w(x) = w(2-x)
  const std::size_t n_direct = ps.size();
  for (std::size_t i = n_direct; i-- > 0;) {
    const Piece& src = ps[i];
    if (src.hi <= 0.0) continue;
    Piece m = src;
    m.lo = 2.0 - src.hi;
    m.hi = 2.0 - src.lo;
    if (m.kind == PieceKind::Power) {
      m.origin = 2.0;
      m.sign = -1;
    }
    ps.push_back(m);
  }
  return make_weight(PiecewiseFunction(std::move(ps)));
}

/// Closed form of the auxiliary weight on (0, 1/2) for the block weight
/// (constant h^-2 m_h^beta on I_h^1, h^-2 x^beta on I_h^2). Only valid for
/// x > 1/(blocks+1).
inline double counterexample_hat_closed_form(double beta, double /*gamma*/, double x) {
  if (!(x > 0.0 && x < 0.5)) throw BadParameters("closed form stated on (0, 1/2)");
  const int h = static_cast<int>(std::floor(1.0 / x));
  const double hl = 1.0 / static_cast<double>(h + 1);
  const double hr = 1.0 / static_cast<double>(h);
  const double m = 0.5 * (hl + hr);
  const double c = std::pow(static_cast<double>(h), -2.0);
  if (x <= m) return c * std::pow(m, beta);
  return c * std::pow(x, beta);
}

/// Partial-sum diagnostics of the block counterexample. S_uw(H) accumulates
/// integral u w over blocks h <= H, S_uhat(H) the same against the auxiliary
/// weight, and tv_K the pairing total variation on a fixed compact K. The
/// singular test function is u(x) = x^p (p = -4 reproduces the intended
/// divergent integral u w; see the README note on exponents).
struct CounterexampleDiagnostics {
  std::vector<int> schedule;
  std::vector<double> s_uw;
  std::vector<double> s_uhat;
  std::vector<double> tv_k;
  double fitted_growth_exponent = 0.0;
  bool s_uhat_cauchy = false;
  bool tv_stable = false;
  double last_uhat_difference = 0.0;
};

namespace detail {

// exact integral of x^a over [l, r] (l > 0)
inline double power_int(double a, double l, double r) {
  if (a == -1.0) return std::log(r / l);
  return (std::pow(r, a + 1.0) - std::pow(l, a + 1.0)) / (a + 1.0);
}

}  // namespace detail

inline CounterexampleDiagnostics counterexample_diagnostics(double beta, double gamma,
                                                            const std::vector<int>& h_schedule,
                                                            const Interval& K,
                                                            double u_exponent = -4.0) {
  if (!(beta > 1.0) || !(gamma > 0.0 && gamma < 1.0))
    throw BadParameters("need beta > 1, gamma in (0,1)");
  if (h_schedule.empty()) throw BadParameters("empty block schedule");
  const int H_max = *std::max_element(h_schedule.begin(), h_schedule.end());
  const double p = u_exponent;

  // per-block contributions, exact antiderivatives
  std::vector<double> uw_block(static_cast<std::size_t>(H_max) + 1, 0.0);
  std::vector<double> uhat_block(static_cast<std::size_t>(H_max) + 1, 0.0);
  std::vector<double> tv_block(static_cast<std::size_t>(H_max) + 1, 0.0);
  for (int h = 1; h <= H_max; ++h) {
    const double hl = 1.0 / static_cast<double>(h + 1);
    const double hr = 1.0 / static_cast<double>(h);
    const double m = 0.5 * (hl + hr);
    const double c = std::pow(static_cast<double>(h), -2.0);
    uw_block[static_cast<std::size_t>(h)] =
        c * (detail::power_int(gamma + p, hl, m) + detail::power_int(beta + p, m, hr));
    const double hat1 = c * std::pow(m, beta);  // constant on I_h^1
    uhat_block[static_cast<std::size_t>(h)] =
        hat1 * detail::power_int(p, hl, m) + c * detail::power_int(beta + p, m, hr);
    // |u'| w = |p| x^{p-1} * w
    const double ap = std::abs(p);
    tv_block[static_cast<std::size_t>(h)] =
        ap * c *
        (detail::power_int(gamma + p - 1.0, hl, m) + detail::power_int(beta + p - 1.0, m, hr));
  }

  CounterexampleDiagnostics diag;
  diag.schedule = h_schedule;
  double uw = 0.0, uhat = 0.0;
  int cursor = 0;
  for (int H : h_schedule) {
    while (cursor < H) {
      ++cursor;
      uw += uw_block[static_cast<std::size_t>(cursor)];
      uhat += uhat_block[static_cast<std::size_t>(cursor)];
    }
    diag.s_uw.push_back(uw);
    diag.s_uhat.push_back(uhat);
    // tv over K: blocks intersecting K only (clipped exactly)
    double tv = 0.0;
    for (int h = 1; h <= H; ++h) {
      const double hl = 1.0 / static_cast<double>(h + 1);
      const double hr = 1.0 / static_cast<double>(h);
      const double m = 0.5 * (hl + hr);
      const double c = std::pow(static_cast<double>(h), -2.0);
      const double ap = std::abs(p);
      const double l1 = std::max(hl, K.lo), r1 = std::min(m, K.hi);
      if (r1 > l1) tv += ap * c * detail::power_int(gamma + p - 1.0, l1, r1);
      const double l2 = std::max(m, K.lo), r2 = std::min(hr, K.hi);
      if (r2 > l2) tv += ap * c * detail::power_int(beta + p - 1.0, l2, r2);
    }
    diag.tv_k.push_back(tv);
  }

  // Growth exponent of S_uw ~ c H^alpha + const, estimated from schedule
  // increments so the additive constant cancels: increments scale like
  // H^{alpha-1}, hence alpha = 1 + slope of log(dS) vs log(H).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double n = 0;
  for (std::size_t i = 1; i < h_schedule.size(); ++i) {
    const double ds = diag.s_uw[i] - diag.s_uw[i - 1];
    const double dh = static_cast<double>(h_schedule[i] - h_schedule[i - 1]);
    if (!(ds > 0.0) || !(dh > 0.0)) continue;
    const double x = std::log(0.5 * static_cast<double>(h_schedule[i] + h_schedule[i - 1]));
    const double y = std::log(ds / dh);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1.0;
  }
  diag.fitted_growth_exponent =
      (n >= 2.0) ? 1.0 + (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;

  if (diag.s_uhat.size() >= 2) {
    diag.last_uhat_difference =
        std::abs(diag.s_uhat.back() - diag.s_uhat[diag.s_uhat.size() - 2]);
    diag.s_uhat_cauchy = true;
    for (std::size_t i = 2; i < diag.s_uhat.size(); ++i) {
      const double d0 = std::abs(diag.s_uhat[i - 1] - diag.s_uhat[i - 2]);
      const double d1 = std::abs(diag.s_uhat[i] - diag.s_uhat[i - 1]);
      if (d1 > d0 + 1e-15) diag.s_uhat_cauchy = false;
    }
  }
  if (!diag.tv_k.empty()) {
    const double ref = diag.tv_k.back();
    diag.tv_stable = true;
    for (std::size_t i = 0; i < diag.tv_k.size(); ++i) {
      if (h_schedule[i] < 20) continue;
      if (std::abs(diag.tv_k[i] - ref) > 1e-4 * std::max(1.0, std::abs(ref)))
        diag.tv_stable = false;
    }
  }
  return diag;
}

}  // namespace degen1d
