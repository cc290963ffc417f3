#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "degen1d/piecewise.hpp"

namespace degen1d {

namespace detail {

// Portable uniform double in [0,1) from the raw 64-bit stream.
inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_double(rng);
}

}  // namespace detail

/// Continuous piecewise cubics with random interior breakpoints kept a 1%
/// buffer away from the domain endpoints. Continuity is enforced by chaining
/// the constant coefficient across pieces; derivatives may jump.
inline PiecewiseFunction random_piecewise_cubic(std::mt19937_64& rng, const Interval& dom,
                                                int n_pieces, double coeff_range = 2.0) {
  const double buffer = 0.01 * dom.length();
  std::vector<double> bps{dom.lo};
  for (int i = 0; i + 1 < n_pieces; ++i)
    bps.push_back(detail::uniform_in(rng, dom.lo + buffer, dom.hi - buffer));
  bps.push_back(dom.hi);
  std::sort(bps.begin(), bps.end());
  // enforce a minimal gap so pieces stay well separated
  for (std::size_t i = 1; i + 1 < bps.size(); ++i)
    if (bps[i] - bps[i - 1] < 1e-3 * dom.length())
      bps[i] = bps[i - 1] + 1e-3 * dom.length();

  std::vector<Piece> ps;
  double carry = detail::uniform_in(rng, -coeff_range, coeff_range);
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    Piece p;
    p.lo = bps[i];
    p.hi = bps[i + 1];
    p.kind = PieceKind::Poly;
    const double c1 = detail::uniform_in(rng, -coeff_range, coeff_range);
    const double c2 = detail::uniform_in(rng, -coeff_range, coeff_range);
    const double c3 = detail::uniform_in(rng, -coeff_range, coeff_range);
    // value at p.lo equals carry: solve c0
    const double x0 = p.lo;
    const double c0 = carry - ((c3 * x0 + c2) * x0 + c1) * x0;
    p.coeffs = {c0, c1, c2, c3};
    carry = p.eval(p.hi);
    ps.push_back(std::move(p));
  }
  return PiecewiseFunction(std::move(ps));
}

inline std::vector<PiecewiseFunction> random_corpus(std::uint64_t seed, const Interval& dom,
                                                    int count, int max_pieces = 4,
                                                    double coeff_range = 2.0) {
  std::mt19937_64 rng(seed);
  std::vector<PiecewiseFunction> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int pieces = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_pieces));
    out.push_back(random_piecewise_cubic(rng, dom, pieces, coeff_range));
  }
  return out;
}

}  // namespace degen1d
