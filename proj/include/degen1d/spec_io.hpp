#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "degen1d/counterexample.hpp"
#include "degen1d/errors.hpp"
#include "degen1d/piecewise.hpp"
#include "degen1d/weight.hpp"

namespace degen1d {

using json = nlohmann::ordered_json;

/// Function/weight spec document:
/// { "domain": [a,b],
///   "pieces": [ { "range": [l,r], "kind": "...", "params": {...} } ] }
/// kinds: poly {coeffs}, one_plus_sin_inv {}, samples {values},
///        counterexample {beta,gamma,blocks}, power {scale,exponent,origin,sign},
///        poly_sine {coeffs,amp,freq,phase}.
inline PiecewiseFunction parse_function_spec(const json& doc) {
  if (!doc.contains("domain") || !doc.contains("pieces"))
    throw ParseError("spec needs 'domain' and 'pieces'");
  const auto dom = doc.at("domain");
  if (!dom.is_array() || dom.size() != 2) throw ParseError("'domain' must be [a,b]");
  const Interval domain = make_interval(dom.at(0).get<double>(), dom.at(1).get<double>());

  std::vector<Piece> pieces;
  for (const auto& pj : doc.at("pieces")) {
    const auto rng = pj.at("range");
    const double lo = rng.at(0).get<double>(), hi = rng.at(1).get<double>();
    const std::string kind = pj.at("kind").get<std::string>();
    const json params = pj.contains("params") ? pj.at("params") : json::object();

    if (kind == "counterexample") {
      Weight cw = counterexample_weight(params.at("beta").get<double>(),
                                        params.at("gamma").get<double>(),
                                        params.at("blocks").get<int>());
      for (const Piece& p : cw.f.pieces()) pieces.push_back(p);
      continue;
    }
    Piece p;
    p.lo = lo;
    p.hi = hi;
    if (kind == "poly") {
      p.kind = PieceKind::Poly;
      p.coeffs = params.at("coeffs").get<std::vector<double>>();
    } else if (kind == "one_plus_sin_inv") {
      p.kind = PieceKind::OnePlusSinInv;
    } else if (kind == "samples") {
      p.kind = PieceKind::Samples;
      p.samples = params.at("values").get<std::vector<double>>();
      if (p.samples.size() < 2) throw ParseError("samples piece needs >= 2 values");
    } else if (kind == "power") {
      p.kind = PieceKind::Power;
      p.scale = params.at("scale").get<double>();
      p.exponent = params.at("exponent").get<double>();
      p.origin = params.value("origin", 0.0);
      p.sign = params.value("sign", 1);
      p.offset = params.value("offset", 0.0);
    } else if (kind == "poly_sine") {
      p.kind = PieceKind::PolySine;
      p.coeffs = params.at("coeffs").get<std::vector<double>>();
      p.amp = params.value("amp", 0.0);
      p.freq = params.value("freq", 1.0);
      p.phase = params.value("phase", 0.0);
    } else {
      throw ParseError("unknown piece kind: " + kind);
    }
    pieces.push_back(std::move(p));
  }
  if (pieces.empty()) throw ParseError("spec has no pieces");
  PiecewiseFunction f{std::move(pieces)};
  const Interval d = f.domain();
  if (std::abs(d.lo - domain.lo) > 1e-12 || std::abs(d.hi - domain.hi) > 1e-12)
    throw ParseError("pieces do not cover the declared domain");
  return f;
}

inline Weight parse_weight_spec(const json& doc) { return make_weight(parse_function_spec(doc)); }

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return doc;
}

inline PiecewiseFunction load_function_spec(const std::string& path) {
  return parse_function_spec(load_json_file(path));
}

inline Weight load_weight_spec(const std::string& path) {
  return parse_weight_spec(load_json_file(path));
}

}  // namespace degen1d
