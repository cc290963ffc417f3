#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "degen1d/corpus.hpp"
#include "degen1d/counterexample.hpp"
#include "degen1d/degeneracy.hpp"
#include "degen1d/hat_weight.hpp"
#include "degen1d/muckenhoupt.hpp"
#include "degen1d/pairing.hpp"
#include "degen1d/poincare.hpp"
#include "degen1d/relaxation.hpp"
#include "degen1d/report_io.hpp"
#include "degen1d/spec_io.hpp"

namespace degen1d {

struct RunConfig;  // cli_app.hpp

namespace cli_detail {

inline void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << body;
}

inline void write_json(const std::string& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

inline std::string joined(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return dir + "/" + name;
}

}  // namespace cli_detail

template <class Config>
int cli_analyze(const Config& cfg, const QuadratureConfig& q) {
  (void)q;
  if (cfg.weight_path.empty()) throw ParseError("analyze needs --weight");
  const Weight w = load_weight_spec(cfg.weight_path);
  const auto dec = detect_intervals(w, w.domain(), cfg.resolution, cfg.max_intervals);
  CsvWriter csv({"index", "a_i", "b_i"});
  for (std::size_t i = 0; i < dec.intervals.size(); ++i)
    csv.append_row({std::to_string(i), format_float(dec.intervals[i].lo),
                    format_float(dec.intervals[i].hi)});
  csv.write(cli_detail::joined(cfg.out_dir, "analyze.csv"));
  json summary;
  summary["n_w"] = dec.n_w;
  summary["truncated"] = dec.truncated;
  summary["zero_set_points"] = dec.zero_set_points;
  cli_detail::write_json(cli_detail::joined(cfg.out_dir, "analyze.json"), summary);
  return 0;
}

namespace cli_detail {

inline std::vector<PlotSeries> weight_hat_series(const Weight& w, const HatWeight& hw,
                                                 int points = 801) {
  const Interval d = w.domain();
  PlotSeries sw{"w", {}, {}}, sh{"hat w", {}, {}};
  for (int k = 0; k < points; ++k) {
    const double x =
        d.lo + d.length() * (static_cast<double>(k) + 0.5) / static_cast<double>(points);
    sw.x.push_back(x);
    sw.y.push_back(w.f.evaluate(x));
    sh.x.push_back(x);
    sh.y.push_back(hw.evaluate(x));
  }
  return {sw, sh};
}

}  // namespace cli_detail

template <class Config>
int cli_hat(const Config& cfg, const QuadratureConfig& q) {
  (void)q;
  if (cfg.weight_path.empty()) throw ParseError("hat needs --weight");
  const Weight w = load_weight_spec(cfg.weight_path);
  const auto dec = detect_intervals(w, w.domain(), cfg.resolution, cfg.max_intervals);
  const HatWeight hw = build_hat(w, dec);
  CsvWriter csv({"x", "w", "hat_w"});
  const Interval d = w.domain();
  const int points = 801;
  for (int k = 0; k < points; ++k) {
    const double x =
        d.lo + d.length() * (static_cast<double>(k) + 0.5) / static_cast<double>(points);
    csv.append_numeric({x, w.f.evaluate(x), hw.evaluate(x)});
  }
  csv.write(cli_detail::joined(cfg.out_dir, "hat.csv"));
  emit_plot(cli_detail::weight_hat_series(w, hw),
            cli_detail::joined(cfg.out_dir, "hat.svg"));
  return 0;
}

template <class Config>
int cli_plot(const Config& cfg, const QuadratureConfig& q) {
  (void)q;
  if (cfg.weight_path.empty()) throw ParseError("plot needs --weight");
  const Weight w = load_weight_spec(cfg.weight_path);
  const auto dec = detect_intervals(w, w.domain(), cfg.resolution, cfg.max_intervals);
  const HatWeight hw = build_hat(w, dec);
  emit_plot(cli_detail::weight_hat_series(w, hw),
            cli_detail::joined(cfg.out_dir, "plot.svg"));
  return 0;
}

template <class Config>
int cli_pair(const Config& cfg, const QuadratureConfig& q) {
  if (cfg.weight_path.empty() || cfg.function_path.empty())
    throw ParseError("pair needs --weight and --function");
  const Weight w = load_weight_spec(cfg.weight_path);
  const PiecewiseFunction u = load_function_spec(cfg.function_path);
  const auto dec = detect_intervals(w, w.domain(), cfg.resolution, cfg.max_intervals);
  const HatWeight hw = build_hat(w, dec);

  // default test function: bump on the middle half of the domain
  const Interval d = w.domain();
  const Interval supp{0.75 * d.lo + 0.25 * d.hi, 0.25 * d.lo + 0.75 * d.hi};
  const PiecewiseFunction phi = make_bump(d, supp);

  PairingReport rep;
  const IntegralResult pv = pairing_apply(w, u, phi, q);
  rep.test_value = pv.value;
  rep.quadrature_error = pv.error;
  try {
    double tv = 0.0;
    for (const auto& I : dec.intervals) {
      const IntegralResult r = pairing_total_variation(w, u, I, q);
      tv += r.value;
      rep.quadrature_error += r.error;
    }
    rep.tv = tv;
    rep.tv_finite = true;
  } catch (const NonIntegrable&) {
    rep.tv = kInf;
    rep.tv_finite = false;
  }
  json doc;
  doc["test_value"] = rep.test_value;
  doc["tv"] = rep.tv_finite ? json(rep.tv) : json("infinite");
  doc["tv_finite"] = rep.tv_finite;
  doc["quadrature_error"] = rep.quadrature_error;
  const DomMembership m = dom_w_membership(w, u, dec, hw, q);
  doc["dom_w"] = {{"in_w11_loc", m.in_w11_loc},
                  {"pairing_tv_finite", m.pairing_tv_finite},
                  {"verdict", m.verdict}};
  if (m.norm) doc["dom_w"]["norm"] = *m.norm;
  cli_detail::write_json(cli_detail::joined(cfg.out_dir, "pair.json"), doc);
  return 0;
}

template <class Config>
int cli_poincare(const Config& cfg, const QuadratureConfig& q) {
  if (cfg.weight_path.empty()) throw ParseError("poincare needs --weight");
  const Weight w = load_weight_spec(cfg.weight_path);
  const auto dec = detect_intervals(w, w.domain(), cfg.resolution, cfg.max_intervals);
  const HatWeight hw = build_hat(w, dec);
  const auto corpus = random_corpus(cfg.seed, w.domain(), cfg.count);
  const BatchReport br = batch_verify(w, hw, dec, corpus, q);
  CsvWriter csv({"id", "lhs", "rhs", "margin"});
  for (std::size_t k = 0; k < br.reports.size(); ++k)
    csv.append_row({std::to_string(k), format_float(br.reports[k].lhs),
                    format_float(br.reports[k].rhs), format_float(br.reports[k].margin)});
  csv.write(cli_detail::joined(cfg.out_dir, "poincare.csv"));
  json doc;
  doc["count"] = br.reports.size();
  doc["failures"] = br.failures;
  doc["verdict"] = br.all_pass;
  cli_detail::write_json(cli_detail::joined(cfg.out_dir, "poincare.json"), doc);
  return br.all_pass ? 0 : 1;
}

template <class Config>
int cli_relax(const Config& cfg, const QuadratureConfig& q) {
  if (cfg.weight_path.empty() || cfg.function_path.empty())
    throw ParseError("relax needs --weight and --function");
  const Weight w = load_weight_spec(cfg.weight_path);
  const PiecewiseFunction u = load_function_spec(cfg.function_path);
  const auto dec = detect_intervals(w, w.domain(), cfg.resolution, cfg.max_intervals);
  const HatWeight hw = build_hat(w, dec);

  const RelaxedValue fb = relaxed_functional(w, u, dec, hw, q);
  CsvWriter csv({"h", "l1_hat_error", "energy", "energy_gap"});
  std::vector<RecoveryStep> steps;
  bool monotone = true;
  for (int h : {8, 16, 32, 64}) {
    steps.push_back(build_recovery(w, hw, dec, u, h, q));
    const RecoveryStep& s = steps.back();
    csv.append_row({std::to_string(h), format_float(s.l1_hat_error), format_float(s.energy),
                    s.energy_gap ? format_float(*s.energy_gap) : "nan"});
  }
  for (std::size_t k = 1; k < steps.size(); ++k) {
    if (steps[k].l1_hat_error > 1.05 * steps[k - 1].l1_hat_error + 1e-14) monotone = false;
    if (steps[k].energy_gap && steps[k - 1].energy_gap &&
        *steps[k].energy_gap > 1.05 * *steps[k - 1].energy_gap + 1e-14)
      monotone = false;
  }
  csv.write(cli_detail::joined(cfg.out_dir, "relax.csv"));
  json doc;
  doc["fbar_finite"] = fb.finite;
  if (fb.finite) doc["fbar"] = *fb.value;
  doc["monotone"] = monotone;
  bool final_ok = true;
  if (fb.finite && steps.back().energy_gap)
    final_ok = *steps.back().energy_gap <= 1e-2 * (1.0 + *fb.value);
  doc["final_gap_ok"] = final_ok;
  doc["verdict"] = monotone && final_ok;
  cli_detail::write_json(cli_detail::joined(cfg.out_dir, "relax.json"), doc);
  return (monotone && final_ok) ? 0 : 1;
}

template <class Config>
int cli_counterexample(const Config& cfg, const QuadratureConfig& q) {
  (void)q;
  std::vector<int> schedule;
  for (int H = 10; H <= std::max(10, cfg.blocks); H += 10) schedule.push_back(H);
  const auto diag =
      counterexample_diagnostics(cfg.beta, cfg.gamma, schedule, {0.25, 0.5});
  CsvWriter csv({"H", "S_uw", "S_uhat", "tv_K"});
  for (std::size_t k = 0; k < diag.schedule.size(); ++k)
    csv.append_row({std::to_string(diag.schedule[k]), format_float(diag.s_uw[k]),
                    format_float(diag.s_uhat[k]), format_float(diag.tv_k[k])});
  csv.write(cli_detail::joined(cfg.out_dir, "counterexample.csv"));
  json doc;
  doc["beta"] = cfg.beta;
  doc["gamma"] = cfg.gamma;
  doc["blocks"] = cfg.blocks;
  doc["fitted_growth_exponent"] = diag.fitted_growth_exponent;
  doc["expected_exponent"] = 1.0 - cfg.gamma;
  doc["s_uhat_cauchy"] = diag.s_uhat_cauchy;
  doc["last_uhat_difference"] = diag.last_uhat_difference;
  doc["tv_stable"] = diag.tv_stable;
  const bool verdict = diag.s_uhat_cauchy && diag.tv_stable &&
                       std::abs(diag.fitted_growth_exponent - (1.0 - cfg.gamma)) <= 0.1;
  doc["verdict"] = verdict;
  cli_detail::write_json(cli_detail::joined(cfg.out_dir, "counterexample.json"), doc);
  return verdict ? 0 : 1;
}

template <class Config>
int cli_a1(const Config& cfg, const QuadratureConfig& q) {
  if (cfg.weight_path.empty()) throw ParseError("a1 needs --weight");
  const Weight w = load_weight_spec(cfg.weight_path);
  const A1Report rep = a1_constant(w, w.domain(), q, 20, 64, true);
  CsvWriter csv({"x", "r", "ratio"});
  for (const auto& s : rep.samples) csv.append_numeric({s[0], s[1], s[2]});
  csv.write(cli_detail::joined(cfg.out_dir, "a1.csv"));
  json doc;
  doc["best_c"] = rep.best_c;
  if (rep.violating_ball)
    doc["violating_ball"] = {rep.violating_ball->first, rep.violating_ball->second};
  doc["centers"] = rep.centers;
  doc["radii"] = rep.radii;
  cli_detail::write_json(cli_detail::joined(cfg.out_dir, "a1.json"), doc);
  return 0;
}

}  // namespace degen1d
