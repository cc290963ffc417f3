#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "degen1d/cli_reports.hpp"

namespace degen1d {

/// Orchestration config shared by every subcommand. Identical configs (and
/// seeds) produce byte-identical CSV/JSON/SVG artifacts.
struct RunConfig {
  std::string command;
  std::string weight_path;
  std::string function_path;
  std::string out_dir = ".";
  double resolution = 1e-4;
  int panels = 16;
  int max_intervals = 64;
  std::uint64_t seed = 1;
  int count = 100;
  double beta = 2.0;
  double gamma = 0.5;
  int blocks = 50;
  double q_exponent = 2.0;
};

inline int run(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  try {
    fs::create_directories(cfg.out_dir);
    QuadratureConfig q;
    q.panels = cfg.panels;

    if (cfg.command == "analyze") return cli_analyze(cfg, q);
    if (cfg.command == "hat") return cli_hat(cfg, q);
    if (cfg.command == "plot") return cli_plot(cfg, q);
    if (cfg.command == "pair") return cli_pair(cfg, q);
    if (cfg.command == "poincare") return cli_poincare(cfg, q);
    if (cfg.command == "relax") return cli_relax(cfg, q);
    if (cfg.command == "counterexample") return cli_counterexample(cfg, q);
    if (cfg.command == "a1") return cli_a1(cfg, q);
    std::cerr << "unknown command: " << cfg.command << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const BadParameters& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace degen1d
