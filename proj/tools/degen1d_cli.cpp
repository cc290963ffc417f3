#include <CLI11.hpp>

#include "degen1d/cli_app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"one-dimensional degenerate-weight variational toolkit"};
  app.require_subcommand(1);

  degen1d::RunConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--weight", cfg.weight_path, "weight spec (JSON)");
    sub->add_option("--function", cfg.function_path, "function spec (JSON)");
    sub->add_option("--resolution", cfg.resolution, "degeneracy scan resolution");
    sub->add_option("--panels", cfg.panels, "quadrature panels per span");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--seed", cfg.seed, "corpus seed");
    sub->add_option("--count", cfg.count, "corpus size");
    sub->add_option("--max-intervals", cfg.max_intervals, "decomposition truncation cap");
    sub->add_option("--beta", cfg.beta, "counterexample beta (> 1)");
    sub->add_option("--gamma", cfg.gamma, "counterexample gamma in (0,1)");
    sub->add_option("--blocks", cfg.blocks, "counterexample block count");
    sub->add_option("--q-exponent", cfg.q_exponent, "growth/Poincare exponent q");
  };
  for (const char* name : {"analyze", "hat", "plot", "pair", "poincare", "relax",
                           "counterexample", "a1"}) {
    add_common(app.add_subcommand(name));
  }

  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();
  return degen1d::run(cfg);
}
