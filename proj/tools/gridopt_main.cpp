#include <CLI11.hpp>
#include <iostream>

#include "gridopt/cli.hpp"

namespace {

void add_problem_flags(CLI::App* cmd, gridopt::cli::RunSpec& spec) {
  auto* p = cmd->add_option("--problem", spec.problem_id, "builtin benchmark problem (1..10)")
                ->check(CLI::Range(1, 10));
  auto* f = cmd->add_option("--model", spec.model_path, "model file path");
  p->excludes(f);
  f->excludes(p);
}

void add_gex_flags(CLI::App* cmd, gridopt::GexConfig& cfg) {
  cmd->add_option("--eff-opt", cfg.eff_opt, "inner solver efficiency bound")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--eff-grp", cfg.eff_grp, "support pooling acceptance bound")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--eff-stop", cfg.eff_stop, "outer loop stopping ratio")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--n-loc", cfg.n_loc, "variance-function hill climbs per round")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--n-rnd", cfg.n_rnd, "random points in the initial exploration set")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", cfg.seed, "RNG seed");
  cmd->add_flag("--reparametrize", cfg.reparametrize,
                "rescale the model by the inverse square root of the initial information matrix");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridopt: D-optimal experimental designs on large factor grids"};
  app.require_subcommand(1);

  gridopt::cli::RunSpec run_spec;
  std::string format = "table";
  auto* run = app.add_subcommand("run", "compute a D-optimal design");
  add_problem_flags(run, run_spec);
  add_gex_flags(run, run_spec.config);
  run->add_option("--repeat", run_spec.repeat, "independent runs with seeds seed, seed+1, ...")
      ->check(CLI::PositiveNumber);
  run->add_option("--format", format, "output format: csv|json|table")
      ->check(CLI::IsMember({"csv", "json", "table"}));
  run->add_option("--out", run_spec.out_path, "output file (per-run design + report)");

  gridopt::cli::RunSpec verify_spec;
  std::string design_path;
  int probe_budget = 500;
  auto* verify = app.add_subcommand("verify", "equivalence-theorem bound for a design file");
  add_problem_flags(verify, verify_spec);
  verify->add_option("design", design_path, "design CSV file")->required();
  verify->add_option("--probes", probe_budget, "number of variance hill climbs")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", verify_spec.config.seed, "RNG seed");

  auto* list = app.add_subcommand("list", "list the builtin benchmark problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gridopt::cli::kExitUsage;
  }

  if (run->parsed()) {
    run_spec.format = format == "csv"    ? gridopt::cli::OutputFormat::csv
                      : format == "json" ? gridopt::cli::OutputFormat::json
                                         : gridopt::cli::OutputFormat::table;
    return gridopt::cli::cmd_run(run_spec, std::cout, std::cerr);
  }
  if (verify->parsed())
    return gridopt::cli::cmd_verify(design_path, verify_spec, probe_budget, std::cout, std::cerr);
  if (list->parsed()) return gridopt::cli::cmd_list(std::cout);
  return gridopt::cli::kExitUsage;
}
