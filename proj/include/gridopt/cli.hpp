#ifndef GRIDOPT_CLI_HPP
#define GRIDOPT_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gridopt/gex.hpp"

namespace gridopt::cli {

// Exit codes are a stable scripting contract.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

enum class OutputFormat { csv, json, table };

struct RunSpec {
  int problem_id = 0;       // 1..10, or 0 when a model file is given
  std::string model_path;   // exactly one of problem_id / model_path is set
  GexConfig config;
  OutputFormat format = OutputFormat::table;
  std::string out_path;     // empty: print the design to stdout
  int repeat = 1;           // seeds seed, seed+1, ...
};

struct RunOutcome {
  double phi = 0;
  int support_size = 0;
  double seconds = 0;
  std::optional<Design> design;
};

/// A resolved problem: grid plus model, from a builtin id or a model file.
struct Problem {
  FactorGrid grid;
  Model model;
  std::string name;
  bool reparametrize_recommended = false;
};

Problem load_problem(const RunSpec& spec);

int cmd_run(const RunSpec& spec, std::ostream& out, std::ostream& err,
            std::vector<RunOutcome>* outcomes = nullptr);
int cmd_verify(const std::string& design_path, const RunSpec& problem_spec, int probe_budget,
               std::ostream& out, std::ostream& err, double* bound_out = nullptr);
int cmd_list(std::ostream& out);

}  // namespace gridopt::cli

#endif
