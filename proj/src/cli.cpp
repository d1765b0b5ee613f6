#include "gridopt/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "gridopt/benchmarks.hpp"
#include "gridopt/dsl.hpp"
#include "gridopt/io.hpp"

namespace gridopt::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int max_threads() {
  if (const char* env = std::getenv("GRIDOPT_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

std::string six_digits(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// "<stem>.run3.csv" when several runs share one output path.
std::string run_path(const std::string& base, int run, int repeat, const char* suffix) {
  std::string stem = base;
  std::string ext;
  if (auto dot = base.rfind('.'); dot != std::string::npos && dot > base.rfind('/')) {
    stem = base.substr(0, dot);
    ext = base.substr(dot);
  }
  std::string out = stem;
  if (repeat > 1) out += ".run" + std::to_string(run + 1);
  if (*suffix) out += suffix;
  return out + (std::string(suffix).empty() ? ext : std::string(ext.empty() ? ".json" : ext));
}

void write_outputs(const RunSpec& spec, int run, const GexResult& result, int m) {
  if (spec.out_path.empty()) return;
  const std::string design_path = run_path(spec.out_path, run, spec.repeat, "");
  std::ofstream df(design_path);
  if (!df) throw std::runtime_error("cannot write " + design_path);
  switch (spec.format) {
    case OutputFormat::csv: write_design_csv(df, result.design); break;
    case OutputFormat::table: write_design_table(df, result.design); break;
    case OutputFormat::json: df << design_json(result.design, result.report.phi, m) << '\n'; break;
  }
  std::string stem = spec.out_path;
  if (auto dot = stem.rfind('.'); dot != std::string::npos && dot > stem.rfind('/'))
    stem = stem.substr(0, dot);
  if (spec.repeat > 1) stem += ".run" + std::to_string(run + 1);
  std::ofstream rf(stem + ".report.json");
  rf << report_json(result.report, result.design, m) << '\n';
}

}  // namespace

Problem load_problem(const RunSpec& spec) {
  const bool has_id = spec.problem_id != 0;
  const bool has_file = !spec.model_path.empty();
  if (has_id == has_file)
    throw std::invalid_argument("exactly one problem source (--problem or --model) is required");
  if (has_id) {
    BenchmarkProblem b = benchmark(spec.problem_id);
    return Problem{std::move(b.grid), std::move(b.model),
                   "problem " + std::to_string(b.id), b.reparametrize_recommended};
  }
  const dsl::ModelFile mf = dsl::parse_model_file(read_file(spec.model_path));
  return Problem{dsl::grid_of(mf), dsl::model_of(mf), spec.model_path, false};
}

int cmd_run(const RunSpec& spec, std::ostream& out, std::ostream& err,
            std::vector<RunOutcome>* outcomes) {
  std::optional<Problem> problem;
  try {
    problem.emplace(load_problem(spec));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<std::optional<GexResult>> results(spec.repeat);
  std::vector<std::string> failures(spec.repeat);
  const int threads = std::min(max_threads(), spec.repeat);

  auto worker = [&](int first, int step) {
    for (int r = first; r < spec.repeat; r += step) {
      GexConfig cfg = spec.config;
      cfg.seed = spec.config.seed + static_cast<std::uint64_t>(r);
      try {
        results[r].emplace(run_gex(problem->grid, problem->model, cfg));
      } catch (const std::exception& e) {
        failures[r] = e.what();
      }
    }
  };
  if (threads <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    for (auto& th : pool) th.join();
  }

  for (int r = 0; r < spec.repeat; ++r) {
    if (!failures[r].empty()) {
      err << "error: run " << (r + 1) << " failed: " << failures[r] << '\n';
      return kExitNumerical;
    }
  }

  double t_min = std::numeric_limits<double>::infinity(), t_max = 0;
  for (int r = 0; r < spec.repeat; ++r) {
    const auto& rep = results[r]->report;
    double secs = 0;
    for (const auto& round : rep.rounds) secs += round.elapsed_ms / 1000.0;
    t_min = std::min(t_min, secs);
    t_max = std::max(t_max, secs);
    try {
      write_outputs(spec, r, *results[r], problem->model.m());
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    if (outcomes)
      outcomes->push_back(
          {rep.phi, results[r]->design.support_size(), secs, results[r]->design});
  }

  const std::string phi_str = six_digits(results[0]->report.phi);
  bool agree = true;
  for (const auto& res : results) agree = agree && six_digits(res->report.phi) == phi_str;
  if (agree) {
    out << problem->name << ": phi = " << phi_str << "  support = "
        << results[0]->design.support_size() << "  t = " << six_digits(t_min) << "-"
        << six_digits(t_max) << " s  (" << spec.repeat << " run" << (spec.repeat > 1 ? "s" : "")
        << ")\n";
  } else {
    out << problem->name << ": phi varies across runs:";
    for (const auto& res : results) out << ' ' << six_digits(res->report.phi);
    out << '\n';
  }
  if (spec.out_path.empty() && spec.repeat == 1) {
    switch (spec.format) {
      case OutputFormat::csv: write_design_csv(out, results[0]->design); break;
      case OutputFormat::table: write_design_table(out, results[0]->design); break;
      case OutputFormat::json:
        out << design_json(results[0]->design, results[0]->report.phi, problem->model.m()) << '\n';
        break;
    }
  }
  return kExitOk;
}

int cmd_verify(const std::string& design_path, const RunSpec& problem_spec, int probe_budget,
               std::ostream& out, std::ostream& err, double* bound_out) {
  std::optional<Problem> problem;
  std::optional<Design> design;
  try {
    problem.emplace(load_problem(problem_spec));
    std::ifstream in(design_path);
    if (!in) throw std::runtime_error("cannot open " + design_path);
    design.emplace(read_design_csv(in));
    for (const auto& p : design->points()) problem->grid.require_on_grid(p);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const Model& model = problem->model;
    const int m = model.m();
    const Eigen::MatrixXd Minv = information_matrix(*design, model).inverse();
    Eigen::VectorXd f(m), tmp(m);
    auto d_of = [&](const DesignPoint& x) {
      model.eval_into(x, f);
      tmp.noalias() = Minv * f;
      return f.dot(tmp);
    };

    double max_d = 0;
    std::size_t probed = 0;
    for (const DesignPoint& s : design->points()) {
      for (const DesignPoint& p : star_set(problem->grid, s)) {
        max_d = std::max(max_d, d_of(p));
        ++probed;
      }
    }
    for (const DesignPoint& p :
         local_search(problem->grid, model, *design, probe_budget, problem_spec.config.seed)) {
      max_d = std::max(max_d, d_of(p));
      ++probed;
    }

    const double phi = information_matrix(*design, model).criterion();
    const double bound = efficiency_lower_bound(m, max_d);
    if (bound_out) *bound_out = bound;
    out << "design: " << design->support_size() << " support points, phi = " << six_digits(phi)
        << '\n';
    out << "max variance found: " << six_digits(max_d) << " (m = " << m << ", " << probed
        << " star-set points + " << probe_budget << " hill climbs)\n";
    out << "efficiency bound: " << bound << '\n';
    out << "note: the bound is relative to the probed points only; it is not a certified\n"
           "      global bound unless the probe exhausted the grid.\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int cmd_list(std::ostream& out) {
  for (int id = 1; id <= kBenchmarkCount; ++id) {
    BenchmarkProblem b = benchmark(id);
    out << id << ": k = " << b.grid.k() << ", m = " << b.model.m() << ", grid ";
    for (int i = 0; i < b.grid.k(); ++i)
      out << (i ? "x" : "") << b.grid.levels(i).size();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", std::pow(10.0, b.grid.log10_size()));
    out << " ~ " << buf << " points — " << b.description << '\n';
  }
  return kExitOk;
}

}  // namespace gridopt::cli
