#ifndef GRIDOPT_BENCHMARKS_HPP
#define GRIDOPT_BENCHMARKS_HPP

#include <string>

#include "gridopt/grid.hpp"
#include "gridopt/model.hpp"

namespace gridopt {

/// One of the ten built-in benchmark problems.
struct BenchmarkProblem {
  int id;
  FactorGrid grid;
  Model model;
  std::string description;
  bool reparametrize_recommended;  // true only for problem 10
};

/// id in 1..10.
BenchmarkProblem benchmark(int id);

/// The same problem expressed in the model-file format (used by tests and as
/// CLI examples).
std::string benchmark_model_source(int id);

constexpr int kBenchmarkCount = 10;

}  // namespace gridopt

#endif
