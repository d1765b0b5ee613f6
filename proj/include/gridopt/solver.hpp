#ifndef GRIDOPT_SOLVER_HPP
#define GRIDOPT_SOLVER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gridopt/design.hpp"
#include "gridopt/info_matrix.hpp"
#include "gridopt/model.hpp"

namespace gridopt {

struct SolverConfig {
  double eff_opt = 1.0 - 1e-9;  // efficiency bound certifying the stop
  double eff_grp = 1.0 - 1e-6;  // pooling acceptance bound
  int max_iters = 5000;         // sweep safety cap
  std::uint64_t seed = 0;
};

/// Regression vectors of a finite candidate set, evaluated once.
struct PointTable {
  std::vector<DesignPoint> points;
  Eigen::MatrixXd F;  // m x n, column j = f(points[j])

  static PointTable build(std::vector<DesignPoint> points, const Model& model);
  int n() const { return static_cast<int>(F.cols()); }
  int m() const { return static_cast<int>(F.rows()); }
};

struct SolveResult {
  Design design;
  double criterion;     // Phi of `design`
  double max_variance;  // max of d over the candidate set
  bool certified;       // m / max_variance >= eff_opt
  int sweeps;
};

/// Raised when every candidate projection collapses: the candidate set does
/// not span R^m and no nonsingular m-point design exists on it.
struct DegenerateCandidateSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Greedy direction-projection initialization: m points whose regression
/// vectors are provably independent, each with weight 1/m.
Design kumar_yildirim_init(const std::vector<DesignPoint>& points, const Model& model,
                           std::uint64_t seed);
Design kumar_yildirim_init(const PointTable& table, std::uint64_t seed);

/// Randomized two-point exchange maximization of Phi over the weight simplex
/// on a finite candidate set. Returns a design that is eff_opt-efficient
/// relative to the candidate set (certified), or the best found when the
/// sweep cap is exceeded.
SolveResult optimize_weights(const std::vector<DesignPoint>& points, const Model& model,
                             const Design& init, const SolverConfig& cfg);
SolveResult optimize_weights(const PointTable& table, const Design& init,
                             const SolverConfig& cfg);

/// Nearest-pair support pooling; the pooled weight goes to the heavier point.
/// Accepts pools while the design stays eff_grp-efficient relative to the
/// input design; distances are Euclidean with coordinates rescaled by
/// `factor_ranges`.
Design grp_pooling(const Design& design, const Model& model,
                   const std::vector<double>& factor_ranges, const SolverConfig& cfg);

}  // namespace gridopt

#endif
