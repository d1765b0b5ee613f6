#ifndef GRIDOPT_TESTS_ORACLES_HPP
#define GRIDOPT_TESTS_ORACLES_HPP

// Slow, independent reference implementations used to pin expected values.
// They deliberately avoid the solver code paths: designs are built directly
// from weight vectors and evaluated through the information-matrix primitives
// only.

#include <cstdint>
#include <random>
#include <vector>

#include "gridopt/design.hpp"
#include "gridopt/info_matrix.hpp"
#include "gridopt/model.hpp"

namespace oracles {

using gridopt::Design;
using gridopt::DesignPoint;
using gridopt::Model;

inline double phi_of_counts(const std::vector<DesignPoint>& pts, const Model& model,
                            const std::vector<long>& counts, long mesh) {
  std::vector<DesignPoint> support;
  std::vector<double> weights;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (counts[i] > 0) {
      support.push_back(pts[i]);
      weights.push_back(static_cast<double>(counts[i]) / static_cast<double>(mesh));
    }
  }
  if (support.empty()) return 0.0;
  return gridopt::information_matrix(Design(std::move(support), std::move(weights)), model)
      .criterion();
}

/// Exhaustive search over every composition of `mesh` into n nonnegative
/// parts. Only feasible for very small n; used to validate the hill-climb
/// oracle below.
inline double simplex_exhaustive_optimum(const std::vector<DesignPoint>& pts, const Model& model,
                                         long mesh) {
  const std::size_t n = pts.size();
  std::vector<long> c(n, 0);
  double best = 0.0;
  // Odometer over compositions: c[0..n-2] free, last part is the remainder.
  while (true) {
    long used = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) used += c[i];
    if (used <= mesh) {
      c[n - 1] = mesh - used;
      best = std::max(best, phi_of_counts(pts, model, c, mesh));
    }
    std::size_t i = 0;
    for (; i + 1 < n; ++i) {
      if (++c[i] <= mesh) break;
      c[i] = 0;
    }
    if (i + 1 >= n) break;
  }
  return best;
}

/// Best criterion value over the 1/mesh weight simplex, found by steepest
/// ascent on unit transfers (move one mesh cell of weight between two points)
/// with an exhaustive neighbourhood at every step, from several starts. The
/// criterion is concave on the simplex, so transfer-local optima are tight.
/// Each step rebuilds the information matrix from scratch and scans every
/// ordered pair through the rank-two determinant-ratio identity
///   det(M + d f_j f_j' - d f_i f_i') =
///     det(M) [(1 + d a_jj)(1 - d a_ii) + d^2 a_ij^2],  a_xy = f_x' M^-1 f_y.
inline double simplex_mesh_optimum(const std::vector<DesignPoint>& pts, const Model& model,
                                   long mesh, int n_starts = 4, std::uint64_t seed = 0) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  const int m = model.m();
  Eigen::MatrixXd F(m, n);
  for (Eigen::Index j = 0; j < n; ++j) model.eval_into(pts[j], F.col(j));
  const double delta = 1.0 / static_cast<double>(mesh);

  std::mt19937_64 rng(seed);
  double best = 0.0;
  for (int s = 0; s < n_starts; ++s) {
    std::vector<long> c(n, mesh / static_cast<long>(n));
    long deficit = mesh;
    for (long v : c) deficit -= v;
    for (long i = 0; i < deficit; ++i) ++c[i % n];
    if (s > 0) {  // random multinomial restart
      std::fill(c.begin(), c.end(), 0);
      std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
      for (long i = 0; i < mesh; ++i) ++c[pick(rng)];
    }
    while (true) {
      std::vector<DesignPoint> support;
      std::vector<double> weights;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (c[i] > 0) {
          support.push_back(pts[i]);
          weights.push_back(static_cast<double>(c[i]) * delta);
        }
      }
      gridopt::InfoMatrix M = gridopt::information_matrix(Design(support, weights), model);
      if (M.singular()) break;  // dead start (fewer than m charged points)
      best = std::max(best, M.criterion());
      const Eigen::MatrixXd A = F.transpose() * (M.inverse() * F);  // n x n
      double best_gain = 1.0 + 1e-12;
      Eigen::Index best_i = -1, best_j = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (c[i] == 0) continue;
        for (Eigen::Index j = 0; j < n; ++j) {
          if (j == i) continue;
          const double gain = (1.0 + delta * A(j, j)) * (1.0 - delta * A(i, i)) +
                              delta * delta * A(i, j) * A(i, j);
          if (gain > best_gain) {
            best_gain = gain;
            best_i = i;
            best_j = j;
          }
        }
      }
      if (best_i < 0) break;
      --c[best_i];
      ++c[best_j];
    }
  }
  return best;
}

/// Largest variance-function value over an explicit candidate list.
inline double max_variance_over(const std::vector<DesignPoint>& pts, const Model& model,
                                const Design& design) {
  double worst = 0.0;
  for (const auto& p : pts) worst = std::max(worst, gridopt::variance_function(design, model, p));
  return worst;
}

/// Central finite difference of a scalar function of one coordinate.
template <typename F>
double central_diff(F f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracles

#endif
