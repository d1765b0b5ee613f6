#ifndef GRIDOPT_DESIGN_HPP
#define GRIDOPT_DESIGN_HPP

#include <vector>

#include "gridopt/grid.hpp"

namespace gridopt {

/// An approximate design: distinct support points with positive weights
/// summing to one. Weights are renormalized on construction (tolerance 1e-12,
/// larger discrepancies are rejected).
class Design {
 public:
  Design(std::vector<DesignPoint> points, std::vector<double> weights);

  int support_size() const { return static_cast<int>(points_.size()); }
  const std::vector<DesignPoint>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  const DesignPoint& point(int i) const { return points_[i]; }
  double weight(int i) const { return weights_[i]; }

 private:
  std::vector<DesignPoint> points_;
  std::vector<double> weights_;
};

/// Integer trial counts obtained by apportioning an approximate design.
struct ExactDesign {
  std::vector<DesignPoint> points;
  std::vector<long> counts;
  long total;  // = sum of counts
};

/// Efficient apportionment of N trials to the support of `design`:
/// n_i = ceil((N - s/2) w_i), then repaired to sum N by decrementing the
/// largest n_i/w_i or incrementing the smallest (n_i+1)/w_i.
ExactDesign round_to_exact(const Design& design, long N);

}  // namespace gridopt

#endif
