#include "gridopt/design.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace gridopt {

Design::Design(std::vector<DesignPoint> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.empty()) throw std::invalid_argument("Design: empty support");
  if (points_.size() != weights_.size())
    throw std::invalid_argument("Design: points/weights size mismatch");

  const std::size_t dim = points_[0].size();
  std::unordered_set<DesignPoint, PointHash> seen;
  for (const auto& p : points_) {
    if (p.size() != dim) throw std::invalid_argument("Design: inconsistent point dimensions");
    if (!seen.insert(p).second) throw std::invalid_argument("Design: duplicate support point");
  }

  double total = 0;
  for (double w : weights_) {
    if (!(w > 0)) throw std::invalid_argument("Design: weights must be strictly positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    if (std::abs(total - 1.0) > 1e-6)
      throw std::invalid_argument("Design: weights sum far from 1");
  }
  for (double& w : weights_) w /= total;
}

ExactDesign round_to_exact(const Design& design, long N) {
  const long s = design.support_size();
  if (N < s) throw std::invalid_argument("round_to_exact: N smaller than support size");

  const auto& w = design.weights();
  std::vector<long> n(s);
  long total = 0;
  for (long i = 0; i < s; ++i) {
    n[i] = static_cast<long>(std::ceil((static_cast<double>(N) - 0.5 * s) * w[i]));
    if (n[i] < 0) n[i] = 0;
    total += n[i];
  }
  while (total > N) {
    long j = 0;
    double best = -1;
    for (long i = 0; i < s; ++i) {
      if (n[i] == 0) continue;
      double r = static_cast<double>(n[i]) / w[i];
      if (r > best) { best = r; j = i; }
    }
    --n[j];
    --total;
  }
  while (total < N) {
    long j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (long i = 0; i < s; ++i) {
      double r = static_cast<double>(n[i] + 1) / w[i];
      if (r < best) { best = r; j = i; }
    }
    ++n[j];
    ++total;
  }
  return ExactDesign{design.points(), std::move(n), N};
}

}  // namespace gridopt
