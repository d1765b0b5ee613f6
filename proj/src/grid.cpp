#include "gridopt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gridopt {

FactorGrid::FactorGrid(std::vector<std::vector<double>> levels)
    : levels_(std::move(levels)) {
  if (levels_.empty()) throw std::invalid_argument("FactorGrid: need at least one factor");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto& L = levels_[i];
    if (L.empty())
      throw std::invalid_argument("FactorGrid: factor " + std::to_string(i + 1) + " has no levels");
    for (std::size_t j = 0; j + 1 < L.size(); ++j) {
      if (!(L[j] < L[j + 1]))
        throw std::invalid_argument("FactorGrid: levels of factor " + std::to_string(i + 1) +
                                    " must be strictly increasing");
    }
    for (double v : L)
      if (!std::isfinite(v))
        throw std::invalid_argument("FactorGrid: non-finite level in factor " + std::to_string(i + 1));
  }
}

std::uint64_t FactorGrid::size_saturated() const {
  std::uint64_t n = 1;
  for (const auto& L : levels_) {
    std::uint64_t c = L.size();
    if (n > std::numeric_limits<std::uint64_t>::max() / c)
      return std::numeric_limits<std::uint64_t>::max();
    n *= c;
  }
  return n;
}

double FactorGrid::log10_size() const {
  double s = 0;
  for (const auto& L : levels_) s += std::log10(static_cast<double>(L.size()));
  return s;
}

bool FactorGrid::contains(const DesignPoint& x) const {
  if (static_cast<int>(x.size()) != k()) return false;
  for (int i = 0; i < k(); ++i) {
    if (!std::binary_search(levels_[i].begin(), levels_[i].end(), x[i])) return false;
  }
  return true;
}

void FactorGrid::require_on_grid(const DesignPoint& x) const {
  if (!contains(x)) throw std::invalid_argument("design point is not on the factor grid");
}

std::vector<double> FactorGrid::factor_ranges() const {
  std::vector<double> r(levels_.size());
  for (std::size_t i = 0; i < levels_.size(); ++i) r[i] = levels_[i].back() - levels_[i].front();
  return r;
}

DesignPoint FactorGrid::random_point(std::mt19937_64& rng) const {
  DesignPoint x(levels_.size());
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, levels_[i].size() - 1);
    x[i] = levels_[i][pick(rng)];
  }
  return x;
}

std::vector<double> uniform_levels(double lo, double hi, double step) {
  if (!(step > 0) || !(hi > lo)) throw std::invalid_argument("uniform_levels: need hi > lo, step > 0");
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
  // Round the offset from lo to the step's decimal precision so levels are
  // decimal-exact rather than carrying accumulated drift; anchoring at lo
  // keeps grids like 0.125(0.01)0.425 intact.
  const double decimals = std::ceil(-std::log10(step));
  const double scale = std::pow(10.0, std::max(0.0, decimals));
  std::vector<double> L(n);
  for (std::size_t i = 0; i < n; ++i)
    L[i] = lo + std::round(static_cast<double>(i) * step * scale) / scale;
  L.back() = hi;
  return L;
}

double median_level(const std::vector<double>& levels) {
  if (levels.size() < 3) throw std::invalid_argument("median_level: need at least 3 levels");
  return levels[(levels.size() - 1) / 2];
}

}  // namespace gridopt
