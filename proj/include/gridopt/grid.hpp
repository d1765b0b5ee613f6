#ifndef GRIDOPT_GRID_HPP
#define GRIDOPT_GRID_HPP

#include <bit>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridopt {

/// A design point: one level per factor, natural units.
using DesignPoint = std::vector<double>;

/// Cartesian product of per-factor finite level sets. The full grid is never
/// materialized; its size is kept as a saturating count only.
class FactorGrid {
 public:
  explicit FactorGrid(std::vector<std::vector<double>> levels);

  int k() const { return static_cast<int>(levels_.size()); }
  const std::vector<double>& levels(int factor) const { return levels_.at(factor); }
  const std::vector<std::vector<double>>& all_levels() const { return levels_; }

  /// Product of level counts, saturated at UINT64_MAX.
  std::uint64_t size_saturated() const;
  double log10_size() const;

  bool contains(const DesignPoint& x) const;
  void require_on_grid(const DesignPoint& x) const;

  /// Lower-range extent of each factor (max level - min level).
  std::vector<double> factor_ranges() const;

  /// Uniform draw: each coordinate independently uniform over its levels.
  DesignPoint random_point(std::mt19937_64& rng) const;

 private:
  std::vector<std::vector<double>> levels_;
};

/// Levels lo, lo+step, ..., hi with decimal-exact rounding to the step's
/// precision; the last level is forced to hi.
std::vector<double> uniform_levels(double lo, double hi, double step);

/// The ceil(n/2)-th smallest level (lower median for even n).
double median_level(const std::vector<double>& levels);

/// Exact-bit hashing; legal because coordinates come from finite level lists.
struct PointHash {
  std::size_t operator()(const DesignPoint& p) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (double c : p) {
      std::uint64_t b = std::bit_cast<std::uint64_t>(c);
      h ^= b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace gridopt

#endif
