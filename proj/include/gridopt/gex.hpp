#ifndef GRIDOPT_GEX_HPP
#define GRIDOPT_GEX_HPP

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "gridopt/design.hpp"
#include "gridopt/model.hpp"
#include "gridopt/solver.hpp"

namespace gridopt {

struct GexConfig {
  // 1e-9 rather than the common 1e-6: the tighter inner certificate is what
  // makes independent runs agree to 6 printed digits.
  double eff_opt = 1.0 - 1e-9;
  double eff_grp = 1.0 - 1e-6;
  // Round-level stop: rounds exist to discover support regions, so gains
  // below 1e-7 do not count as progress; the final polish still refines the
  // design to the eff_opt certificate.
  double eff_stop = 1.0 - 1e-7;
  int n_loc = 50;    // random-start hill climbs per exploration round
  int n_rnd = 1000;  // random points added to the initial exploration set
  std::uint64_t seed = 0;
  bool reparametrize = false;
  int max_rounds = 100;  // safety net; the ratio rule stops in a handful
  int solver_max_iters = 5000;
};

enum class PointOrigin { grid, random, local_max, star };

/// Deduplicated candidate points with their provenance.
class ExplorationSet {
 public:
  bool insert(DesignPoint p, PointOrigin origin);
  std::size_t size() const { return points_.size(); }
  const std::vector<DesignPoint>& points() const { return points_; }
  const std::vector<PointOrigin>& origins() const { return origins_; }

 private:
  std::vector<DesignPoint> points_;
  std::vector<PointOrigin> origins_;
  std::unordered_set<DesignPoint, PointHash> seen_;
};

/// Initial exploration set: the corner/median grid (min, median, max per
/// non-binary factor; min, max per binary factor) plus n_rnd uniform points.
ExplorationSet ini(const FactorGrid& grid, int n_rnd, std::uint64_t seed);

/// All grid points differing from x in at most one coordinate (x included).
std::vector<DesignPoint> star_set(const FactorGrid& grid, const DesignPoint& x);

/// n_loc random-start greedy climbs of the variance function over star-set
/// neighbourhoods; returns the deduplicated terminal points.
std::vector<DesignPoint> local_search(const FactorGrid& grid, const Model& model,
                                      const Design& design, int n_loc, std::uint64_t seed);

/// f~ = M^{-1/2}(ini_design) f; the D-optimal design is unchanged, the
/// conditioning of the matrices is not.
Model reparametrize(const Model& model, const Design& ini_design);

struct RoundRecord {
  double phi;
  int support_size;
  std::size_t exploration_size;
  double elapsed_ms;
};

struct RunReport {
  std::vector<RoundRecord> rounds;
  double phi = 0;                // final criterion value, original coordinates
  double certificate_bound = 0;  // m / max d over the final exploration set
  bool certified = false;
  bool round_cap_hit = false;
};

struct GexResult {
  Design design;
  RunReport report;
};

/// The full INI -> OPT -> (EXP -> OPT)* loop with the Phi-ratio stopping rule.
GexResult run_gex(const FactorGrid& grid, const Model& model, const GexConfig& cfg);

}  // namespace gridopt

#endif
