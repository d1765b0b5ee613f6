#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gridopt/benchmarks.hpp"
#include "gridopt/gex.hpp"
#include "gridopt/solver.hpp"
#include "oracles.hpp"
#include "small_instances.hpp"

using namespace gridopt;

namespace {

Model quadratic_1d() {
  return make_linear_model(3, [](const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> h) {
    h[0] = 1.0;
    h[1] = x[0];
    h[2] = x[0] * x[0];
  });
}

}  // namespace

TEST_CASE("PointTable stores one regression vector per candidate") {
  Model quad = quadratic_1d();
  PointTable t = PointTable::build({{-1.0}, {0.5}, {1.0}}, quad);
  CHECK(t.n() == 3);
  CHECK(t.m() == 3);
  CHECK(t.F(0, 1) == 1.0);
  CHECK(t.F(1, 1) == 0.5);
  CHECK(t.F(2, 1) == 0.25);
}

TEST_CASE("initialization is nonsingular over 1000 seeds") {
  BenchmarkProblem b = benchmark(3);
  // The corner/median subgrid alone is degenerate for the cubic model
  // (x^3 = x on {-1,0,1}); the random points of the initial exploration set
  // are what make it spanning.
  ExplorationSet e = ini(b.grid, 1000, 7);
  PointTable table = PointTable::build(e.points(), b.model);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Design d = kumar_yildirim_init(table, seed);
    CHECK(d.support_size() == b.model.m());
    for (double w : d.weights()) CHECK(w == doctest::Approx(1.0 / b.model.m()).epsilon(1e-15));
    CHECK(information_matrix(d, b.model).criterion() > 0.0);
  }
}

TEST_CASE("initialization rejects candidate sets that do not span") {
  // All regression vectors collinear: no nonsingular design exists.
  Model degenerate = make_linear_model(2, [](const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> h) {
    h[0] = x[0];
    h[1] = 2.0 * x[0];
  });
  CHECK_THROWS_AS(kumar_yildirim_init({{1.0}, {2.0}, {3.0}}, degenerate, 1),
                  DegenerateCandidateSet);
}

TEST_CASE("weight optimization finds the optimum of the three-point quadratic") {
  Model quad = quadratic_1d();
  const std::vector<DesignPoint> pts = {{-1.0}, {0.0}, {1.0}};
  SolverConfig cfg;
  cfg.seed = 3;
  Design init = kumar_yildirim_init(pts, quad, cfg.seed);
  SolveResult r = optimize_weights(pts, quad, init, cfg);
  CHECK(r.certified);
  CHECK(r.criterion == doctest::Approx(0.5291336839893999).epsilon(1e-9));
  CHECK(r.max_variance == doctest::Approx(3.0).epsilon(1e-6));
  for (double w : r.design.weights()) CHECK(w == doctest::Approx(1.0 / 3).epsilon(1e-7));
}

TEST_CASE("hill-climb simplex oracle agrees with exhaustive enumeration") {
  // Validates the cheap oracle used by the larger randomized comparisons.
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto inst = small_instances::make(seed);
    std::vector<DesignPoint> pts(inst.all_points.begin(),
                                 inst.all_points.begin() + std::min<std::size_t>(4, inst.all_points.size()));
    pts.push_back(inst.all_points.back());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const long mesh = 40;  // keep the exhaustive side tractable
    const double ex = oracles::simplex_exhaustive_optimum(pts, inst.model, mesh);
    const double hc = oracles::simplex_mesh_optimum(pts, inst.model, mesh, 4, seed);
    if (ex == 0.0) continue;  // degenerate candidate subset
    CHECK(hc == doctest::Approx(ex).epsilon(1e-9));
  }
}

TEST_CASE("weight optimization is certified and beats its initialization") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    CAPTURE(seed);
    auto inst = small_instances::make(seed);
    SolverConfig cfg;
    cfg.seed = seed;
    Design init = kumar_yildirim_init(inst.all_points, inst.model, seed);
    const double phi0 = information_matrix(init, inst.model).criterion();
    SolveResult r = optimize_weights(inst.all_points, inst.model, init, cfg);
    CHECK(r.certified);
    CHECK(r.criterion >= phi0 - 1e-12);
    CHECK(r.max_variance <= inst.model.m() * (1.0 + 1e-5));
    // the reported maximum is a real maximum over the candidate set
    const double probe = oracles::max_variance_over(inst.all_points, inst.model, r.design);
    CHECK(probe == doctest::Approx(r.max_variance).epsilon(1e-9));
  }
}

TEST_CASE("pooling merges near-duplicate support into the heavier point") {
  Model quad = quadratic_1d();
  Design d({{-1.0}, {0.0}, {1e-4}, {1.0}}, {1.0 / 3, 0.2, 1.0 / 3 - 0.2, 1.0 / 3});
  SolverConfig cfg;
  cfg.eff_grp = 1.0 - 1e-6;
  Design pooled = grp_pooling(d, quad, {2.0}, cfg);
  CHECK(pooled.support_size() == 3);
  // 0 carried more weight than 1e-4, so the pooled point is 0
  bool has_zero = false, has_eps = false;
  for (const auto& p : pooled.points()) {
    if (p[0] == 0.0) has_zero = true;
    if (p[0] == 1e-4) has_eps = true;
  }
  CHECK(has_zero);
  CHECK_FALSE(has_eps);
  CHECK(relative_efficiency(pooled, d, quad) >= cfg.eff_grp);
}

TEST_CASE("pooling respects the efficiency floor on random designs") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto inst = small_instances::make(seed);
    SolverConfig cfg;
    cfg.seed = seed;
    Design init = kumar_yildirim_init(inst.all_points, inst.model, seed);
    SolveResult r = optimize_weights(inst.all_points, inst.model, init, cfg);
    Design pooled = grp_pooling(r.design, inst.model, inst.grid.factor_ranges(), cfg);
    CHECK(pooled.support_size() <= r.design.support_size());
    CHECK(relative_efficiency(pooled, r.design, inst.model) >= cfg.eff_grp * (1 - 1e-12));
  }
}

TEST_CASE("well-separated optimal support survives pooling untouched") {
  Model quad = quadratic_1d();
  Design opt({{-1.0}, {0.0}, {1.0}}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  SolverConfig cfg;
  Design pooled = grp_pooling(opt, quad, {2.0}, cfg);
  CHECK(pooled.support_size() == 3);
}
