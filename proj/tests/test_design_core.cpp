#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "gridopt/design.hpp"
#include "gridopt/grid.hpp"
#include "gridopt/info_matrix.hpp"
#include "small_instances.hpp"

using namespace gridopt;

TEST_CASE("uniform_levels produces decimal-exact endpoints and counts") {
  auto L = uniform_levels(0.0, 1.0, 0.1);
  CHECK(L.size() == 11);
  CHECK(L.front() == 0.0);
  CHECK(L.back() == 1.0);
  CHECK(L[3] == doctest::Approx(0.3).epsilon(1e-15));

  L = uniform_levels(-3.0, 3.0, 0.01);
  CHECK(L.size() == 601);
  CHECK(L.front() == -3.0);
  CHECK(L.back() == 3.0);

  // Start point off the step lattice: the offset, not the absolute value,
  // must be rounded, otherwise neighbouring levels collapse.
  L = uniform_levels(0.125, 0.425, 0.01);
  CHECK(L.size() == 31);
  CHECK(L.front() == 0.125);
  CHECK(L.back() == 0.425);
  for (std::size_t i = 0; i + 1 < L.size(); ++i) CHECK(L[i] < L[i + 1]);
  CHECK(L[1] == doctest::Approx(0.135).epsilon(1e-14));

  CHECK(uniform_levels(5, 35, 0.001).size() == 30001);
  CHECK_THROWS_AS(uniform_levels(1.0, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(uniform_levels(0.0, 1.0, -0.1), std::invalid_argument);
}

TEST_CASE("median_level returns the lower median") {
  CHECK(median_level({1, 2, 3}) == 2);
  CHECK(median_level({1, 2, 3, 4}) == 2);
  CHECK(median_level({0, 1, 2, 3, 4}) == 2);
  CHECK_THROWS_AS(median_level({1, 2}), std::invalid_argument);
}

TEST_CASE("FactorGrid validates and answers membership queries") {
  CHECK_THROWS_AS(FactorGrid({{1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(FactorGrid({{2.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(FactorGrid(std::vector<std::vector<double>>{}), std::invalid_argument);

  FactorGrid g({{0.0, 0.5, 1.0}, {-1.0, 1.0}});
  CHECK(g.k() == 2);
  CHECK(g.size_saturated() == 6);
  CHECK(g.contains({0.5, -1.0}));
  CHECK_FALSE(g.contains({0.25, -1.0}));
  CHECK_FALSE(g.contains({0.5}));
  CHECK_NOTHROW(g.require_on_grid({1.0, 1.0}));
  CHECK_THROWS_AS(g.require_on_grid({0.3, 1.0}), std::invalid_argument);
  CHECK(g.factor_ranges() == std::vector<double>{1.0, 2.0});
  CHECK(g.log10_size() == doctest::Approx(std::log10(6.0)));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) CHECK(g.contains(g.random_point(rng)));
}

TEST_CASE("Design normalizes small weight drift and rejects bad inputs") {
  Design d({{0.0}, {1.0}}, {0.5, 0.5 + 1e-9});
  CHECK(d.support_size() == 2);
  CHECK(d.weight(0) + d.weight(1) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(Design({{0.0}, {1.0}}, {0.6, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(Design({{0.0}, {1.0}}, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Design({{0.0}, {0.0}}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(Design({{0.0}, {1.0}}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(Design({}, {}), std::invalid_argument);
}

TEST_CASE("round_to_exact reproduces hand-worked apportionments") {
  {
    ExactDesign e = round_to_exact(Design({{0.0}, {1.0}}, {0.5, 0.5}), 4);
    CHECK(e.total == 4);
    CHECK(e.counts == std::vector<long>{2, 2});
  }
  {
    ExactDesign e =
        round_to_exact(Design({{0.0}, {1.0}, {2.0}}, {1.0 / 3, 1.0 / 3, 1.0 / 3}), 10);
    CHECK(e.total == 10);
    std::vector<long> c = e.counts;
    std::sort(c.begin(), c.end());
    CHECK(c == std::vector<long>{3, 3, 4});
  }
}

TEST_CASE("round_to_exact sums to N with nonnegative counts") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const int s = 2 + static_cast<int>(rng() % 6);
    std::vector<DesignPoint> pts;
    std::vector<double> w(s);
    double total = 0;
    for (int i = 0; i < s; ++i) {
      pts.push_back({static_cast<double>(i)});
      w[i] = 0.05 + std::uniform_real_distribution<double>(0, 1)(rng);
      total += w[i];
    }
    for (double& v : w) v /= total;
    const long N = s + static_cast<long>(rng() % 40);
    ExactDesign e = round_to_exact(Design(pts, w), N);
    long sum = 0;
    for (long c : e.counts) {
      CHECK(c >= 0);
      sum += c;
    }
    CHECK(sum == N);
    CHECK(e.total == N);
  }
}

TEST_CASE("InfoMatrix determinant, criterion and inverse on pinned matrices") {
  Eigen::MatrixXd M(2, 2);
  M << 2, 1, 1, 2;  // det 3
  InfoMatrix im(M);
  CHECK(im.criterion() == doctest::Approx(1.7320508075688772).epsilon(1e-14));
  CHECK(im.log_det() == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK_FALSE(im.singular());
  Eigen::MatrixXd inv = im.inverse();
  CHECK(inv(0, 0) == doctest::Approx(2.0 / 3).epsilon(1e-13));
  CHECK(inv(0, 1) == doctest::Approx(-1.0 / 3).epsilon(1e-13));

  Eigen::MatrixXd S(2, 2);
  S << 1, 1, 1, 1;
  InfoMatrix sing(S);
  CHECK(sing.singular());
  CHECK(sing.criterion() == 0.0);
  CHECK(sing.log_det() == -std::numeric_limits<double>::infinity());
  CHECK_THROWS(sing.inverse());

  Eigen::MatrixXd N2(2, 2);
  N2 << 1, 0, 0, -1;  // genuinely indefinite
  CHECK_THROWS(InfoMatrix(N2).criterion());

  Eigen::MatrixXd A(2, 2);
  A << 1, 0.5, 0.4, 1;  // asymmetric
  CHECK_THROWS_AS(InfoMatrix{A}, std::invalid_argument);
}

TEST_CASE("information matrix of the uniform three-point quadratic design") {
  Model quad = make_linear_model(3, [](const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> h) {
    h[0] = 1.0;
    h[1] = x[0];
    h[2] = x[0] * x[0];
  });
  Design uniform({{-1.0}, {0.0}, {1.0}}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  InfoMatrix M = information_matrix(uniform, quad);
  CHECK(M.entries()(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(M.entries()(1, 1) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(M.entries()(0, 2) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(M.entries()(1, 0) == 0.0);
  // det = 4/27; criterion = (4/27)^(1/3)
  CHECK(d_criterion(M) == doctest::Approx(0.5291336839893999).epsilon(1e-13));

  // This design is optimal on {-1,0,1}: d equals m at every support point.
  for (const auto& p : uniform.points())
    CHECK(variance_function(uniform, quad, p) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(efficiency_lower_bound(3, 3.0) == doctest::Approx(1.0));
  CHECK(efficiency_lower_bound(3, 6.0) == doctest::Approx(0.5));
  CHECK(relative_efficiency(uniform, uniform, quad) == doctest::Approx(1.0));
}

TEST_CASE("criterion is positively homogeneous and concave on samples") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 2 + static_cast<int>(rng() % 4);
    Eigen::MatrixXd A(m, m), B(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        A(i, j) = g(rng);
        B(i, j) = g(rng);
      }
    Eigen::MatrixXd M1 = A * A.transpose() + 1e-3 * Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd M2 = B * B.transpose() + 1e-3 * Eigen::MatrixXd::Identity(m, m);
    const double c = 0.1 + std::uniform_real_distribution<double>(0, 3)(rng);
    const double p1 = d_criterion(InfoMatrix(M1));
    const double p2 = d_criterion(InfoMatrix(M2));
    CHECK(d_criterion(InfoMatrix(c * M1)) == doctest::Approx(c * p1).epsilon(1e-10));
    CHECK(d_criterion(InfoMatrix(0.5 * (M1 + M2))) >= 0.5 * (p1 + p2) - 1e-12);
  }
}

TEST_CASE("trace identity: weighted variance over the support equals m") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto inst = small_instances::make(seed);
    const int m = inst.model.m();
    // A random design on enough points to be nonsingular with probability 1.
    std::mt19937_64 rng(seed * 977);
    std::vector<DesignPoint> pts;
    std::vector<double> w;
    std::sample(inst.all_points.begin(), inst.all_points.end(), std::back_inserter(pts),
                std::min<std::size_t>(inst.all_points.size(), m + 3), rng);
    double total = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      w.push_back(0.1 + std::uniform_real_distribution<double>(0, 1)(rng));
      total += w.back();
    }
    for (double& v : w) v /= total;
    Design d(pts, w);
    if (information_matrix(d, inst.model).singular()) continue;
    double acc = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      acc += d.weight(static_cast<int>(i)) * variance_function(d, inst.model, d.point(i));
    CHECK(std::abs(acc - m) <= 1e-8);
  }
}
