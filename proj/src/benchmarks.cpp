#include "gridopt/benchmarks.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gridopt {

namespace {

std::vector<std::vector<double>> cube(int k, double lo, double hi, double step) {
  return std::vector<std::vector<double>>(k, uniform_levels(lo, hi, step));
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// h = (1, x') for main-effects GLMs.
void intercept_main_effects(const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> h) {
  h[0] = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) h[i + 1] = x[i];
}

// Problems 9 and 10 share the mixed binary/continuous space; only the step of
// factor 9 differs (0.001 vs 0.01, as printed in the source table).
std::vector<std::vector<double>> mixed_space_10(double factor9_step) {
  std::vector<std::vector<double>> L;
  for (int i = 0; i < 4; ++i) L.push_back({-1.0, 1.0});
  L.push_back(uniform_levels(50, 90, 0.01));
  L.push_back(uniform_levels(30, 55, 0.01));
  L.push_back(uniform_levels(0, 10, 0.01));
  L.push_back(uniform_levels(18, 48, 0.01));
  L.push_back(uniform_levels(0.125, 0.425, factor9_step));
  L.push_back(uniform_levels(5, 15, 0.01));
  return L;
}

Model model_1() {
  // E(y) = 1/(1 + e^z), z = theta1 + theta2 x1 + theta3 x2 + theta4 x1 x2;
  // the local linearization gives f = -e^z/(1+e^z)^2 * (1, x1, x2, x1 x2)'.
  NonlinearSpec spec;
  spec.m = 4;
  spec.theta0 = vec({-2.0, 0.5, 0.5, 0.1});
  spec.eta = [](const DesignPoint& x, const Eigen::VectorXd& th) {
    const double z = th[0] + th[1] * x[0] + th[2] * x[1] + th[3] * x[0] * x[1];
    return 1.0 / (1.0 + std::exp(z));
  };
  spec.grad_eta = [](const DesignPoint& x, const Eigen::VectorXd& th,
                     Eigen::Ref<Eigen::VectorXd> g) {
    const double z = th[0] + th[1] * x[0] + th[2] * x[1] + th[3] * x[0] * x[1];
    const double w = -std::exp(glm_log_weight(GlmFamily::logistic, z));
    g[0] = w;
    g[1] = w * x[0];
    g[2] = w * x[1];
    g[3] = w * x[0] * x[1];
  };
  return make_linearized_model(std::move(spec));
}

Model model_2() {
  // Compartmental mean: theta1 + theta2 e^{-theta3 x1}
  //                     + theta4/(theta4-theta5) (e^{-theta5 x2} - e^{-theta4 x2}).
  NonlinearSpec spec;
  spec.m = 5;
  spec.theta0 = vec({1.0, 1.0, 2.0, 0.7, 0.2});
  spec.eta = [](const DesignPoint& x, const Eigen::VectorXd& t) {
    return t[0] + t[1] * std::exp(-t[2] * x[0]) +
           t[3] / (t[3] - t[4]) * (std::exp(-t[4] * x[1]) - std::exp(-t[3] * x[1]));
  };
  spec.grad_eta = [](const DesignPoint& x, const Eigen::VectorXd& t,
                     Eigen::Ref<Eigen::VectorXd> g) {
    const double e3 = std::exp(-t[2] * x[0]);
    const double e4 = std::exp(-t[3] * x[1]);
    const double e5 = std::exp(-t[4] * x[1]);
    const double diff = t[3] - t[4];
    const double B = e5 - e4;
    const double A = t[3] / diff;
    g[0] = 1.0;
    g[1] = e3;
    g[2] = -t[1] * x[0] * e3;
    g[3] = -t[4] * B / (diff * diff) + A * x[1] * e4;
    g[4] = t[3] * B / (diff * diff) - A * x[1] * e5;
  };
  return make_linearized_model(std::move(spec));
}

Model model_3() {
  return make_linear_model(7, [](const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> h) {
    h[0] = 1.0;
    h[1] = x[0];
    h[2] = x[1];
    h[3] = x[0] * x[0];
    h[4] = x[1] * x[1];
    h[5] = x[0] * x[0] * x[0];
    h[6] = x[1] * x[1] * x[1];
  });
}

Model model_4() {
  GlmSpec spec;
  spec.family = GlmFamily::poisson;
  spec.m = 10;
  spec.theta0 = vec({0.5, -0.2, 0.5, -0.2, -0.1, 0.2, -0.1, 0.2, -0.1, 0.2});
  spec.h = [](const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> h) {
    h[0] = 1.0;
    h[1] = x[0];
    h[2] = x[1];
    h[3] = x[2];
    h[4] = x[0] * x[0];
    h[5] = x[1] * x[1];
    h[6] = x[2] * x[2];
    h[7] = x[0] * x[1];
    h[8] = x[0] * x[2];
    h[9] = x[1] * x[2];
  };
  return make_glm_model(std::move(spec));
}

Model main_effects_glm(GlmFamily fam, Eigen::VectorXd theta0) {
  GlmSpec spec;
  spec.family = fam;
  spec.m = static_cast<int>(theta0.size());
  spec.theta0 = std::move(theta0);
  spec.h = intercept_main_effects;
  return make_glm_model(std::move(spec));
}

Model model_10() {
  GlmSpec spec;
  spec.family = GlmFamily::logistic;
  spec.m = 16;
  spec.theta0 = vec({3, 0.5, 0.75, 1.25, 0.8, 0.5, 0.8, -0.4, -1.0, 2.65, 0.65, 0.01, -0.02,
                     0.03, -0.04, 0.05});
  spec.h = [](const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> h) {
    h[0] = 1.0;
    for (int i = 0; i < 10; ++i) h[i + 1] = x[i];
    h[11] = x[0] * x[8];
    h[12] = x[1] * x[4];
    h[13] = x[2] * x[3];
    h[14] = x[5] * x[6];
    h[15] = x[7] * x[9];
  };
  return make_glm_model(std::move(spec));
}

std::string describe(const char* text, const FactorGrid& grid) {
  std::ostringstream os;
  os << text << " (approx. 10^" << static_cast<int>(grid.log10_size() + 0.5) << " grid points)";
  return os.str();
}

}  // namespace

BenchmarkProblem benchmark(int id) {
  switch (id) {
    case 1: {
      FactorGrid grid({uniform_levels(0, 5, 0.001), uniform_levels(0, 1, 0.001)});
      return {1, grid, model_1(),
              describe("nonlinear-mean normal model, inverse-logit surface, k=2, m=4", grid), false};
    }
    case 2: {
      FactorGrid grid({uniform_levels(0, 2, 0.001), uniform_levels(0, 10, 0.001)});
      return {2, grid, model_2(), describe("compartmental nonlinear model, k=2, m=5", grid), false};
    }
    case 3: {
      FactorGrid grid(cube(2, -1, 1, 0.001));
      return {3, grid, model_3(), describe("cubic linear model on the square, k=2, m=7", grid),
              false};
    }
    case 4: {
      FactorGrid grid(cube(3, -1, 1, 0.001));
      return {4, grid, model_4(),
              describe("Poisson regression, full quadratic in 3 factors, m=10", grid), false};
    }
    case 5: {
      std::vector<std::vector<double>> L(4, std::vector<double>{-1.0, 1.0});
      L.push_back(uniform_levels(5, 35, 0.001));
      FactorGrid grid(L);
      return {5, grid,
              main_effects_glm(GlmFamily::logistic, vec({-1, 2, 0.5, -1, -0.25, 0.13})),
              describe("logistic regression, 4 binary + 1 continuous factor, m=6", grid), false};
    }
    case 6: {
      FactorGrid grid(cube(5, -2, 2, 0.001));
      return {6, grid,
              main_effects_glm(GlmFamily::probit, vec({0.5, 0.7, 0.18, -0.2, -0.58, 0.51})),
              describe("probit regression, 5 continuous factors, m=6", grid), false};
    }
    case 7: {
      FactorGrid grid(cube(5, -2, 2, 0.001));
      return {7, grid,
              main_effects_glm(GlmFamily::logistic, vec({0.5, 0.7, 0.18, -0.2, -0.58, 0.51})),
              describe("logistic regression, 5 continuous factors, m=6", grid), false};
    }
    case 8: {
      FactorGrid grid(cube(7, -3, 3, 0.01));
      return {8, grid,
              main_effects_glm(GlmFamily::logistic,
                               vec({-0.4926, -0.628, -0.3283, 0.4378, 0.5283, -0.612, -0.6837,
                                    -0.2061})),
              describe("logistic regression, 7 continuous factors, m=8", grid), false};
    }
    case 9: {
      FactorGrid grid(mixed_space_10(0.001));
      return {9, grid,
              main_effects_glm(GlmFamily::logistic,
                               vec({3, 0.5, 0.75, 1.25, 0.8, 0.5, 0.8, -0.4, -1.0, 2.65, 0.65})),
              describe("logistic regression, 4 binary + 6 continuous factors, m=11", grid), false};
    }
    case 10: {
      FactorGrid grid(mixed_space_10(0.01));
      return {10, grid, model_10(),
              describe("logistic regression with 5 interactions, k=10, m=16", grid), true};
    }
    default:
      throw std::invalid_argument("benchmark id must be in 1..10");
  }
}

std::string benchmark_model_source(int id) {
  switch (id) {
    case 1:
      return "k = 2\nm = 4\nfamily = nonlinear\n"
             "theta0 = [-2, 0.5, 0.5, 0.1]\n"
             "factor 1: 0 5 0.001\nfactor 2: 0 1 0.001\n"
             "eta = 1 / (1 + exp(th1 + th2*x1 + th3*x2 + th4*x1*x2))\n";
    case 2:
      return "k = 2\nm = 5\nfamily = nonlinear\n"
             "theta0 = [1, 1, 2, 0.7, 0.2]\n"
             "factor 1: 0 2 0.001\nfactor 2: 0 10 0.001\n"
             "eta = th1 + th2*exp(-th3*x1) + th4/(th4-th5) * (exp(-th5*x2) - exp(-th4*x2))\n";
    case 3:
      return "k = 2\nm = 7\nfamily = linear\n"
             "factor 1: -1 1 0.001\nfactor 2: -1 1 0.001\n"
             "h1 = 1\nh2 = x1\nh3 = x2\nh4 = x1^2\nh5 = x2^2\nh6 = x1^3\nh7 = x2^3\n";
    case 4:
      return "k = 3\nm = 10\nfamily = poisson\n"
             "theta0 = [0.5, -0.2, 0.5, -0.2, -0.1, 0.2, -0.1, 0.2, -0.1, 0.2]\n"
             "factor 1: -1 1 0.001\nfactor 2: -1 1 0.001\nfactor 3: -1 1 0.001\n"
             "h1 = 1\nh2 = x1\nh3 = x2\nh4 = x3\nh5 = x1^2\nh6 = x2^2\nh7 = x3^2\n"
             "h8 = x1*x2\nh9 = x1*x3\nh10 = x2*x3\n";
    case 5:
      return "k = 5\nm = 6\nfamily = logistic\n"
             "theta0 = [-1, 2, 0.5, -1, -0.25, 0.13]\n"
             "factor 1: {-1, 1}\nfactor 2: {-1, 1}\nfactor 3: {-1, 1}\nfactor 4: {-1, 1}\n"
             "factor 5: 5 35 0.001\n"
             "h1 = 1\nh2 = x1\nh3 = x2\nh4 = x3\nh5 = x4\nh6 = x5\n";
    case 6:
      return "k = 5\nm = 6\nfamily = probit\n"
             "theta0 = [0.5, 0.7, 0.18, -0.2, -0.58, 0.51]\n"
             "factor 1: -2 2 0.001\nfactor 2: -2 2 0.001\nfactor 3: -2 2 0.001\n"
             "factor 4: -2 2 0.001\nfactor 5: -2 2 0.001\n"
             "h1 = 1\nh2 = x1\nh3 = x2\nh4 = x3\nh5 = x4\nh6 = x5\n";
    case 7:
      return "k = 5\nm = 6\nfamily = logistic\n"
             "theta0 = [0.5, 0.7, 0.18, -0.2, -0.58, 0.51]\n"
             "factor 1: -2 2 0.001\nfactor 2: -2 2 0.001\nfactor 3: -2 2 0.001\n"
             "factor 4: -2 2 0.001\nfactor 5: -2 2 0.001\n"
             "h1 = 1\nh2 = x1\nh3 = x2\nh4 = x3\nh5 = x4\nh6 = x5\n";
    case 8:
      return "k = 7\nm = 8\nfamily = logistic\n"
             "theta0 = [-0.4926, -0.628, -0.3283, 0.4378, 0.5283, -0.612, -0.6837, -0.2061]\n"
             "factor 1: -3 3 0.01\nfactor 2: -3 3 0.01\nfactor 3: -3 3 0.01\n"
             "factor 4: -3 3 0.01\nfactor 5: -3 3 0.01\nfactor 6: -3 3 0.01\nfactor 7: -3 3 0.01\n"
             "h1 = 1\nh2 = x1\nh3 = x2\nh4 = x3\nh5 = x4\nh6 = x5\nh7 = x6\nh8 = x7\n";
    case 9:
      return "k = 10\nm = 11\nfamily = logistic\n"
             "theta0 = [3, 0.5, 0.75, 1.25, 0.8, 0.5, 0.8, -0.4, -1.0, 2.65, 0.65]\n"
             "factor 1: {-1, 1}\nfactor 2: {-1, 1}\nfactor 3: {-1, 1}\nfactor 4: {-1, 1}\n"
             "factor 5: 50 90 0.01\nfactor 6: 30 55 0.01\nfactor 7: 0 10 0.01\n"
             "factor 8: 18 48 0.01\nfactor 9: 0.125 0.425 0.001\nfactor 10: 5 15 0.01\n"
             "h1 = 1\nh2 = x1\nh3 = x2\nh4 = x3\nh5 = x4\nh6 = x5\nh7 = x6\nh8 = x7\n"
             "h9 = x8\nh10 = x9\nh11 = x10\n";
    case 10:
      return "k = 10\nm = 16\nfamily = logistic\n"
             "theta0 = [3, 0.5, 0.75, 1.25, 0.8, 0.5, 0.8, -0.4, -1.0, 2.65, 0.65, 0.01, -0.02, "
             "0.03, -0.04, 0.05]\n"
             "factor 1: {-1, 1}\nfactor 2: {-1, 1}\nfactor 3: {-1, 1}\nfactor 4: {-1, 1}\n"
             "factor 5: 50 90 0.01\nfactor 6: 30 55 0.01\nfactor 7: 0 10 0.01\n"
             "factor 8: 18 48 0.01\nfactor 9: 0.125 0.425 0.01\nfactor 10: 5 15 0.01\n"
             "h1 = 1\nh2 = x1\nh3 = x2\nh4 = x3\nh5 = x4\nh6 = x5\nh7 = x6\nh8 = x7\n"
             "h9 = x8\nh10 = x9\nh11 = x10\n"
             "h12 = x1*x9\nh13 = x2*x5\nh14 = x3*x4\nh15 = x6*x7\nh16 = x8*x10\n";
    default:
      throw std::invalid_argument("benchmark id must be in 1..10");
  }
}

}  // namespace gridopt
