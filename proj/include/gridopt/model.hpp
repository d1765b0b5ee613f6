#ifndef GRIDOPT_MODEL_HPP
#define GRIDOPT_MODEL_HPP

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gridopt/grid.hpp"

namespace gridopt {

/// Regression-vector model: a pure map from a design point to f(x) in R^m.
/// Immutable and reentrant; evaluation never touches shared state.
class Model {
 public:
  using EvalFn = std::function<void(const DesignPoint&, Eigen::Ref<Eigen::VectorXd>)>;

  Model(int m, EvalFn eval);

  int m() const { return m_; }
  void eval_into(const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> out) const;
  Eigen::VectorXd eval(const DesignPoint& x) const;

  /// f~ = R f with R nonsingular; does not alter the D-optimal design.
  Model reparametrized(const Eigen::MatrixXd& R) const;

 private:
  int m_;
  EvalFn eval_;
};

enum class GlmFamily { logistic, probit, poisson };

GlmFamily glm_family_from_string(const std::string& tag);
std::string to_string(GlmFamily fam);

/// log w(z) per family; finite for any finite z (probit tails go through
/// log-Mills asymptotics instead of the 0/0 ratio).
double glm_log_weight(GlmFamily fam, double z);
double glm_weight(GlmFamily fam, double z);

double normal_pdf(double z);
double normal_cdf(double z);

/// GLM specification: f(x) = sqrt(w(h'(x)theta0)) h(x).
struct GlmSpec {
  GlmFamily family;
  int m;
  std::function<void(const DesignPoint&, Eigen::Ref<Eigen::VectorXd>)> h;
  Eigen::VectorXd theta0;
};

Eigen::VectorXd glm_regression_vector(const GlmSpec& spec, const DesignPoint& x);
Model make_glm_model(GlmSpec spec);

/// Nonlinear-mean model handled by local linearization at theta0:
/// f(x) = grad_theta eta(x, theta0).
struct NonlinearSpec {
  int m;
  std::function<double(const DesignPoint&, const Eigen::VectorXd&)> eta;
  std::function<void(const DesignPoint&, const Eigen::VectorXd&, Eigen::Ref<Eigen::VectorXd>)> grad_eta;
  Eigen::VectorXd theta0;
};

Eigen::VectorXd linearized_regression_vector(const NonlinearSpec& spec, const DesignPoint& x);
Model make_linearized_model(NonlinearSpec spec);

Model make_linear_model(int m, std::function<void(const DesignPoint&, Eigen::Ref<Eigen::VectorXd>)> h);

}  // namespace gridopt

#endif
