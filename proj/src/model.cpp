#include "gridopt/model.hpp"

#include <cmath>
#include <stdexcept>

namespace gridopt {

namespace {
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))
}

Model::Model(int m, EvalFn eval) : m_(m), eval_(std::move(eval)) {
  if (m_ < 2) throw std::invalid_argument("Model: parameter dimension must be >= 2");
  if (!eval_) throw std::invalid_argument("Model: missing evaluation function");
}

void Model::eval_into(const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> out) const {
  eval_(x, out);
}

Eigen::VectorXd Model::eval(const DesignPoint& x) const {
  Eigen::VectorXd f(m_);
  eval_(x, f);
  return f;
}

Model Model::reparametrized(const Eigen::MatrixXd& R) const {
  if (R.rows() != m_ || R.cols() != m_)
    throw std::invalid_argument("reparametrized: R must be m x m");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(R);
  if (!lu.isInvertible()) throw std::invalid_argument("reparametrized: R is singular");
  EvalFn base = eval_;
  int m = m_;
  return Model(m, [base, R, m](const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> out) {
    Eigen::VectorXd f(m);
    base(x, f);
    out.noalias() = R * f;
  });
}

GlmFamily glm_family_from_string(const std::string& tag) {
  if (tag == "logistic") return GlmFamily::logistic;
  if (tag == "probit") return GlmFamily::probit;
  if (tag == "poisson") return GlmFamily::poisson;
  throw std::invalid_argument("unknown GLM family: " + tag);
}

std::string to_string(GlmFamily fam) {
  switch (fam) {
    case GlmFamily::logistic: return "logistic";
    case GlmFamily::probit: return "probit";
    case GlmFamily::poisson: return "poisson";
  }
  return "?";
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z - kLogSqrt2Pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

// log(1 - Phi(az)) for az >= 0; asymptotic Mills-ratio series in the far tail
// where erfc underflows.
double log_normal_tail(double az) {
  if (az < 30.0) return std::log(0.5 * std::erfc(az / std::sqrt(2.0)));
  const double z2 = az * az;
  const double mills = (1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2)) / az;
  return -0.5 * z2 - kLogSqrt2Pi + std::log(mills);
}

double probit_log_weight(double z) {
  const double az = std::abs(z);  // w is symmetric in z
  const double log_tail = log_normal_tail(az);
  const double log_head = std::log1p(-std::exp(log_tail));
  const double log_pdf = -0.5 * az * az - kLogSqrt2Pi;
  return 2.0 * log_pdf - log_head - log_tail;
}

}  // namespace

double glm_log_weight(GlmFamily fam, double z) {
  switch (fam) {
    case GlmFamily::logistic:
      // e^z/(1+e^z)^2 = e^{-|z|}/(1+e^{-|z|})^2
      return -std::abs(z) - 2.0 * std::log1p(std::exp(-std::abs(z)));
    case GlmFamily::probit:
      return probit_log_weight(z);
    case GlmFamily::poisson:
      return z;
  }
  throw std::logic_error("unreachable");
}

double glm_weight(GlmFamily fam, double z) { return std::exp(glm_log_weight(fam, z)); }

Eigen::VectorXd glm_regression_vector(const GlmSpec& spec, const DesignPoint& x) {
  Eigen::VectorXd h(spec.m);
  spec.h(x, h);
  const double z = h.dot(spec.theta0);
  const double sqrt_w = std::exp(0.5 * glm_log_weight(spec.family, z));
  return sqrt_w * h;
}

Model make_glm_model(GlmSpec spec) {
  if (spec.theta0.size() != spec.m) throw std::invalid_argument("GlmSpec: theta0 size != m");
  const int m = spec.m;
  auto s = std::make_shared<GlmSpec>(std::move(spec));
  return Model(m, [s, m](const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> out) {
    Eigen::VectorXd h(m);
    s->h(x, h);
    const double z = h.dot(s->theta0);
    out = std::exp(0.5 * glm_log_weight(s->family, z)) * h;
  });
}

Eigen::VectorXd linearized_regression_vector(const NonlinearSpec& spec, const DesignPoint& x) {
  Eigen::VectorXd g(spec.m);
  spec.grad_eta(x, spec.theta0, g);
  if (!g.allFinite())
    throw std::runtime_error("linearized_regression_vector: non-finite gradient");
  return g;
}

Model make_linearized_model(NonlinearSpec spec) {
  if (spec.theta0.size() != spec.m) throw std::invalid_argument("NonlinearSpec: theta0 size != m");
  const int m = spec.m;
  auto s = std::make_shared<NonlinearSpec>(std::move(spec));
  return Model(m, [s](const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> out) {
    s->grad_eta(x, s->theta0, out);
  });
}

Model make_linear_model(int m,
                        std::function<void(const DesignPoint&, Eigen::Ref<Eigen::VectorXd>)> h) {
  return Model(m, std::move(h));
}

}  // namespace gridopt
