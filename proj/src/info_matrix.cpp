#include "gridopt/info_matrix.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gridopt {

InfoMatrix::InfoMatrix(Eigen::MatrixXd entries) : mat_(std::move(entries)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() < 2)
    throw std::invalid_argument("InfoMatrix: need a square matrix, m >= 2");
  const double scale = mat_.cwiseAbs().maxCoeff();
  const double asym = (mat_ - mat_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1.0))
    throw std::invalid_argument("InfoMatrix: matrix is not symmetric");
  mat_ = 0.5 * (mat_ + mat_.transpose().eval());
}

void InfoMatrix::ensure_factorized() const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (factorized_) return;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat_);
  Eigen::VectorXd ev = es.eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  double log_det = 0;
  bool singular = false;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-10 * scale)
      throw std::runtime_error("InfoMatrix: matrix is indefinite beyond tolerance");
    if (ev[i] < 1e-300) {  // singular pivot
      singular = true;
    } else {
      log_det += std::log(ev[i]);
    }
  }
  log_det_ = singular ? -std::numeric_limits<double>::infinity() : log_det;
  singular_ = singular;
  factorized_ = true;
}

double InfoMatrix::log_det() const {
  ensure_factorized();
  return log_det_;
}

bool InfoMatrix::singular() const {
  ensure_factorized();
  return singular_;
}

double InfoMatrix::criterion() const {
  ensure_factorized();
  if (singular_) return 0.0;
  return std::exp(log_det_ / m());
}

const Eigen::MatrixXd& InfoMatrix::inverse() const {
  ensure_factorized();
  if (singular_) throw std::runtime_error("InfoMatrix: singular, inverse undefined");
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (!inverse_) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(mat_);
    inverse_ = ldlt.solve(Eigen::MatrixXd::Identity(m(), m()));
  }
  return *inverse_;
}

InfoMatrix information_matrix(const Design& design, const Model& model) {
  const int m = model.m();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd f(m);
  for (int i = 0; i < design.support_size(); ++i) {
    model.eval_into(design.point(i), f);
    if (f.size() != m) throw std::invalid_argument("information_matrix: model dimension mismatch");
    M.selfadjointView<Eigen::Lower>().rankUpdate(f, design.weight(i));
  }
  M.triangularView<Eigen::StrictlyUpper>() = M.transpose();
  return InfoMatrix(std::move(M));
}

double d_criterion(const InfoMatrix& M) { return M.criterion(); }

double variance_function(const Design& design, const Model& model, const DesignPoint& x) {
  InfoMatrix M = information_matrix(design, model);
  Eigen::VectorXd f = model.eval(x);
  return f.dot(M.inverse() * f);
}

double efficiency_lower_bound(int m, double candidate_max) {
  if (!(candidate_max > 0)) throw std::invalid_argument("efficiency_lower_bound: candidate_max <= 0");
  return static_cast<double>(m) / candidate_max;
}

double relative_efficiency(const Design& xi, const Design& zeta, const Model& model) {
  const double phi_zeta = information_matrix(zeta, model).criterion();
  if (!(phi_zeta > 0)) throw std::runtime_error("relative_efficiency: reference design is singular");
  return information_matrix(xi, model).criterion() / phi_zeta;
}

}  // namespace gridopt
