#ifndef GRIDOPT_INFO_MATRIX_HPP
#define GRIDOPT_INFO_MATRIX_HPP

#include <Eigen/Dense>
#include <mutex>
#include <optional>

#include "gridopt/design.hpp"
#include "gridopt/model.hpp"

namespace gridopt {

/// Symmetric nonnegative-definite information matrix with lazily cached
/// log-determinant and inverse. Immutable after construction; the caches are
/// populated under an internal lock, so shared use across threads is safe.
class InfoMatrix {
 public:
  explicit InfoMatrix(Eigen::MatrixXd entries);

  int m() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& entries() const { return mat_; }

  /// det(M)^(1/m) in the log domain; 0 for singular M.
  double criterion() const;
  /// log det(M); -inf for singular M.
  double log_det() const;
  /// Throws for singular M.
  const Eigen::MatrixXd& inverse() const;
  bool singular() const;

 private:
  void ensure_factorized() const;

  Eigen::MatrixXd mat_;
  mutable std::mutex cache_mutex_;
  mutable bool factorized_ = false;
  mutable double log_det_ = 0;
  mutable bool singular_ = true;
  mutable std::optional<Eigen::MatrixXd> inverse_;
};

InfoMatrix information_matrix(const Design& design, const Model& model);

/// Phi(M) = det(M)^(1/m), evaluated via eigenvalue log-sums. Eigenvalues in
/// [-1e-10*||M||, 0) are clamped to 0; more negative ones are an error.
double d_criterion(const InfoMatrix& M);

/// d_xi(x) = f'(x) M^-1 f(x). Throws if M is singular.
double variance_function(const Design& design, const Model& model, const DesignPoint& x);

/// m / candidate_max, where candidate_max is a maximum of d_xi over some
/// probed subset of the grid supplied by the caller. Not a certified global
/// bound unless the probe was exhaustive.
double efficiency_lower_bound(int m, double candidate_max);

/// Phi(M(xi)) / Phi(M(zeta)); throws if zeta is singular.
double relative_efficiency(const Design& xi, const Design& zeta, const Model& model);

}  // namespace gridopt

#endif
