#ifndef GRIDOPT_DSL_HPP
#define GRIDOPT_DSL_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridopt/grid.hpp"
#include "gridopt/model.hpp"

namespace gridopt::dsl {

/// Parse or evaluation failure with source position (1-based; 0 when the
/// position is not meaningful).
struct DslError : std::runtime_error {
  DslError(std::string msg, int line, int column)
      : std::runtime_error(std::move(msg)), line(line), column(column) {}
  int line;
  int column;
};

enum class NodeKind { number, var_x, var_theta, neg, add, sub, mul, div, pow, call };
enum class Func { exp, log, sqrt, normcdf, normpdf };

struct Expr {
  NodeKind kind;
  double value = 0;      // number
  int index = 0;         // var_x / var_theta, 0-based
  Func func = Func::exp; // call
  std::shared_ptr<const Expr> lhs, rhs;  // rhs only for binary nodes
};

using ExprPtr = std::shared_ptr<const Expr>;

/// Parse a single expression over x1..xk, th1..thm. Standard precedence,
/// ^ right-associative, everything else left-associative.
ExprPtr parse_expr(const std::string& source, int k, int m);

double eval(const Expr& e, const std::vector<double>& x, const std::vector<double>& theta);

/// Gradient with respect to theta via forward-mode dual sweeps.
std::vector<double> diff_theta(const Expr& e, const std::vector<double>& x,
                               const std::vector<double>& theta);

/// Fully parenthesized rendering; re-parsing yields a structurally identical tree.
std::string print(const Expr& e);
bool structurally_equal(const Expr& a, const Expr& b);

enum class ModelFamily { linear, nonlinear, logistic, probit, poisson };

/// Parsed model file: grid specification plus either the components of h or a
/// single mean function eta.
struct ModelFile {
  int k = 0;
  int m = 0;
  ModelFamily family = ModelFamily::linear;
  std::vector<double> theta0;            // empty for linear
  std::vector<std::vector<double>> factor_levels;
  std::vector<ExprPtr> h;                // size m, or empty when eta is used
  ExprPtr eta;                           // null when h is used
};

ModelFile parse_model_file(const std::string& source);

FactorGrid grid_of(const ModelFile& mf);
Model model_of(const ModelFile& mf);

}  // namespace gridopt::dsl

#endif
