#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridopt/dsl.hpp"

namespace gridopt::dsl {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (trim(s.substr(pos)).empty() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw DslError("expected a number, got '" + trim(s) + "'", line, 1);
}

std::vector<double> parse_number_list(const std::string& body, int line) {
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, line));
  return out;
}

// "factor 3: -1 1 0.5" or "factor 3: {-1, 0, 1}"
void parse_factor(ModelFile& mf, const std::string& rest, int line) {
  std::stringstream ss(rest);
  int idx = 0;
  ss >> idx;
  std::string colon;
  ss >> colon;
  if (!ss || colon != ":")
    throw DslError("malformed factor directive (expected 'factor i: ...')", line, 1);
  if (idx < 1 || idx > mf.k)
    throw DslError("factor index " + std::to_string(idx) + " out of range", line, 1);

  std::string body;
  std::getline(ss, body);
  body = trim(body);
  std::vector<double>& levels = mf.factor_levels.at(idx - 1);
  if (!body.empty() && body.front() == '{') {
    if (body.back() != '}') throw DslError("unterminated level list", line, 1);
    levels = parse_number_list(body.substr(1, body.size() - 2), line);
    if (std::adjacent_find(levels.begin(), levels.end(),
                           [](double a, double b) { return a >= b; }) != levels.end())
      throw DslError("levels must be strictly increasing", line, 1);
  } else {
    std::stringstream bs(body);
    double lo, hi, step;
    if (!(bs >> lo >> hi >> step))
      throw DslError("expected 'lo hi step' or '{l1, l2, ...}'", line, 1);
    levels = uniform_levels(lo, hi, step);
  }
  if (levels.empty()) throw DslError("factor has no levels", line, 1);
}

}  // namespace

ModelFile parse_model_file(const std::string& source) {
  ModelFile mf;
  struct ExprLine {
    std::string target;  // "eta" or "h<i>"
    std::string text;
    int line;
  };
  std::vector<ExprLine> expr_lines;
  bool have_k = false, have_m = false, have_family = false;

  std::stringstream ss(source);
  std::string raw;
  int lineno = 0;
  while (std::getline(ss, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;

    if (s.rfind("factor", 0) == 0) {
      if (!have_k) throw DslError("'k = ...' must come before factor directives", lineno, 1);
      parse_factor(mf, trim(s.substr(6)), lineno);
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos) throw DslError("expected '<name> = <value>'", lineno, 1);
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));

    if (key == "k") {
      mf.k = static_cast<int>(parse_number(val, lineno));
      if (mf.k < 1) throw DslError("k must be >= 1", lineno, 1);
      mf.factor_levels.assign(mf.k, {});
      have_k = true;
    } else if (key == "m") {
      mf.m = static_cast<int>(parse_number(val, lineno));
      if (mf.m < 2) throw DslError("m must be >= 2", lineno, 1);
      have_m = true;
    } else if (key == "family") {
      if (val == "linear") mf.family = ModelFamily::linear;
      else if (val == "nonlinear") mf.family = ModelFamily::nonlinear;
      else if (val == "logistic") mf.family = ModelFamily::logistic;
      else if (val == "probit") mf.family = ModelFamily::probit;
      else if (val == "poisson") mf.family = ModelFamily::poisson;
      else throw DslError("unknown family '" + val + "'", lineno, 1);
      have_family = true;
    } else if (key == "theta0") {
      if (val.size() < 2 || val.front() != '[' || val.back() != ']')
        throw DslError("theta0 must be a bracketed list [..]", lineno, 1);
      mf.theta0 = parse_number_list(val.substr(1, val.size() - 2), lineno);
    } else if (key == "eta" || (key.size() > 1 && key[0] == 'h')) {
      expr_lines.push_back({key, val, lineno});
    } else {
      throw DslError("unknown directive '" + key + "'", lineno, 1);
    }
  }

  if (!have_k || !have_m) throw DslError("model file must declare k and m", 0, 0);
  if (!have_family) throw DslError("model file must declare a family", 0, 0);
  for (int i = 0; i < mf.k; ++i)
    if (mf.factor_levels[i].empty())
      throw DslError("factor " + std::to_string(i + 1) + " has no level specification", 0, 0);

  bool has_h = false, has_eta = false;
  mf.h.assign(mf.m, nullptr);
  for (const auto& el : expr_lines) {
    if (el.target == "eta") {
      has_eta = true;
      mf.eta = parse_expr(el.text, mf.k, mf.m);
    } else {
      has_h = true;
      int idx = 0;
      try {
        idx = std::stoi(el.target.substr(1));
      } catch (const std::exception&) {
        throw DslError("unknown directive '" + el.target + "'", el.line, 1);
      }
      if (idx < 1 || idx > mf.m)
        throw DslError("component index of " + el.target + " out of range", el.line, 1);
      mf.h[idx - 1] = parse_expr(el.text, mf.k, mf.m);
    }
  }
  if (has_h && has_eta) throw DslError("declare either h components or eta, not both", 0, 0);
  if (!has_h && !has_eta) throw DslError("model file needs h1..hm or eta", 0, 0);
  if (has_eta && mf.family != ModelFamily::nonlinear)
    throw DslError("eta form requires family = nonlinear", 0, 0);
  if (has_h && mf.family == ModelFamily::nonlinear)
    throw DslError("family = nonlinear requires an eta expression", 0, 0);
  if (has_h) {
    for (int i = 0; i < mf.m; ++i)
      if (!mf.h[i]) throw DslError("missing component h" + std::to_string(i + 1), 0, 0);
  } else {
    mf.h.clear();
  }
  if (mf.family != ModelFamily::linear &&
      static_cast<int>(mf.theta0.size()) != mf.m)
    throw DslError("theta0 must have m entries for family " +
                       std::string(mf.family == ModelFamily::nonlinear ? "nonlinear" : "glm"),
                   0, 0);
  return mf;
}

FactorGrid grid_of(const ModelFile& mf) { return FactorGrid(mf.factor_levels); }

Model model_of(const ModelFile& mf) {
  const int m = mf.m;
  if (mf.family == ModelFamily::nonlinear) {
    auto eta = mf.eta;
    auto theta0 = mf.theta0;
    return Model(m, [eta, theta0, m](const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> out) {
      const std::vector<double> g = diff_theta(*eta, x, theta0);
      for (int i = 0; i < m; ++i) out[i] = g[i];
      if (!out.allFinite()) throw DslError("non-finite gradient of eta", 0, 0);
    });
  }

  auto h = mf.h;
  if (mf.family == ModelFamily::linear) {
    return Model(m, [h, m](const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> out) {
      static const std::vector<double> no_theta;
      for (int i = 0; i < m; ++i) out[i] = eval(*h[i], x, no_theta);
    });
  }

  GlmFamily fam = mf.family == ModelFamily::logistic  ? GlmFamily::logistic
                  : mf.family == ModelFamily::probit  ? GlmFamily::probit
                                                      : GlmFamily::poisson;
  auto theta0 = mf.theta0;
  return Model(m, [h, theta0, fam, m](const DesignPoint& x, Eigen::Ref<Eigen::VectorXd> out) {
    double z = 0;
    for (int i = 0; i < m; ++i) {
      out[i] = eval(*h[i], x, theta0);
      z += out[i] * theta0[i];
    }
    out *= std::exp(0.5 * glm_log_weight(fam, z));
  });
}

}  // namespace gridopt::dsl
