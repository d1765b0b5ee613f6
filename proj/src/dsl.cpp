#include "gridopt/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace gridopt::dsl {

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
  Tok kind;
  double value = 0;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::end;
      tok_.text = "<end>";
      return;
    }
    const char c = src_[pos_];
    switch (c) {
      case '+': tok_ = op(Tok::plus, "+"); return;
      case '-': tok_ = op(Tok::minus, "-"); return;
      case '*': tok_ = op(Tok::star, "*"); return;
      case '/': tok_ = op(Tok::slash, "/"); return;
      case '^': tok_ = op(Tok::caret, "^"); return;
      case '(': tok_ = op(Tok::lparen, "("); return;
      case ')': tok_ = op(Tok::rparen, ")"); return;
      case ',': tok_ = op(Tok::comma, ","); return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        id += src_[pos_];
        bump();
      }
      tok_.kind = Tok::ident;
      tok_.text = id;
      return;
    }
    throw DslError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  void lex_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                                  src_[pos_] == '.')) bump();
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      bump();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) bump();
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
      } else {
        pos_ = save;  // 'e' belonged to an identifier-less context; not an exponent
      }
    }
    const std::string text = src_.substr(start, pos_ - start);
    try {
      tok_.value = std::stod(text);
    } catch (const std::exception&) {
      throw DslError("malformed number '" + text + "'", tok_.line, tok_.col);
    }
    tok_.kind = Tok::number;
    tok_.text = text;
  }

  Token op(Tok k, const char* s) {
    bump();
    Token t;
    t.kind = k;
    t.text = s;
    t.line = tok_.line;
    t.col = tok_.col;
    return t;
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

// --------------------------------------------------------------- parser

std::shared_ptr<Expr> make(NodeKind k) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  return e;
}

class Parser {
 public:
  Parser(const std::string& src, int k, int m) : lex_(src), k_(k), m_(m) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    const Token& t = lex_.peek();
    if (t.kind != Tok::end)
      throw DslError("expected operator or end of expression, got '" + t.text + "'", t.line, t.col);
    return e;
  }

 private:
  ExprPtr expr() {
    ExprPtr e = term();
    while (lex_.peek().kind == Tok::plus || lex_.peek().kind == Tok::minus) {
      Token t = lex_.take();
      auto n = make(t.kind == Tok::plus ? NodeKind::add : NodeKind::sub);
      n->lhs = e;
      n->rhs = term();
      e = n;
    }
    return e;
  }

  ExprPtr term() {
    ExprPtr e = unary();
    while (lex_.peek().kind == Tok::star || lex_.peek().kind == Tok::slash) {
      Token t = lex_.take();
      auto n = make(t.kind == Tok::star ? NodeKind::mul : NodeKind::div);
      n->lhs = e;
      n->rhs = unary();
      e = n;
    }
    return e;
  }

  ExprPtr unary() {
    if (lex_.peek().kind == Tok::minus) {
      lex_.take();
      auto n = make(NodeKind::neg);
      n->lhs = unary();
      return n;
    }
    return power();
  }

  // '^' binds tighter than unary minus and is right-associative; the exponent
  // re-enters unary so "x^-2" parses.
  ExprPtr power() {
    ExprPtr base = primary();
    if (lex_.peek().kind == Tok::caret) {
      lex_.take();
      auto n = make(NodeKind::pow);
      n->lhs = base;
      n->rhs = unary();
      return n;
    }
    return base;
  }

  ExprPtr primary() {
    Token t = lex_.take();
    if (t.kind == Tok::number) {
      auto n = make(NodeKind::number);
      n->value = t.value;
      return n;
    }
    if (t.kind == Tok::lparen) {
      ExprPtr e = expr();
      expect(Tok::rparen, ")");
      return e;
    }
    if (t.kind == Tok::ident) return ident(t);
    throw DslError("expected number, variable, function, or '(', got '" + t.text + "'", t.line,
                   t.col);
  }

  ExprPtr ident(const Token& t) {
    static const std::map<std::string, Func> funcs = {{"exp", Func::exp},
                                                      {"log", Func::log},
                                                      {"sqrt", Func::sqrt},
                                                      {"normcdf", Func::normcdf},
                                                      {"normpdf", Func::normpdf}};
    if (auto it = funcs.find(t.text); it != funcs.end()) {
      expect(Tok::lparen, "(");
      auto n = make(NodeKind::call);
      n->func = it->second;
      n->lhs = expr();
      expect(Tok::rparen, ")");
      return n;
    }
    if (t.text.size() > 1 && t.text[0] == 'x') {
      int idx = var_index(t.text.substr(1), t);
      if (idx < 1 || idx > k_)
        throw DslError("variable " + t.text + " out of range (k = " + std::to_string(k_) + ")",
                       t.line, t.col);
      auto n = make(NodeKind::var_x);
      n->index = idx - 1;
      return n;
    }
    if (t.text.size() > 2 && t.text.substr(0, 2) == "th") {
      int idx = var_index(t.text.substr(2), t);
      if (idx < 1 || idx > m_)
        throw DslError("parameter " + t.text + " out of range (m = " + std::to_string(m_) + ")",
                       t.line, t.col);
      auto n = make(NodeKind::var_theta);
      n->index = idx - 1;
      return n;
    }
    throw DslError("unknown identifier '" + t.text + "'", t.line, t.col);
  }

  int var_index(const std::string& digits, const Token& t) {
    int idx = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
    if (ec != std::errc{} || p != digits.data() + digits.size())
      throw DslError("unknown identifier '" + t.text + "'", t.line, t.col);
    return idx;
  }

  void expect(Tok kind, const char* what) {
    Token t = lex_.take();
    if (t.kind != kind)
      throw DslError(std::string("expected '") + what + "', got '" + t.text + "'", t.line, t.col);
  }

  Lexer lex_;
  int k_;
  int m_;
};

// ----------------------------------------------------- evaluation (dual)

struct Dual {
  double v;
  double d;
};

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(Dual a) { return {-a.v, -a.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }

[[noreturn]] void domain_error(const Expr& e, const std::string& what);

inline double val(double x) { return x; }
inline double val(Dual x) { return x.v; }

template <class T>
T eval_node(const Expr& e, const std::vector<double>& x, const std::vector<T>& theta);

template <class T>
T apply_div(const Expr& e, T a, T b);
template <class T>
T apply_pow(const Expr& e, T a, T b);
template <class T>
T apply_call(const Expr& e, T a);

template <>
double apply_div(const Expr& e, double a, double b) {
  if (b == 0) domain_error(e, "division by zero");
  return a / b;
}
template <>
Dual apply_div(const Expr& e, Dual a, Dual b) {
  if (b.v == 0) domain_error(e, "division by zero");
  const double q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}

template <>
double apply_pow(const Expr& e, double a, double b) {
  const double r = std::pow(a, b);
  if (!std::isfinite(r)) domain_error(e, "power out of domain");
  return r;
}
template <>
Dual apply_pow(const Expr& e, Dual a, Dual b) {
  const double r = std::pow(a.v, b.v);
  if (!std::isfinite(r)) domain_error(e, "power out of domain");
  double dr = 0;
  if (a.d != 0) {
    dr += b.v * std::pow(a.v, b.v - 1) * a.d;
  }
  if (b.d != 0) {
    if (a.v <= 0) domain_error(e, "derivative of power with nonpositive base");
    dr += r * std::log(a.v) * b.d;
  }
  if (!std::isfinite(dr)) domain_error(e, "non-finite power derivative");
  return {r, dr};
}

template <>
double apply_call(const Expr& e, double a) {
  switch (e.func) {
    case Func::exp: return std::exp(a);
    case Func::log:
      if (a <= 0) domain_error(e, "log of nonpositive value");
      return std::log(a);
    case Func::sqrt:
      if (a < 0) domain_error(e, "sqrt of negative value");
      return std::sqrt(a);
    case Func::normcdf: return normal_cdf(a);
    case Func::normpdf: return normal_pdf(a);
  }
  throw std::logic_error("unreachable");
}
template <>
Dual apply_call(const Expr& e, Dual a) {
  switch (e.func) {
    case Func::exp: {
      const double r = std::exp(a.v);
      return {r, r * a.d};
    }
    case Func::log:
      if (a.v <= 0) domain_error(e, "log of nonpositive value");
      return {std::log(a.v), a.d / a.v};
    case Func::sqrt: {
      if (a.v < 0) domain_error(e, "sqrt of negative value");
      const double r = std::sqrt(a.v);
      if (a.d != 0 && r == 0) domain_error(e, "sqrt derivative at zero");
      return {r, a.d == 0 ? 0.0 : 0.5 * a.d / r};
    }
    case Func::normcdf: return {normal_cdf(a.v), normal_pdf(a.v) * a.d};
    case Func::normpdf: return {normal_pdf(a.v), -a.v * normal_pdf(a.v) * a.d};
  }
  throw std::logic_error("unreachable");
}

template <class T>
T eval_node(const Expr& e, const std::vector<double>& x, const std::vector<T>& theta) {
  switch (e.kind) {
    case NodeKind::number:
      if constexpr (std::is_same_v<T, Dual>) return {e.value, 0.0};
      else return e.value;
    case NodeKind::var_x:
      if constexpr (std::is_same_v<T, Dual>) return {x.at(e.index), 0.0};
      else return x.at(e.index);
    case NodeKind::var_theta: return theta.at(e.index);
    case NodeKind::neg: return -eval_node(*e.lhs, x, theta);
    case NodeKind::add: return eval_node(*e.lhs, x, theta) + eval_node(*e.rhs, x, theta);
    case NodeKind::sub: return eval_node(*e.lhs, x, theta) - eval_node(*e.rhs, x, theta);
    case NodeKind::mul: return eval_node(*e.lhs, x, theta) * eval_node(*e.rhs, x, theta);
    case NodeKind::div:
      return apply_div(e, eval_node(*e.lhs, x, theta), eval_node(*e.rhs, x, theta));
    case NodeKind::pow:
      return apply_pow(e, eval_node(*e.lhs, x, theta), eval_node(*e.rhs, x, theta));
    case NodeKind::call: return apply_call(e, eval_node(*e.lhs, x, theta));
  }
  throw std::logic_error("unreachable");
}

[[noreturn]] void domain_error(const Expr& e, const std::string& what) {
  throw DslError(what + " in subexpression " + print(e), 0, 0);
}

}  // namespace

ExprPtr parse_expr(const std::string& source, int k, int m) {
  return Parser(source, k, m).parse();
}

double eval(const Expr& e, const std::vector<double>& x, const std::vector<double>& theta) {
  const double r = eval_node<double>(e, x, theta);
  if (!std::isfinite(r)) throw DslError("non-finite result of " + print(e), 0, 0);
  return r;
}

std::vector<double> diff_theta(const Expr& e, const std::vector<double>& x,
                               const std::vector<double>& theta) {
  std::vector<double> grad(theta.size());
  std::vector<Dual> th(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) th[i] = {theta[i], 0.0};
  for (std::size_t j = 0; j < theta.size(); ++j) {
    th[j].d = 1.0;
    grad[j] = eval_node<Dual>(e, x, th).d;
    th[j].d = 0.0;
  }
  return grad;
}

std::string print(const Expr& e) {
  char buf[64];
  switch (e.kind) {
    case NodeKind::number:
      std::snprintf(buf, sizeof buf, "%.17g", e.value);
      return buf;
    case NodeKind::var_x: return "x" + std::to_string(e.index + 1);
    case NodeKind::var_theta: return "th" + std::to_string(e.index + 1);
    case NodeKind::neg: return "(-" + print(*e.lhs) + ")";
    case NodeKind::add: return "(" + print(*e.lhs) + " + " + print(*e.rhs) + ")";
    case NodeKind::sub: return "(" + print(*e.lhs) + " - " + print(*e.rhs) + ")";
    case NodeKind::mul: return "(" + print(*e.lhs) + " * " + print(*e.rhs) + ")";
    case NodeKind::div: return "(" + print(*e.lhs) + " / " + print(*e.rhs) + ")";
    case NodeKind::pow: return "(" + print(*e.lhs) + " ^ " + print(*e.rhs) + ")";
    case NodeKind::call: {
      const char* name = nullptr;
      switch (e.func) {
        case Func::exp: name = "exp"; break;
        case Func::log: name = "log"; break;
        case Func::sqrt: name = "sqrt"; break;
        case Func::normcdf: name = "normcdf"; break;
        case Func::normpdf: name = "normpdf"; break;
      }
      return std::string(name) + "(" + print(*e.lhs) + ")";
    }
  }
  throw std::logic_error("unreachable");
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::number: return a.value == b.value;
    case NodeKind::var_x:
    case NodeKind::var_theta: return a.index == b.index;
    case NodeKind::neg: return structurally_equal(*a.lhs, *b.lhs);
    case NodeKind::call:
      return a.func == b.func && structurally_equal(*a.lhs, *b.lhs);
    default:
      return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
}

}  // namespace gridopt::dsl
