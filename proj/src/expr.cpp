#include "levimax/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "levimax/errors.hpp"

namespace levimax {

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Log, Sin, Cos, Sqrt };

struct Expression::Node {
  Op op = Op::Const;
  double value = 0.0;
  int index = 0;     // 0-based variable index
  int exponent = 0;  // for Pow
  std::unique_ptr<Node> lhs;
  std::unique_ptr<Node> rhs;
};

Jet2 Jet2::constant(double v, int dim) {
  return Jet2{v, Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Zero(dim, dim)};
}

Jet2 Jet2::variable(double v, int index, int dim) {
  Jet2 j = constant(v, dim);
  j.grad[index] = 1.0;
  return j;
}

namespace {

using NodePtr = std::unique_ptr<Expression::Node>;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto node = std::make_unique<Expression::Node>();
  node->op = op;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

class Parser {
 public:
  Parser(std::string_view text, int n) : text_(text), n_(n) {}

  NodePtr parse() {
    skip_space();
    if (at_end()) throw ParseError("empty expression", pos_);
    NodePtr root = expr();
    skip_space();
    if (!at_end()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return root;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail_here(const std::string& what) const {
    if (at_end()) throw ParseError(what + ": unexpected end of input", pos_);
    throw ParseError(what + ": unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
  }

  NodePtr expr() {
    NodePtr node = term();
    for (;;) {
      if (accept('+')) {
        node = make(Op::Add, std::move(node), term());
      } else if (accept('-')) {
        node = make(Op::Sub, std::move(node), term());
      } else {
        return node;
      }
    }
  }

  NodePtr term() {
    NodePtr node = unary();
    for (;;) {
      if (accept('*')) {
        node = make(Op::Mul, std::move(node), unary());
      } else if (accept('/')) {
        node = make(Op::Div, std::move(node), unary());
      } else {
        return node;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (!accept('^')) return base;
    auto node = make(Op::Pow, std::move(base));
    node->exponent = integer();
    return node;
  }

  int integer() {
    skip_space();
    const bool paren = accept('(');
    const bool negative = accept('-');
    skip_space();
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail_here("expected integer exponent");
    const int value = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (paren && !accept(')')) fail_here("expected ')'");
    return negative ? -value : value;
  }

  NodePtr primary() {
    skip_space();
    if (at_end()) fail_here("expected operand");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail_here("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail_here("expected operand");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (!at_end() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (!at_end() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (!at_end() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      digits();
      if (pos_ == exp_start) pos_ = save;
    }
    const std::string literal(text_.substr(start, pos_ - start));
    if (literal == ".") throw ParseError("malformed number", start);
    auto node = make(Op::Const);
    node->value = std::stod(literal);
    return node;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (!at_end() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      const long index = std::stol(name.substr(1));
      if (index < 1 || index > 2L * n_) {
        throw ParseError("variable index " + std::to_string(index) + " out of range for n=" +
                             std::to_string(n_) + " (allowed x1..x" + std::to_string(2 * n_) + ")",
                         start);
      }
      auto node = make(Op::Var);
      node->index = static_cast<int>(index - 1);
      return node;
    }
    if (name == "pi") {
      auto node = make(Op::Const);
      node->value = std::numbers::pi;
      return node;
    }

    Op op;
    if (name == "exp") {
      op = Op::Exp;
    } else if (name == "log") {
      op = Op::Log;
    } else if (name == "sin") {
      op = Op::Sin;
    } else if (name == "cos") {
      op = Op::Cos;
    } else if (name == "sqrt") {
      op = Op::Sqrt;
    } else {
      throw ParseError("unknown identifier '" + name + "'", start);
    }
    if (!accept('(')) fail_here("expected '(' after " + name);
    NodePtr arg = expr();
    if (!accept(')')) fail_here("expected ')'");
    return make(op, std::move(arg));
  }

  std::string_view text_;
  int n_;
  std::size_t pos_ = 0;
};

// Scalar kernels shared by the double and jet evaluators.
double checked_log_arg(double a) {
  if (!(a > 0.0)) throw DomainError("log of non-positive argument " + std::to_string(a));
  return a;
}

double eval_double(const Expression::Node& node, std::span<const double> x) {
  switch (node.op) {
    case Op::Const:
      return node.value;
    case Op::Var:
      return x[node.index];
    case Op::Add:
      return eval_double(*node.lhs, x) + eval_double(*node.rhs, x);
    case Op::Sub:
      return eval_double(*node.lhs, x) - eval_double(*node.rhs, x);
    case Op::Mul:
      return eval_double(*node.lhs, x) * eval_double(*node.rhs, x);
    case Op::Div: {
      const double d = eval_double(*node.rhs, x);
      if (d == 0.0) throw DomainError("division by zero");
      return eval_double(*node.lhs, x) / d;
    }
    case Op::Neg:
      return -eval_double(*node.lhs, x);
    case Op::Pow: {
      const double b = eval_double(*node.lhs, x);
      if (b == 0.0 && node.exponent < 0) throw DomainError("zero raised to a negative power");
      return std::pow(b, node.exponent);
    }
    case Op::Exp:
      return std::exp(eval_double(*node.lhs, x));
    case Op::Log:
      return std::log(checked_log_arg(eval_double(*node.lhs, x)));
    case Op::Sin:
      return std::sin(eval_double(*node.lhs, x));
    case Op::Cos:
      return std::cos(eval_double(*node.lhs, x));
    case Op::Sqrt: {
      const double a = eval_double(*node.lhs, x);
      if (a < 0.0) throw DomainError("sqrt of negative argument " + std::to_string(a));
      return std::sqrt(a);
    }
  }
  return 0.0;
}

// phi(a) with phi', phi'' applied to a jet.
Jet2 chain(const Jet2& a, double f0, double f1, double f2) {
  Jet2 r;
  r.value = f0;
  r.grad = f1 * a.grad;
  r.hess = f1 * a.hess + f2 * a.grad * a.grad.transpose();
  return r;
}

Jet2 mul(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value * b.value;
  r.grad = a.value * b.grad + b.value * a.grad;
  const Eigen::MatrixXd cross = a.grad * b.grad.transpose();
  r.hess = a.value * b.hess + b.value * a.hess + cross + cross.transpose();
  return r;
}

Jet2 eval_jet_node(const Expression::Node& node, const Eigen::VectorXd& x) {
  const int dim = static_cast<int>(x.size());
  switch (node.op) {
    case Op::Const:
      return Jet2::constant(node.value, dim);
    case Op::Var:
      return Jet2::variable(x[node.index], node.index, dim);
    case Op::Add: {
      Jet2 a = eval_jet_node(*node.lhs, x);
      const Jet2 b = eval_jet_node(*node.rhs, x);
      a.value += b.value;
      a.grad += b.grad;
      a.hess += b.hess;
      return a;
    }
    case Op::Sub: {
      Jet2 a = eval_jet_node(*node.lhs, x);
      const Jet2 b = eval_jet_node(*node.rhs, x);
      a.value -= b.value;
      a.grad -= b.grad;
      a.hess -= b.hess;
      return a;
    }
    case Op::Mul:
      return mul(eval_jet_node(*node.lhs, x), eval_jet_node(*node.rhs, x));
    case Op::Div: {
      const Jet2 b = eval_jet_node(*node.rhs, x);
      if (b.value == 0.0) throw DomainError("division by zero");
      const double v = b.value;
      const Jet2 inv = chain(b, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
      return mul(eval_jet_node(*node.lhs, x), inv);
    }
    case Op::Neg: {
      Jet2 a = eval_jet_node(*node.lhs, x);
      a.value = -a.value;
      a.grad = -a.grad;
      a.hess = -a.hess;
      return a;
    }
    case Op::Pow: {
      const Jet2 a = eval_jet_node(*node.lhs, x);
      const int k = node.exponent;
      const double v = a.value;
      if (k == 0) return Jet2::constant(1.0, dim);
      if (v == 0.0 && k < 0) throw DomainError("zero raised to a negative power");
      const double f0 = std::pow(v, k);
      const double f1 = k * std::pow(v, k - 1);
      const double f2 = (k == 1) ? 0.0 : k * (k - 1) * std::pow(v, k - 2);
      return chain(a, f0, f1, f2);
    }
    case Op::Exp: {
      const Jet2 a = eval_jet_node(*node.lhs, x);
      const double e = std::exp(a.value);
      return chain(a, e, e, e);
    }
    case Op::Log: {
      const Jet2 a = eval_jet_node(*node.lhs, x);
      const double v = checked_log_arg(a.value);
      return chain(a, std::log(v), 1.0 / v, -1.0 / (v * v));
    }
    case Op::Sin: {
      const Jet2 a = eval_jet_node(*node.lhs, x);
      return chain(a, std::sin(a.value), std::cos(a.value), -std::sin(a.value));
    }
    case Op::Cos: {
      const Jet2 a = eval_jet_node(*node.lhs, x);
      return chain(a, std::cos(a.value), -std::sin(a.value), -std::cos(a.value));
    }
    case Op::Sqrt: {
      const Jet2 a = eval_jet_node(*node.lhs, x);
      if (!(a.value > 0.0)) {
        throw DomainError("sqrt is not differentiable at non-positive argument " +
                          std::to_string(a.value));
      }
      const double s = std::sqrt(a.value);
      return chain(a, s, 0.5 / s, -0.25 / (s * a.value));
    }
  }
  return Jet2::constant(0.0, dim);
}

}  // namespace

Expression Expression::parse(std::string_view text, int n) {
  if (n < 1) throw PreconditionError("expression dimension must be >= 1");
  Parser parser(text, n);
  std::shared_ptr<const Node> root = parser.parse();
  return Expression(std::move(root), n, std::string(text));
}

double Expression::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != 2 * n_) {
    throw DimensionError("expression expects " + std::to_string(2 * n_) + " coordinates, got " +
                         std::to_string(x.size()));
  }
  return eval_double(*root_, x);
}

Jet2 Expression::eval_jet(const Eigen::VectorXd& x) const {
  if (static_cast<int>(x.size()) != 2 * n_) {
    throw DimensionError("expression expects " + std::to_string(2 * n_) + " coordinates, got " +
                         std::to_string(x.size()));
  }
  return eval_jet_node(*root_, x);
}

}  // namespace levimax
