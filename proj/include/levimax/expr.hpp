#pragma once

// Closed-form expressions over the real coordinates x1..x_{2n}.
//
// Grammar (whitespace-insensitive):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   integer := ['-'] digits | '(' ['-'] digits ')'
//   primary := number | 'x' digits | 'pi' | func '(' expr ')' | '(' expr ')'
//   func    := 'exp' | 'log' | 'sin' | 'cos' | 'sqrt'
//   number  := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits]

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace levimax {

/// Value, gradient and Hessian of a function at a point (second-order forward jet).
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  static Jet2 constant(double v, int dim);
  static Jet2 variable(double v, int index, int dim);
};

class Expression {
 public:
  struct Node;

  /// Parses `text` for complex dimension `n` (variables x1..x_{2n}).
  /// Throws ParseError for syntax errors, unknown identifiers and out-of-range variables.
  static Expression parse(std::string_view text, int n);

  int dimension() const noexcept { return n_; }
  const std::string& text() const noexcept { return text_; }

  /// Throws DomainError on log/sqrt of a non-positive argument or division by zero.
  double eval(std::span<const double> x) const;
  double eval(const Eigen::VectorXd& x) const { return eval(std::span<const double>(x.data(), x.size())); }

  /// Exact value, gradient and Hessian by forward propagation of second-order jets.
  Jet2 eval_jet(const Eigen::VectorXd& x) const;

 private:
  Expression(std::shared_ptr<const Node> root, int n, std::string text)
      : root_(std::move(root)), n_(n), text_(std::move(text)) {}

  std::shared_ptr<const Node> root_;
  int n_ = 0;
  std::string text_;
};

}  // namespace levimax
