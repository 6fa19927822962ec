#pragma once

#include <memory>
#include <span>
#include <string>

#include "fsgl/grid_function.hpp"

namespace fsgl {

/// Arithmetic expression in the coordinates of a point, e.g.
/// "x^0.6", "sin(3*x1) * x2", "abs(x - 0.5)^0.75".
///
/// Variables: x (same as x1), x1, x2, x3. Operators + - * / ^ with the usual
/// precedence, ^ right-associative, unary minus binding looser than ^.
/// Functions: sin cos tan exp log sqrt abs, min(a,b), max(a,b).
/// Constants: pi, e. Parse errors raise ConfigError with the offset.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double operator()(std::span<const double> x) const;
  double operator()(double x) const;

  /// Largest variable index used (0 when the expression is constant).
  int arity() const { return arity_; }
  const std::string& text() const { return text_; }
  PointFunction as_point_function() const;

  struct Node;

 private:
  std::string text_;
  int arity_ = 0;
  std::shared_ptr<const Node> root_;
};

}  // namespace fsgl
