#pragma once

#include <memory>
#include <string>
#include <vector>

#include "xsect/error.hpp"
#include "xsect/forms/domain.hpp"

namespace xsect::cli {

/// Syntax error in an expression; column is 1-based.
class ExpressionError : public Error {
 public:
  ExpressionError(const std::string& message, int column);
  int column() const { return column_; }

 private:
  int column_;
};

/// Scalar expression over the coordinates x, y, z.
///
/// Grammar: sums and differences of products and quotients of signed factors;
/// a factor is a number, pi, a coordinate, a parenthesized expression, or
/// sin(...) / cos(...).
class Expression {
 public:
  static Expression parse(const std::string& text);

  double operator()(const forms::Point& p) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  Expression(std::string text, std::shared_ptr<const Node> root);

  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace xsect::cli
