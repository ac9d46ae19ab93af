#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace visang {

/// A real function of one variable `w` parsed from text, e.g. "w - sin(w)".
///
/// Grammar: + - * / ^, unary minus, parentheses, numbers, the constant `pi`
/// and the functions sin cos tan sqrt exp log abs. derivative() returns the
/// exact symbolic derivative.
class Expression {
 public:
  struct Node;

  static Expression parse(std::string_view text);

  double operator()(double w) const;
  Expression derivative() const;
  std::string to_string() const;

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace visang
