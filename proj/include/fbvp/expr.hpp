#pragma once

// Arithmetic expression language for problem data.
//
//   expr    := term { ("+" | "-") term }
//   term    := unary { ("*" | "/") unary }
//   unary   := "-" unary | power
//   power   := primary [ "^" unary ]          (right associative)
//   primary := number | name | name "(" expr { "," expr } ")" | "(" expr ")"
//
// Functions: sin cos exp ln sqrt abs (one argument), min max (two).

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fbvp::expr {

enum class Builtin { Sin, Cos, Exp, Ln, Sqrt, Abs, Min, Max };

struct Node {
  enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

  Kind kind = Kind::Number;
  double value = 0.0;        // Number
  std::size_t variable = 0;  // Variable: index into the declared list
  Builtin function = Builtin::Sin;
  std::vector<Node> children;

  friend bool operator==(const Node&, const Node&) = default;
};

/// Parses `source`, resolving names against `variables`. Throws SyntaxError,
/// UnknownIdentifierError or ArityError.
Node parse(std::string_view source, std::span<const std::string> variables);

/// Fully parenthesized text that parses back to an identical tree.
std::string to_string(const Node& node, std::span<const std::string> variables);

}  // namespace fbvp::expr

namespace fbvp {

/// A compiled, immutable expression over a fixed list of variables. Copies
/// share the compiled program.
class ScalarFunc {
 public:
  ScalarFunc() = default;

  static ScalarFunc compile(std::string_view source, std::vector<std::string> variables);
  /// Expression returning `value` for any arguments.
  static ScalarFunc constant(double value, std::vector<std::string> variables);

  /// Throws ArityError when `args.size() != arity()` and EvalDomainError on
  /// ln/sqrt/pow/division domain violations.
  double eval(std::span<const double> args) const;
  double operator()(std::initializer_list<double> args) const {
    return eval(std::span<const double>(args.begin(), args.size()));
  }

  std::size_t arity() const noexcept;
  const std::vector<std::string>& variables() const;
  const std::string& source() const;
  const expr::Node& ast() const;
  bool valid() const noexcept { return impl_ != nullptr; }
  /// True when the tree is a literal; `constant_value()` then returns it.
  bool is_constant() const;
  double constant_value() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Variable lists used throughout the problem description.
inline const std::vector<std::string>& spatial_vars() {
  static const std::vector<std::string> v{"x1", "x2"};
  return v;
}
inline const std::vector<std::string>& nonlinearity_vars() {
  static const std::vector<std::string> v{"x1", "x2", "u", "v"};
  return v;
}

}  // namespace fbvp
