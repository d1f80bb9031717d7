#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace systolic {

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        pos(position) {}
  std::size_t pos;
};

/// Closed arithmetic mini-language for conformal factors: +, -, *, /, sin,
/// cos, exp, numeric constants, pi, and the coordinates x1, x2.  Compiled to a
/// small postfix program; evaluation allocates nothing.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double operator()(double x1, double x2) const;

  const std::string& text() const { return text_; }

 private:
  enum class Op : unsigned char { PushConst, PushX1, PushX2, Add, Sub, Mul, Div, Neg, Sin, Cos, Exp };
  struct Instr {
    Op op;
    double value = 0.0;
  };

  std::string text_;
  std::vector<Instr> program_;

  friend class ExpressionParser;
};

}  // namespace systolic
