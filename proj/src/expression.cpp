#include "systolic/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace systolic {

class ExpressionParser {
 public:
  explicit ExpressionParser(const std::string& text) : text_(text) {}

  Expression run() {
    Expression e;
    e.text_ = text_;
    parse_sum(e.program_);
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    if (e.program_.empty()) throw ParseError("empty expression", 0);
    int depth = 0, peak = 0;
    for (const Instr& in : e.program_) {
      switch (in.op) {
        case Op::PushConst:
        case Op::PushX1:
        case Op::PushX2: peak = std::max(peak, ++depth); break;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: --depth; break;
        default: break;
      }
    }
    if (peak > 64) throw ParseError("expression nests too deeply", 0);
    return e;
  }

 private:
  using Instr = Expression::Instr;
  using Op = Expression::Op;

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void parse_sum(std::vector<Instr>& out) {
    parse_term(out);
    while (true) {
      if (eat('+')) {
        parse_term(out);
        out.push_back({Op::Add});
      } else if (eat('-')) {
        parse_term(out);
        out.push_back({Op::Sub});
      } else {
        return;
      }
    }
  }

  void parse_term(std::vector<Instr>& out) {
    parse_unary(out);
    while (true) {
      if (eat('*')) {
        parse_unary(out);
        out.push_back({Op::Mul});
      } else if (eat('/')) {
        parse_unary(out);
        out.push_back({Op::Div});
      } else {
        return;
      }
    }
  }

  void parse_unary(std::vector<Instr>& out) {
    if (eat('-')) {
      parse_unary(out);
      out.push_back({Op::Neg});
      return;
    }
    parse_primary(out);
  }

  void parse_primary(std::vector<Instr>& out) {
    const char c = peek();
    if (c == '(') {
      eat('(');
      parse_sum(out);
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double value = std::strtod(begin, &end);
      if (end == begin) throw ParseError("malformed number", pos_);
      pos_ += static_cast<std::size_t>(end - begin);
      out.push_back({Op::PushConst, value});
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])))) {
        ++pos_;
      }
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "pi") {
        out.push_back({Op::PushConst, M_PI});
        return;
      }
      if (name == "x1") {
        out.push_back({Op::PushX1});
        return;
      }
      if (name == "x2") {
        out.push_back({Op::PushX2});
        return;
      }
      if (name == "sin" || name == "cos" || name == "exp") {
        if (!eat('(')) throw ParseError("expected '(' after " + name, pos_);
        parse_sum(out);
        if (!eat(')')) throw ParseError("expected ')'", pos_);
        out.push_back({name == "sin" ? Op::Sin : name == "cos" ? Op::Cos : Op::Exp});
        return;
      }
      throw ParseError("unknown identifier '" + name + "'", start);
    }
    throw ParseError("expected a value", pos_);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

Expression Expression::parse(const std::string& text) {
  return ExpressionParser(text).run();
}

double Expression::operator()(double x1, double x2) const {
  double stack[64];
  int top = -1;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Op::PushConst: stack[++top] = in.value; break;
      case Op::PushX1: stack[++top] = x1; break;
      case Op::PushX2: stack[++top] = x2; break;
      case Op::Add: --top; stack[top] += stack[top + 1]; break;
      case Op::Sub: --top; stack[top] -= stack[top + 1]; break;
      case Op::Mul: --top; stack[top] *= stack[top + 1]; break;
      case Op::Div: --top; stack[top] /= stack[top + 1]; break;
      case Op::Neg: stack[top] = -stack[top]; break;
      case Op::Sin: stack[top] = std::sin(stack[top]); break;
      case Op::Cos: stack[top] = std::cos(stack[top]); break;
      case Op::Exp: stack[top] = std::exp(stack[top]); break;
    }
  }
  return stack[0];
}

}  // namespace systolic
