#include "fbvp/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "fbvp/errors.hpp"

namespace fbvp::expr {
namespace {

struct BuiltinInfo {
  std::string_view name;
  Builtin id;
  std::size_t arity;
};

constexpr std::array<BuiltinInfo, 8> kBuiltins{{
    {"sin", Builtin::Sin, 1},
    {"cos", Builtin::Cos, 1},
    {"exp", Builtin::Exp, 1},
    {"ln", Builtin::Ln, 1},
    {"sqrt", Builtin::Sqrt, 1},
    {"abs", Builtin::Abs, 1},
    {"min", Builtin::Min, 2},
    {"max", Builtin::Max, 2},
}};

const BuiltinInfo* find_builtin(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

const BuiltinInfo& builtin_info(Builtin id) {
  for (const auto& b : kBuiltins) {
    if (b.id == id) return b;
  }
  return kBuiltins[0];
}

class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string> vars) : src_(src), vars_(vars) {}

  Node run() {
    skip_ws();
    if (pos_ >= src_.size()) fail("empty expression");
    Node n = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  static Node binary(Node::Kind k, Node lhs, Node rhs) {
    Node n;
    n.kind = k;
    n.children.reserve(2);
    n.children.push_back(std::move(lhs));
    n.children.push_back(std::move(rhs));
    return n;
  }

  Node parse_expr() {
    Node lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Node::Kind::Add, std::move(lhs), parse_term());
      } else if (accept('-')) {
        lhs = binary(Node::Kind::Sub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  Node parse_term() {
    Node lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Node::Kind::Mul, std::move(lhs), parse_unary());
      } else if (accept('/')) {
        lhs = binary(Node::Kind::Div, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Node parse_unary() {
    if (accept('-')) {
      Node n;
      n.kind = Node::Kind::Negate;
      n.children.push_back(parse_unary());
      return n;
    }
    return parse_power();
  }

  Node parse_power() {
    Node base = parse_primary();
    if (accept('^')) return binary(Node::Kind::Pow, std::move(base), parse_unary());
    return base;
  }

  Node parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
    if (c == '(') {
      ++pos_;
      Node inner = parse_expr();
      expect(')');
      return inner;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Node parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    Node n;
    n.kind = Node::Kind::Number;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, n.value);
    if (ec != std::errc() || ptr != last || !std::isfinite(n.value)) {
      pos_ = start;
      fail("number out of range");
    }
    return n;
  }

  Node parse_name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      const BuiltinInfo* b = find_builtin(name);
      if (b == nullptr) throw UnknownIdentifierError(std::string(name));
      ++pos_;
      Node call;
      call.kind = Node::Kind::Call;
      call.function = b->id;
      call.children.push_back(parse_expr());
      while (accept(',')) call.children.push_back(parse_expr());
      expect(')');
      if (call.children.size() != b->arity) {
        throw ArityError("function '" + std::string(name) + "' takes " +
                         std::to_string(b->arity) + " argument(s), got " +
                         std::to_string(call.children.size()));
      }
      return call;
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) {
        Node v;
        v.kind = Node::Kind::Variable;
        v.variable = i;
        return v;
      }
    }
    throw UnknownIdentifierError(std::string(name));
  }

  std::string_view src_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
};

void print(const Node& n, std::span<const std::string> vars, std::string& out) {
  using K = Node::Kind;
  switch (n.kind) {
    case K::Number: {
      std::array<char, 64> buf{};
      auto res = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
      out.append(buf.data(), res.ptr);
      return;
    }
    case K::Variable:
      out += vars[n.variable];
      return;
    case K::Negate:
      out += "(-";
      print(n.children[0], vars, out);
      out += ')';
      return;
    case K::Call: {
      out += builtin_info(n.function).name;
      out += '(';
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i > 0) out += ',';
        print(n.children[i], vars, out);
      }
      out += ')';
      return;
    }
    default: {
      static constexpr std::array<char, 9> ops{' ', ' ', ' ', '+', '-', '*', '/', '^', ' '};
      out += '(';
      print(n.children[0], vars, out);
      out += ops[static_cast<std::size_t>(n.kind)];
      print(n.children[1], vars, out);
      out += ')';
      return;
    }
  }
}

}  // namespace

Node parse(std::string_view source, std::span<const std::string> variables) {
  return Parser(source, variables).run();
}

std::string to_string(const Node& node, std::span<const std::string> variables) {
  std::string out;
  print(node, variables, out);
  return out;
}

}  // namespace fbvp::expr

namespace fbvp {

namespace {

enum class Op : unsigned char {
  Push, Load, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Ln, Sqrt, Abs, Min, Max
};

struct Instr {
  Op op;
  double value;
  std::size_t index;
};

void emit(const expr::Node& n, std::vector<Instr>& code) {
  using K = expr::Node::Kind;
  for (const auto& c : n.children) emit(c, code);
  switch (n.kind) {
    case K::Number: code.push_back({Op::Push, n.value, 0}); break;
    case K::Variable: code.push_back({Op::Load, 0.0, n.variable}); break;
    case K::Negate: code.push_back({Op::Neg, 0.0, 0}); break;
    case K::Add: code.push_back({Op::Add, 0.0, 0}); break;
    case K::Sub: code.push_back({Op::Sub, 0.0, 0}); break;
    case K::Mul: code.push_back({Op::Mul, 0.0, 0}); break;
    case K::Div: code.push_back({Op::Div, 0.0, 0}); break;
    case K::Pow: code.push_back({Op::Pow, 0.0, 0}); break;
    case K::Call: {
      static constexpr std::array<Op, 8> map{Op::Sin, Op::Cos,  Op::Exp, Op::Ln,
                                             Op::Sqrt, Op::Abs, Op::Min, Op::Max};
      code.push_back({map[static_cast<std::size_t>(n.function)], 0.0, 0});
      break;
    }
  }
}

std::size_t stack_depth(const std::vector<Instr>& code) {
  std::size_t depth = 0;
  std::size_t peak = 0;
  for (const auto& ins : code) {
    switch (ins.op) {
      case Op::Push:
      case Op::Load: ++depth; break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
      case Op::Pow:
      case Op::Min:
      case Op::Max: --depth; break;
      default: break;
    }
    peak = std::max(peak, depth);
  }
  return peak;
}

bool has_variables(const expr::Node& n) {
  if (n.kind == expr::Node::Kind::Variable) return true;
  for (const auto& c : n.children) {
    if (has_variables(c)) return true;
  }
  return false;
}

[[noreturn]] void domain_error(const std::string& what, const std::string& source) {
  throw EvalDomainError(what + " while evaluating '" + source + "'");
}

}  // namespace

struct ScalarFunc::Impl {
  std::string source;
  std::vector<std::string> variables;
  expr::Node ast;
  std::vector<Instr> code;
  std::size_t depth = 0;
};

ScalarFunc ScalarFunc::compile(std::string_view source, std::vector<std::string> variables) {
  auto impl = std::make_shared<Impl>();
  impl->source = std::string(source);
  impl->ast = expr::parse(source, variables);
  impl->variables = std::move(variables);
  emit(impl->ast, impl->code);
  impl->depth = stack_depth(impl->code);
  ScalarFunc f;
  f.impl_ = std::move(impl);
  return f;
}

ScalarFunc ScalarFunc::constant(double value, std::vector<std::string> variables) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), std::abs(value));
  std::string text(buf.data(), res.ptr);
  if (std::signbit(value)) text = "-" + text;
  return compile(text, std::move(variables));
}

double ScalarFunc::eval(std::span<const double> args) const {
  const Impl& p = *impl_;
  if (args.size() != p.variables.size()) {
    throw ArityError("expression '" + p.source + "' expects " +
                     std::to_string(p.variables.size()) + " argument(s), got " +
                     std::to_string(args.size()));
  }
  constexpr std::size_t kInline = 32;
  std::array<double, kInline> inline_stack{};
  std::vector<double> heap_stack;
  double* st = inline_stack.data();
  if (p.depth > kInline) {
    heap_stack.resize(p.depth);
    st = heap_stack.data();
  }
  std::size_t top = 0;  // number of live entries
  for (const Instr& ins : p.code) {
    switch (ins.op) {
      case Op::Push: st[top++] = ins.value; continue;
      case Op::Load: st[top++] = args[ins.index]; continue;
      case Op::Neg: st[top - 1] = -st[top - 1]; continue;
      default: break;
    }
    double& a = st[top - 1];
    switch (ins.op) {
      case Op::Sin: a = std::sin(a); break;
      case Op::Cos: a = std::cos(a); break;
      case Op::Exp: a = std::exp(a); break;
      case Op::Ln:
        if (!(a > 0.0)) domain_error("ln of non-positive argument", p.source);
        a = std::log(a);
        break;
      case Op::Sqrt:
        if (a < 0.0) domain_error("sqrt of negative argument", p.source);
        a = std::sqrt(a);
        break;
      case Op::Abs: a = std::abs(a); break;
      default: {
        const double rhs = st[--top];
        double& lhs = st[top - 1];
        switch (ins.op) {
          case Op::Add: lhs += rhs; break;
          case Op::Sub: lhs -= rhs; break;
          case Op::Mul: lhs *= rhs; break;
          case Op::Div:
            if (rhs == 0.0) domain_error("division by zero", p.source);
            lhs /= rhs;
            break;
          case Op::Pow: lhs = std::pow(lhs, rhs); break;
          case Op::Min: lhs = std::min(lhs, rhs); break;
          case Op::Max: lhs = std::max(lhs, rhs); break;
          default: break;
        }
        if (!std::isfinite(lhs)) domain_error("non-finite intermediate result", p.source);
        continue;
      }
    }
    if (!std::isfinite(a)) domain_error("non-finite intermediate result", p.source);
  }
  return st[0];
}

std::size_t ScalarFunc::arity() const noexcept { return impl_ ? impl_->variables.size() : 0; }
const std::vector<std::string>& ScalarFunc::variables() const { return impl_->variables; }
const std::string& ScalarFunc::source() const { return impl_->source; }
const expr::Node& ScalarFunc::ast() const { return impl_->ast; }

bool ScalarFunc::is_constant() const { return impl_ && !has_variables(impl_->ast); }

double ScalarFunc::constant_value() const {
  std::vector<double> zeros(arity(), 0.0);
  return eval(zeros);
}

}  // namespace fbvp
