#include "fsgl/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "fsgl/error.hpp"

namespace fsgl {

struct Expression::Node {
  enum class Op { constant, variable, neg, add, sub, mul, div, pow, call1, call2 } op;
  double value = 0.0;
  int var = 0;
  double (*f1)(double) = nullptr;
  double (*f2)(double, double) = nullptr;
  std::shared_ptr<const Node> a, b;

  double eval(std::span<const double> x) const {
    switch (op) {
      case Op::constant: return value;
      case Op::variable: return x[var - 1];
      case Op::neg: return -a->eval(x);
      case Op::add: return a->eval(x) + b->eval(x);
      case Op::sub: return a->eval(x) - b->eval(x);
      case Op::mul: return a->eval(x) * b->eval(x);
      case Op::div: return a->eval(x) / b->eval(x);
      case Op::pow: return std::pow(a->eval(x), b->eval(x));
      case Op::call1: return f1(a->eval(x));
      case Op::call2: return f2(a->eval(x), b->eval(x));
    }
    return std::nan("");
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

struct Function1 {
  const char* name;
  double (*fn)(double);
};

const Function1 kFunctions1[] = {
    {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
    {"tan", [](double v) { return std::tan(v); }},   {"exp", [](double v) { return std::exp(v); }},
    {"log", [](double v) { return std::log(v); }},   {"sqrt", [](double v) { return std::sqrt(v); }},
    {"abs", [](double v) { return std::abs(v); }},
};

// Recursive descent:
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := '-' unary | '+' unary | power
//   power := atom ('^' unary)?
//   atom  := number | name | name '(' args ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse(int& arity) {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    arity = arity_;
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + s_ + "': " + what + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) n = make(Op::add, n, term());
      else if (accept('-')) n = make(Op::sub, n, term());
      else return n;
    }
  }
  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make(Op::mul, n, unary());
      else if (accept('/')) n = make(Op::div, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Op::pow, base, unary());
    return base;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NodePtr n = expr();
      expect(')');
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Expression::Node>();
      n->op = Op::constant;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      return named(name, start);
    }
    fail("unexpected character");
  }
  NodePtr named(const std::string& name, std::size_t start) {
    auto leaf = std::make_shared<Expression::Node>();
    if (name == "pi" || name == "e") {
      leaf->op = Op::constant;
      leaf->value = name == "pi" ? std::numbers::pi : std::numbers::e;
      return leaf;
    }
    if (name == "x" || name == "x1" || name == "x2" || name == "x3") {
      leaf->op = Op::variable;
      leaf->var = name == "x" ? 1 : name[1] - '0';
      arity_ = std::max(arity_, leaf->var);
      return leaf;
    }
    for (const auto& f : kFunctions1)
      if (name == f.name) {
        expect('(');
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::call1;
        n->f1 = f.fn;
        n->a = expr();
        expect(')');
        return n;
      }
    if (name == "min" || name == "max") {
      expect('(');
      auto n = std::make_shared<Expression::Node>();
      n->op = Op::call2;
      n->f2 = name == "min" ? +[](double u, double v) { return std::min(u, v); }
                            : +[](double u, double v) { return std::max(u, v); };
      n->a = expr();
      expect(',');
      n->b = expr();
      expect(')');
      return n;
    }
    pos_ = start;
    fail("unknown name '" + name + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int arity_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).parse(e.arity_);
  return e;
}

double Expression::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) < arity_)
    throw DomainError("expression '" + text_ + "' needs " + std::to_string(arity_) + " coordinates");
  return root_->eval(x);
}

double Expression::operator()(double x) const {
  const double v[1] = {x};
  return (*this)(std::span<const double>(v, 1));
}

PointFunction Expression::as_point_function() const {
  return [self = *this](std::span<const double> x) { return self(x); };
}

}  // namespace fsgl
