#include "formguard/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "formguard/errors.hpp"

namespace formguard {

struct Expression::Node {
  enum class Kind { Number, Time, Neg, Add, Sub, Mul, Div, Sin, Cos } kind;
  double value = 0.0;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(double t) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::Time: return t;
      case Kind::Neg: return -lhs->eval(t);
      case Kind::Add: return lhs->eval(t) + rhs->eval(t);
      case Kind::Sub: return lhs->eval(t) - rhs->eval(t);
      case Kind::Mul: return lhs->eval(t) * rhs->eval(t);
      case Kind::Div: return lhs->eval(t) / rhs->eval(t);
      case Kind::Sin: return std::sin(lhs->eval(t));
      case Kind::Cos: return std::cos(lhs->eval(t));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->value = v;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : src_(s) {}

  NodePtr parse() {
    auto n = sum();
    skip();
    if (pos_ != src_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(fmt::format("expression '{}': {} at position {}", src_, msg, pos_ + 1));
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    auto n = product();
    for (;;) {
      if (accept('+')) n = make(Kind::Add, n, product());
      else if (accept('-')) n = make(Kind::Sub, n, product());
      else return n;
    }
  }

  NodePtr product() {
    auto n = unary();
    for (;;) {
      if (accept('*')) n = make(Kind::Mul, n, unary());
      else if (accept('/')) n = make(Kind::Div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, unary());
    if (accept('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    if (accept('(')) {
      auto n = sum();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      const std::string word = src_.substr(start, pos_ - start);
      if (word == "t") return make(Kind::Time);
      if (word == "pi") return make(Kind::Number, nullptr, nullptr, std::numbers::pi);
      if (word == "sin" || word == "cos") {
        if (!accept('(')) fail("expected '(' after " + word);
        auto arg = sum();
        if (!accept(')')) fail("expected ')'");
        return make(word == "sin" ? Kind::Sin : Kind::Cos, arg);
      }
      pos_ = start;
      fail("unknown identifier '" + word + "'");
    }
    fail("unexpected character");
  }

  NodePtr number() {
    const char* begin = src_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    if (!std::isfinite(v)) fail("number out of range");
    return make(Kind::Number, nullptr, nullptr, v);
  }

  const std::string& src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : Expression(std::string("0")) {}

Expression::Expression(const std::string& source) : source_(source) {
  root_ = Parser(source_).parse();
}

Expression Expression::constant(double value) { return Expression(fmt::format("{}", value)); }

double Expression::operator()(double t) const { return root_->eval(t); }

bool Expression::is_zero() const { return root_->kind == Node::Kind::Number && root_->value == 0.0; }

VectorSignal VectorSignal::zero(int n) { return VectorSignal(std::vector<Expression>(n)); }

Vec VectorSignal::operator()(double t) const {
  Vec v(size());
  for (int i = 0; i < size(); ++i) v(i) = components_[i](t);
  return v;
}

std::vector<std::string> VectorSignal::sources() const {
  std::vector<std::string> out;
  for (const auto& c : components_) out.push_back(c.source());
  return out;
}

bool VectorSignal::is_zero() const {
  for (const auto& c : components_)
    if (!c.is_zero()) return false;
  return true;
}

}  // namespace formguard
