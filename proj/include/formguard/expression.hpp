#pragma once

#include <memory>
#include <string>
#include <vector>

#include "formguard/linalg.hpp"

namespace formguard {

/// Scalar signal of time t (seconds).
///
/// Grammar: numbers, `t`, `pi`, + - * /, unary minus, parentheses, sin(), cos().
/// Nothing else is accepted; parse errors name the offending position.
class Expression {
 public:
  Expression();  // constant 0
  explicit Expression(const std::string& source);
  static Expression constant(double value);

  double operator()(double t) const;
  const std::string& source() const { return source_; }
  bool is_zero() const;

  bool operator==(const Expression& other) const { return source_ == other.source_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

/// n-vector of expressions.
class VectorSignal {
 public:
  VectorSignal() = default;
  explicit VectorSignal(std::vector<Expression> components) : components_(std::move(components)) {}
  static VectorSignal zero(int n);

  int size() const { return static_cast<int>(components_.size()); }
  Vec operator()(double t) const;
  const std::vector<Expression>& components() const { return components_; }
  std::vector<std::string> sources() const;
  bool is_zero() const;

  bool operator==(const VectorSignal&) const = default;

 private:
  std::vector<Expression> components_;
};

}  // namespace formguard
