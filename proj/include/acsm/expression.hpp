#pragma once

// Scalar fields on a coordinate chart: a small expression language, a
// recursive-descent parser for it, and evaluation over any scalar type that
// models the dual-number interface (double, Dual<double>, ...).
//
//   expr  := term (("+"|"-") term)*
//   term  := unary (("*"|"/") unary)*
//   unary := "-" unary | power
//   power := atom ("^" integer)?
//   atom  := number | ident | func "(" expr ")" | "(" expr ")"
//   func  := "sin" | "cos" | "exp" | "log" | "sqrt"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acsm/dual.hpp"
#include "acsm/errors.hpp"

namespace acsm {

using Point = std::vector<double>;
using DualScalar = Dual<double>;

/// Throws InvalidPoint unless `p` has `dim` finite entries.
inline void check_point(std::span<const double> p, std::size_t dim) {
  if (p.size() != dim) {
    throw InvalidPoint("point has " + std::to_string(p.size()) + " coordinates, chart has " +
                       std::to_string(dim));
  }
  for (double x : p) {
    if (!std::isfinite(x)) throw InvalidPoint("point has a non-finite coordinate");
  }
}

enum class Func { Sin, Cos, Exp, Log, Sqrt };

inline constexpr std::array<std::string_view, 5> kFunctionNames = {"sin", "cos", "exp", "log",
                                                                    "sqrt"};

struct ExprNode {
  enum class Kind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

  Kind kind = Kind::Number;
  double number = 0.0;
  std::size_t variable = 0;
  long long exponent = 0;
  Func func = Func::Sin;
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

namespace detail {

template <typename T>
T eval_node(const ExprNode& n, std::span<const T> p) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  switch (n.kind) {
    case ExprNode::Kind::Number:
      return T(n.number);
    case ExprNode::Kind::Variable:
      return p[n.variable];
    case ExprNode::Kind::Neg:
      return -eval_node(*n.lhs, p);
    case ExprNode::Kind::Add:
      return eval_node(*n.lhs, p) + eval_node(*n.rhs, p);
    case ExprNode::Kind::Sub:
      return eval_node(*n.lhs, p) - eval_node(*n.rhs, p);
    case ExprNode::Kind::Mul:
      return eval_node(*n.lhs, p) * eval_node(*n.rhs, p);
    case ExprNode::Kind::Div:
      return eval_node(*n.lhs, p) / eval_node(*n.rhs, p);
    case ExprNode::Kind::Pow:
      return ipow(eval_node(*n.lhs, p), n.exponent);
    case ExprNode::Kind::Call: {
      T arg = eval_node(*n.lhs, p);
      switch (n.func) {
        case Func::Sin: return sin(arg);
        case Func::Cos: return cos(arg);
        case Func::Exp: return exp(arg);
        case Func::Log:
          if (!(primal(arg) > 0.0)) throw DomainError("log of non-positive argument");
          return log(arg);
        case Func::Sqrt:
          if (!(primal(arg) > 0.0)) throw DomainError("sqrt of non-positive argument");
          return sqrt(arg);
      }
    }
  }
  return T{};
}

inline std::string format_number(double x) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return buf.data();
}

inline std::string print_node(const ExprNode& n, std::span<const std::string> names) {
  switch (n.kind) {
    case ExprNode::Kind::Number: return format_number(n.number);
    case ExprNode::Kind::Variable: return names[n.variable];
    case ExprNode::Kind::Neg: return "(-" + print_node(*n.lhs, names) + ")";
    case ExprNode::Kind::Add:
      return "(" + print_node(*n.lhs, names) + " + " + print_node(*n.rhs, names) + ")";
    case ExprNode::Kind::Sub:
      return "(" + print_node(*n.lhs, names) + " - " + print_node(*n.rhs, names) + ")";
    case ExprNode::Kind::Mul:
      return "(" + print_node(*n.lhs, names) + " * " + print_node(*n.rhs, names) + ")";
    case ExprNode::Kind::Div:
      return "(" + print_node(*n.lhs, names) + " / " + print_node(*n.rhs, names) + ")";
    case ExprNode::Kind::Pow:
      return "(" + print_node(*n.lhs, names) + "^" + std::to_string(n.exponent) + ")";
    case ExprNode::Kind::Call:
      return std::string(kFunctionNames[static_cast<std::size_t>(n.func)]) + "(" +
             print_node(*n.lhs, names) + ")";
  }
  return {};
}

}  // namespace detail

/// An immutable, differentiable real-valued function of the chart coordinates.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(ExprPtr root, std::size_t arity, std::string source)
      : root_(std::move(root)), arity_(arity), source_(std::move(source)) {}

  /// The constant field `value` on a chart of dimension `arity`.
  static ScalarField constant(double value, std::size_t arity) {
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprNode::Kind::Number;
    node->number = value;
    return ScalarField(std::move(node), arity, detail::format_number(value));
  }

  std::size_t arity() const noexcept { return arity_; }
  const std::string& source() const noexcept { return source_; }
  const ExprNode& root() const { return *root_; }

  /// True when the body is a literal zero (lets callers skip work).
  bool is_zero() const noexcept {
    return root_ && root_->kind == ExprNode::Kind::Number && root_->number == 0.0;
  }

  template <typename T>
  T evaluate(std::span<const T> p) const {
    T out = detail::eval_node(*root_, p);
    if (!all_finite(out)) throw NonFinite("expression '" + source_ + "' is not finite at point");
    return out;
  }

  double operator()(std::span<const double> p) const {
    check_point(p, arity_);
    return evaluate<double>(p);
  }

  /// Fully parenthesised rendering; re-parsing it gives the same tree.
  std::string to_string(std::span<const std::string> names) const {
    return detail::print_node(*root_, names);
  }

 private:
  ExprPtr root_;
  std::size_t arity_ = 0;
  std::string source_;
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> names) : text_(text), names_(names) {}

  ExprPtr parse() {
    skip_ws();
    if (at_end()) throw SyntaxError(pos_, "expression");
    ExprPtr e = expr();
    skip_ws();
    if (!at_end()) throw SyntaxError(pos_, "operator or end of input");
    return e;
  }

 private:
  std::string_view text_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static ExprPtr make(ExprNode::Kind kind, ExprPtr lhs, ExprPtr rhs = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      ExprPtr rhs = term();
      lhs = make(c == '+' ? ExprNode::Kind::Add : ExprNode::Kind::Sub, lhs, rhs);
    }
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      ExprPtr rhs = unary();
      lhs = make(c == '*' ? ExprNode::Kind::Mul : ExprNode::Kind::Div, lhs, rhs);
    }
  }

  ExprPtr unary() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return make(ExprNode::Kind::Neg, unary());
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    skip_ws();
    if (peek() != '^') return base;
    ++pos_;
    skip_ws();
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) throw SyntaxError(pos_, "integer exponent");
    long long n = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, n);
    if (ec != std::errc{}) throw SyntaxError(start, "integer exponent in range");
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprNode::Kind::Pow;
    node->lhs = std::move(base);
    node->exponent = n;
    return node;
  }

  ExprPtr atom() {
    skip_ws();
    if (at_end()) throw SyntaxError(pos_, "number, identifier or '('");
    char c = peek();
    if (c == '(') {
      ++pos_;
      ExprPtr inner = expr();
      skip_ws();
      if (peek() != ')') throw SyntaxError(pos_, "')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError(pos_, "number, identifier or '('");
  }

  ExprPtr number() {
    std::size_t start = pos_;
    std::size_t digits = 0;
    auto eat_digits = [&] {
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        ++pos_;
        ++digits;
      }
    };
    eat_digits();
    if (peek() == '.') {
      ++pos_;
      eat_digits();
    }
    if (digits == 0) throw SyntaxError(start, "digit");
    if (peek() == 'e' || peek() == 'E') {
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      std::size_t exp_start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (exp_start == pos_) throw SyntaxError(pos_, "exponent digits");
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || ptr != text_.data() + pos_ || !std::isfinite(value)) {
      throw SyntaxError(start, "finite number");
    }
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprNode::Kind::Number;
    node->number = value;
    return node;
  }

  ExprPtr identifier() {
    std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);

    auto fn = std::find(kFunctionNames.begin(), kFunctionNames.end(), name);
    if (fn != kFunctionNames.end()) {
      skip_ws();
      if (peek() != '(') throw SyntaxError(pos_, "'(' after function name");
      ++pos_;
      ExprPtr arg = expr();
      skip_ws();
      if (peek() != ')') throw SyntaxError(pos_, "')'");
      ++pos_;
      auto node = std::make_shared<ExprNode>();
      node->kind = ExprNode::Kind::Call;
      node->func = static_cast<Func>(fn - kFunctionNames.begin());
      node->lhs = std::move(arg);
      return node;
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) {
        auto node = std::make_shared<ExprNode>();
        node->kind = ExprNode::Kind::Variable;
        node->variable = i;
        return node;
      }
    }
    throw UnknownIdentifier(std::string(name));
  }
};

}  // namespace detail

/// Checks that coordinate names are usable identifiers, distinct and not
/// reserved function names.
inline void check_coordinate_names(std::span<const std::string> names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string& n = names[i];
    bool ok = !n.empty() && (std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_') &&
              std::all_of(n.begin(), n.end(),
                          [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
    if (!ok) throw SpecError("invalid coordinate name '" + n + "'");
    if (std::find(kFunctionNames.begin(), kFunctionNames.end(), n) != kFunctionNames.end()) {
      throw SpecError("coordinate name '" + n + "' is a reserved function name");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (names[j] == n) throw SpecError("duplicate coordinate name '" + n + "'");
    }
  }
}

inline ScalarField parse_expression(std::string_view text, std::span<const std::string> coord_names) {
  check_coordinate_names(coord_names);
  detail::Parser parser(text, coord_names);
  ExprPtr root = parser.parse();
  return ScalarField(std::move(root), coord_names.size(), std::string(text));
}

inline ScalarField parse_expression(std::string_view text, const std::vector<std::string>& coord_names) {
  return parse_expression(text, std::span<const std::string>(coord_names));
}

/// Value and partial derivative along coordinate `j`, by dual propagation.
inline DualScalar eval_with_derivative(const ScalarField& f, std::span<const double> p, std::size_t j) {
  check_point(p, f.arity());
  if (j >= f.arity()) throw InvalidPoint("derivative index out of range");
  auto seeded = seed_point<double>(p, j);
  return f.evaluate<DualScalar>(std::span<const DualScalar>(seeded));
}

}  // namespace acsm
