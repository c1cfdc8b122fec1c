#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "acsm/expression.hpp"
#include "acsm/tensor.hpp"
#include "oracles.hpp"

using namespace acsm;
using oracle::random_polynomial;

namespace {

const std::vector<std::string> kXYZ = {"x", "y", "z"};

double eval(const std::string& text, const Point& p, const std::vector<std::string>& names = kXYZ) {
  return parse_expression(text, names)(p);
}

}  // namespace

TEST(Parse, ConstantZero) {
  EXPECT_EQ(eval("0", {0.3, -1.0, 2.0}), 0.0);
  EXPECT_TRUE(parse_expression("0", kXYZ).is_zero());
}

TEST(Parse, PolynomialAndSine) { EXPECT_DOUBLE_EQ(eval("x^2 + sin(y)", {2.0, 0.0, 5.0}), 4.0); }

TEST(Parse, IncompleteExpressionReportsPosition) {
  try {
    parse_expression("x +", std::vector<std::string>{"x"});
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 3u);
  }
}

TEST(Parse, Precedence) {
  const Point p = {3.0, 2.0, 0.5};
  EXPECT_DOUBLE_EQ(eval("-x^2", p), -9.0);
  EXPECT_DOUBLE_EQ(eval("2*3+4", p), 10.0);
  EXPECT_DOUBLE_EQ(eval("2+3*4", p), 14.0);
  EXPECT_DOUBLE_EQ(eval("x-y-z", p), 0.5);
  EXPECT_DOUBLE_EQ(eval("x/y/z", p), 3.0);
  EXPECT_DOUBLE_EQ(eval("(x+y)^2", p), 25.0);
  EXPECT_DOUBLE_EQ(eval("2*-y", p), -4.0);
  EXPECT_DOUBLE_EQ(eval("--x", p), 3.0);
  EXPECT_DOUBLE_EQ(eval("x^0", p), 1.0);
  EXPECT_DOUBLE_EQ(eval("  x  *  y ", p), 6.0);
}

TEST(Parse, NumberLiterals) {
  const Point p = {0.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(eval("1.5e-3", p), 1.5e-3);
  EXPECT_DOUBLE_EQ(eval("2.25", p), 2.25);
  EXPECT_DOUBLE_EQ(eval("3E2", p), 300.0);
}

TEST(Parse, Functions) {
  const Point p = {1.0, 4.0, 0.0};
  EXPECT_NEAR(eval("exp(x)", p), std::exp(1.0), 1e-15);
  EXPECT_NEAR(eval("log(y)", p), std::log(4.0), 1e-15);
  EXPECT_NEAR(eval("sqrt(y)", p), 2.0, 1e-15);
  EXPECT_NEAR(eval("cos(z)", p), 1.0, 1e-15);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_expression("w + 1", kXYZ), UnknownIdentifier);
  EXPECT_THROW(parse_expression("X", kXYZ), UnknownIdentifier);
  EXPECT_THROW(parse_expression("", kXYZ), SyntaxError);
  EXPECT_THROW(parse_expression("(x", kXYZ), SyntaxError);
  EXPECT_THROW(parse_expression("x)", kXYZ), SyntaxError);
  EXPECT_THROW(parse_expression("x^y", kXYZ), SyntaxError);
  EXPECT_THROW(parse_expression("x^2^3", kXYZ), SyntaxError);
  EXPECT_THROW(parse_expression("sin x", kXYZ), SyntaxError);
  EXPECT_THROW(parse_expression("x $ y", kXYZ), SyntaxError);
  EXPECT_THROW(parse_expression("tan(x)", kXYZ), UnknownIdentifier);
}

TEST(Parse, ErrorPositions) {
  try {
    parse_expression("x * (y + ", kXYZ);
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 9u);
  }
  try {
    parse_expression("x y", kXYZ);
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(Parse, CoordinateNames) {
  EXPECT_THROW(parse_expression("x", std::vector<std::string>{"x", "x"}), SpecError);
  EXPECT_THROW(parse_expression("x", std::vector<std::string>{"x", "sin"}), SpecError);
  EXPECT_THROW(parse_expression("x", std::vector<std::string>{"x", "1a"}), SpecError);
  EXPECT_DOUBLE_EQ(eval("th_1 * x2", {2.0, 3.0}, {"th_1", "x2"}), 6.0);
}

TEST(Evaluate, DomainAndFiniteness) {
  EXPECT_THROW(eval("log(x)", {0.0, 0.0, 0.0}), DomainError);
  EXPECT_THROW(eval("sqrt(x)", {-1.0, 0.0, 0.0}), DomainError);
  EXPECT_THROW(eval("1/x", {0.0, 0.0, 0.0}), NonFinite);
  EXPECT_THROW(eval("exp(x)", {1000.0, 0.0, 0.0}), NonFinite);
}

TEST(Evaluate, InvalidPoint) {
  EXPECT_THROW(eval("x", {1.0, 2.0}), InvalidPoint);
  EXPECT_THROW(eval("x", {NAN, 2.0, 1.0}), InvalidPoint);
  const auto f = parse_expression("x", kXYZ);
  EXPECT_THROW(eval_with_derivative(f, Point{1.0, 2.0, 3.0}, 3), InvalidPoint);
}

TEST(Derivative, ProductRule) {
  const auto f = parse_expression("x*y", std::vector<std::string>{"x", "y"});
  const auto d = eval_with_derivative(f, Point{3.0, 4.0}, 0);
  EXPECT_EQ(d.value, 12.0);
  EXPECT_EQ(d.deriv, 4.0);
}

TEST(Derivative, SineAtZero) {
  const auto f = parse_expression("sin(x)", std::vector<std::string>{"x"});
  const auto d = eval_with_derivative(f, Point{0.0}, 0);
  EXPECT_EQ(d.value, 0.0);
  EXPECT_EQ(d.deriv, 1.0);
}

TEST(Derivative, AgreesWithCentralDifference) {
  const std::vector<std::string> xy = {"x", "y"};
  const auto f = parse_expression("x^2 + sin(y)", xy);
  const auto d = eval_with_derivative(f, Point{2.0, 0.0}, 1);
  EXPECT_EQ(d.value, 4.0);
  EXPECT_EQ(d.deriv, 1.0);
  const double h = 1e-6;
  const double fd = (f(Point{2.0, h}) - f(Point{2.0, -h})) / (2 * h);
  EXPECT_NEAR(d.deriv, fd, 1e-8);
}

TEST(Derivative, FunctionRules) {
  const std::vector<std::string> x = {"x"};
  const Point p = {0.7};
  auto deriv = [&](const char* text) { return eval_with_derivative(parse_expression(text, x), p, 0).deriv; };
  EXPECT_NEAR(deriv("cos(x)"), -std::sin(0.7), 1e-15);
  EXPECT_NEAR(deriv("exp(2*x)"), 2 * std::exp(1.4), 1e-14);
  EXPECT_NEAR(deriv("log(x)"), 1 / 0.7, 1e-15);
  EXPECT_NEAR(deriv("sqrt(x)"), 0.5 / std::sqrt(0.7), 1e-15);
  EXPECT_NEAR(deriv("1/x"), -1 / 0.49, 1e-14);
  EXPECT_NEAR(deriv("x^5"), 5 * std::pow(0.7, 4), 1e-14);
  EXPECT_THROW(parse_expression("x^-2", x), SyntaxError);
}

TEST(Derivative, NestedDualGivesSecondDerivative) {
  const auto f = parse_expression("x^3*y", std::vector<std::string>{"x", "y"});
  using D2 = Dual<Dual<double>>;
  std::vector<D2> p = {D2{Dual<double>{1.5, 1.0}, Dual<double>{1.0, 0.0}}, D2{Dual<double>{2.0, 0.0}, {}}};
  const D2 v = f.evaluate<D2>(std::span<const D2>(p));
  EXPECT_DOUBLE_EQ(v.value.value, 1.5 * 1.5 * 1.5 * 2.0);
  EXPECT_DOUBLE_EQ(v.deriv.value, 3 * 1.5 * 1.5 * 2.0);
  EXPECT_DOUBLE_EQ(v.deriv.deriv, 6 * 1.5 * 2.0);
}

TEST(Property, DualMatchesFiniteDifferenceOnRandomPolynomials) {
  std::mt19937_64 rng(20241016);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const double h = 1e-5;
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string text = random_polynomial(rng, kXYZ);
    const auto f = parse_expression(text, kXYZ);
    Point p = {coord(rng), coord(rng), coord(rng)};
    for (std::size_t j = 0; j < 3; ++j) {
      Point plus = p;
      Point minus = p;
      plus[j] += h;
      minus[j] -= h;
      const double fd = (f(plus) - f(minus)) / (2 * h);
      const auto d = eval_with_derivative(f, p, j);
      ASSERT_NEAR(d.deriv, fd, 1e-6) << text << " along " << j;
      ASSERT_DOUBLE_EQ(d.value, f(p));
      ++checked;
    }
  }
  EXPECT_EQ(checked, 3000);
}

TEST(Property, PrintReparseRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(0.1, 1.0);
  const std::vector<std::string> texts = {"x^2 + sin(y)", "-x^3*y/(1 + z^2)", "exp(-x)*cos(y - 2*z)",
                                          "sqrt(x + y)*log(z + 1)", "1.5e-3*x - --y", random_polynomial(rng, kXYZ)};
  for (const auto& text : texts) {
    const auto f = parse_expression(text, kXYZ);
    const auto g = parse_expression(f.to_string(kXYZ), kXYZ);
    EXPECT_EQ(g.to_string(kXYZ), f.to_string(kXYZ));
    for (int i = 0; i < 100; ++i) {
      const Point p = {coord(rng), coord(rng), coord(rng)};
      ASSERT_EQ(f(p), g(p)) << text;
    }
  }
}

TEST(Tensor, IndexedArrayLayout) {
  Array3 a(3);
  a(1, 2, 0) = 5.0;
  EXPECT_EQ(a.data()[(1 * 3 + 2) * 3 + 0], 5.0);
  EXPECT_EQ(a.dim(), 3u);
  EXPECT_EQ(max_abs(a), 5.0);
}

TEST(Tensor, ContractAndInvert) {
  Array3 b(2);
  b(0, 0, 1) = 2.0;
  b(1, 1, 1) = 3.0;
  Vector x(2);
  x << 1.0, 2.0;
  Vector y(2);
  y << 3.0, 4.0;
  const Vector c = contract(b, x, y);
  EXPECT_DOUBLE_EQ(c[0], 2.0 * 1.0 * 4.0);
  EXPECT_DOUBLE_EQ(c[1], 3.0 * 2.0 * 4.0);

  Array2 m(2);
  m(0, 0) = 2.0;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  m(1, 1) = 3.0;
  double det = 0.0;
  const Array2 inv = invert(m, &det);
  EXPECT_NEAR(det, 5.0, 1e-15);
  EXPECT_NEAR(inv(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(inv(0, 1), -0.2, 1e-15);
  Array2 singular(2);
  EXPECT_THROW(invert(singular, &det), SingularMetric);
}
