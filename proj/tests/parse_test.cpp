#include <gtest/gtest.h>

#include <random>

#include "hobo/parse.hpp"
#include "oracles.hpp"

using namespace hobo;

namespace {

Variables declare(int n, const std::string& prefix = "q") {
  Variables v;
  for (int i = 0; i < n; ++i) v.add(prefix + std::to_string(i));
  return v;
}

std::size_t error_position(const std::string& text, const Variables& vars) {
  try {
    parse_expr(text, vars);
  } catch (const ParseError& e) {
    return e.position();
  }
  ADD_FAILURE() << "no parse error for '" << text << "'";
  return 0;
}

}  // namespace

TEST(ParseExpr, LiteralTranslation) {
  const Variables v = declare(2, "qx");
  EXPECT_EQ(parse_expr("qx0 + 2*qx1", v), Polynomial::from_terms({{{0}, 1}, {{1}, 2}}));
}

TEST(ParseExpr, SquareCollapsesRepeatedVariables) {
  const Variables v = declare(2, "qx");
  EXPECT_EQ(parse_expr("(qx0 + qx1)^2", v), Polynomial::from_terms({{{0}, 1}, {{1}, 1}, {{0, 1}, 2}}));
}

TEST(ParseExpr, ExpandsAndDropsConstant) {
  const Variables v = declare(1, "qx");
  const Polynomial p = parse_expr("(1 + qx0)^2 - 1", v);
  EXPECT_EQ(p, Polynomial::from_terms({{{0}, 3}}));
  // (1+q)^2 - 1 is 0 at q=0 and 3 at q=1
  EXPECT_EQ(p.evaluate(std::vector<std::uint8_t>{0}), 0.0);
  EXPECT_EQ(p.evaluate(std::vector<std::uint8_t>{1}), 3.0);
}

TEST(ParseExpr, PrecedenceAndWhitespace) {
  const Variables v = declare(3);
  EXPECT_EQ(parse_expr("  q0+q1 *q2 ", v), parse_expr("q0 + (q1*q2)", v));
  EXPECT_EQ(parse_expr("-q0^2", v), -Polynomial::variable(0));
  EXPECT_EQ(parse_expr("2^3", v), Polynomial::constant(8));
  EXPECT_EQ(parse_expr("--q0", v), Polynomial::variable(0));
  EXPECT_EQ(parse_expr("3 - 3", v), Polynomial{});
}

TEST(ParseExpr, ErrorsCarryPositions) {
  const Variables v = declare(2);
  EXPECT_EQ(error_position("(q0", v), 3U);
  EXPECT_EQ(error_position("q0 + ", v), 5U);
  EXPECT_EQ(error_position("q0 $ q1", v), 3U);
  EXPECT_EQ(error_position("q0 + zz", v), 5U);
  EXPECT_EQ(error_position("q0^17", v), 3U);
  EXPECT_EQ(error_position("q0^x", v), 3U);
  EXPECT_EQ(error_position("q0)", v), 2U);
  EXPECT_NO_THROW(parse_expr("q0^16", v));
}

TEST(ParseExpr, UndeclaredVariableMessage) {
  const Variables v = declare(1);
  try {
    parse_expr("q0 * q7", v);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("undeclared variable 'q7'"), std::string::npos);
  }
}

TEST(ParseExprProperty, MatchesDirectEvaluationOfRandomTrees) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + trial % 12;
    const Variables vars = declare(n);
    auto tree = oracle::random_expr(rng, n, 5);
    const std::string text = tree->text();
    const Polynomial p = parse_expr(text, vars);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
      auto bits = oracle::bits_of(k, static_cast<std::size_t>(n));
      ASSERT_EQ(p.evaluate(bits), static_cast<double>(tree->eval(bits))) << text << " at " << k;
    }
  }
}
