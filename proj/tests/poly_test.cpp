#include <gtest/gtest.h>

#include <random>

#include "hobo/poly.hpp"
#include "oracles.hpp"

using namespace hobo;
using oracle::bits_of;
using oracle::brute_force_value;
using oracle::random_polynomial;

namespace {

Polynomial x(VarIndex i) { return Polynomial::variable(i); }

void expect_multilinear(const Polynomial& p) {
  for (const auto& [vars, c] : p.terms()) {
    EXPECT_NE(c, 0.0);
    for (std::size_t k = 1; k < vars.size(); ++k) EXPECT_LT(vars[k - 1], vars[k]);
  }
}

}  // namespace

TEST(Polynomial, AddCancelsToZero) {
  EXPECT_TRUE((x(0) + (-x(0))).is_zero());
  EXPECT_EQ(x(0) + 2.0 * x(1), Polynomial::from_terms({{{0}, 1}, {{1}, 2}}));
  EXPECT_EQ(Polynomial::constant(1) + Polynomial::constant(1), Polynomial::constant(2));
}

TEST(Polynomial, MulAppliesIdempotence) {
  EXPECT_EQ(x(0) * x(0), x(0));
  EXPECT_EQ((x(0) + x(1)) * x(2), Polynomial::from_terms({{{0, 2}, 1}, {{1, 2}, 1}}));
}

TEST(Polynomial, AddTermNormalizesVariables) {
  Polynomial p;
  p.add_term({3, 1, 3}, 2.0);
  EXPECT_EQ(p, Polynomial::from_terms({{{1, 3}, 2}}));
  p.add_term({1, 3}, -2.0);
  EXPECT_TRUE(p.is_zero());
}

TEST(Polynomial, SquaredPythagoreanResidualOnSingleBits) {
  // x = q0, y = q1, z = q2; checked against integer arithmetic on all 8 assignments
  const Polynomial h = pow(x(0) * x(0) + x(1) * x(1) - x(2) * x(2), 2);
  expect_multilinear(h);
  for (std::uint64_t k = 0; k < 8; ++k) {
    auto b = bits_of(k, 3);
    const std::int64_t r = b[0] * b[0] + b[1] * b[1] - b[2] * b[2];
    EXPECT_EQ(h.evaluate(b), static_cast<double>(r * r)) << k;
  }
}

TEST(Polynomial, PowEdgeCases) {
  EXPECT_EQ(pow(x(0) + 3.0 * x(1), 0), Polynomial::constant(1));
  EXPECT_EQ(pow(x(0), 4), x(0));
  // (1 + q)^2 takes values 1 and 4 on q = 0, 1, i.e. 1 + 3q
  const Polynomial sq = pow(x(0) + 1.0, 2);
  EXPECT_EQ(sq, Polynomial::from_terms({{{}, 1}, {{0}, 3}}));
  for (std::uint8_t q : {0, 1}) EXPECT_EQ(sq.evaluate(std::vector<std::uint8_t>{q}), (1.0 + q) * (1.0 + q));
  EXPECT_THROW(pow(x(0), 17), Error);
  EXPECT_NO_THROW(pow(x(0), 16));
}

TEST(Polynomial, Evaluate) {
  const Polynomial p = Polynomial::from_terms({{{0}, 1}, {{1}, 2}});
  EXPECT_EQ(p.evaluate(std::vector<std::uint8_t>{1, 0}), 1.0);
  const Polynomial q = Polynomial::from_terms({{{}, 7}, {{0, 2}, -3}});
  EXPECT_EQ(q.evaluate(std::vector<std::uint8_t>{0, 0, 0}), 7.0);
  EXPECT_THROW(q.evaluate(std::vector<std::uint8_t>{1, 1}), Error);
}

TEST(Polynomial, Accessors) {
  const Polynomial p = Polynomial::from_terms({{{}, 2}, {{1, 4}, 1}, {{2}, -1}});
  EXPECT_EQ(p.degree(), 2U);
  EXPECT_EQ(p.nvars(), 3U);
  EXPECT_EQ(p.index_bound(), 5U);
  EXPECT_EQ(p.constant_term(), 2.0);
  EXPECT_EQ(p.coeff({1, 4}), 1.0);
  EXPECT_TRUE(p.all_integral());
  EXPECT_FALSE((0.5 * p).all_integral());
}

TEST(Polynomial, StructuralEqualityIsSemanticEquality) {
  // the same function built two ways
  const Polynomial a = (x(0) + x(1)) * (x(0) - x(1));
  const Polynomial b = x(0) - x(1);
  EXPECT_EQ(a, b);
}

TEST(PolynomialProperty, RingLawsHoldOnEveryAssignment) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 12;
    const Polynomial a = random_polynomial(rng, n, 3, 8);
    const Polynomial b = random_polynomial(rng, n, 3, 8);
    const Polynomial sum = add(a, b);
    const Polynomial prod = mul(a, b);
    expect_multilinear(sum);
    expect_multilinear(prod);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
      auto s = bits_of(k, static_cast<std::size_t>(n));
      const double va = brute_force_value(a, s), vb = brute_force_value(b, s);
      ASSERT_EQ(sum.evaluate(s), va + vb);
      ASSERT_EQ(prod.evaluate(s), va * vb);
    }
  }
}

TEST(PolynomialProperty, PowMatchesRepeatedProductValues) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 8;
    const Polynomial a = random_polynomial(rng, n, 2, 5, 4);
    for (unsigned k = 0; k <= 4; ++k) {
      const Polynomial p = pow(a, k);
      expect_multilinear(p);
      for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
        auto s = bits_of(idx, static_cast<std::size_t>(n));
        double expected = 1.0;
        for (unsigned r = 0; r < k; ++r) expected *= brute_force_value(a, s);
        ASSERT_EQ(p.evaluate(s), expected);
      }
    }
  }
}
