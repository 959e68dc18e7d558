#include <gtest/gtest.h>

#include "hobo/encoding.hpp"
#include "oracles.hpp"

using namespace hobo;

namespace {

std::int64_t decode_bits(const IntegerVar& v, std::vector<std::uint8_t> bits) { return decode(v, bits).value(); }

}  // namespace

TEST(OffsetBinary, Values) {
  Variables vars;
  const IntegerVar x3 = make_offset_binary(vars, "x", 3);
  EXPECT_EQ(decode_bits(x3, {0, 1, 0}), 3);
  EXPECT_EQ(decode_bits(x3, {0, 0, 0}), 1);
  const IntegerVar x4 = make_offset_binary(vars, "y", 4);
  std::vector<std::uint8_t> bits(vars.size(), 0);
  for (VarIndex v : x4.bit_vars) bits[v] = 1;
  EXPECT_EQ(decode(x4, bits), 16);  // 1 + 1 + 2 + 4 + 8
  EXPECT_EQ(x4.value_poly.constant_term(), 1.0);
}

TEST(OffsetBinary, LabelsAndPolynomial) {
  Variables vars;
  const IntegerVar x = make_offset_binary(vars, "x", 4);
  EXPECT_EQ(vars.labels(), (std::vector<std::string>{"qx0", "qx1", "qx2", "qx3"}));
  EXPECT_EQ(x.value_poly,
            Polynomial::from_terms({{{}, 1}, {{0}, 1}, {{1}, 2}, {{2}, 4}, {{3}, 8}}));
}

TEST(Binary, Values) {
  Variables vars;
  const IntegerVar x = make_binary(vars, "x", 4);
  EXPECT_EQ(decode_bits(x, {1, 0, 1, 0}), 5);
  EXPECT_EQ(decode_bits(x, {0, 0, 0, 0}), 0);
  EXPECT_EQ(decode_bits(x, {1, 1, 1, 1}), 15);
}

TEST(Binary, WidthBounds) {
  Variables vars;
  EXPECT_THROW(make_binary(vars, "a", 0), Error);
  EXPECT_THROW(make_offset_binary(vars, "b", 21), Error);
  EXPECT_NO_THROW(make_offset_binary(vars, "c", 20));
  EXPECT_THROW(make_binary(vars, "c", 2), Error);  // labels qc0.. already taken
}

TEST(OneHot, DecodeAndConstraint) {
  Variables vars;
  auto [x, constraint] = make_one_hot(vars, "x", {1, 4, 9, 16});
  EXPECT_EQ(decode_bits(x, {0, 1, 0, 0}), 4);
  EXPECT_EQ(constraint.evaluate(std::vector<std::uint8_t>{0, 1, 0, 0}), 0.0);
  EXPECT_EQ(decode(x, std::vector<std::uint8_t>{0, 0, 0, 0}), std::nullopt);
  EXPECT_EQ(constraint.evaluate(std::vector<std::uint8_t>{0, 0, 0, 0}), 1.0);
  EXPECT_EQ(decode(x, std::vector<std::uint8_t>{1, 0, 0, 1}), std::nullopt);
  EXPECT_EQ(constraint.evaluate(std::vector<std::uint8_t>{1, 0, 0, 1}), 1.0);
}

TEST(OneHot, SixteenValues) {
  Variables vars;
  std::vector<std::int64_t> values;
  for (int v = 1; v <= 16; ++v) values.push_back(v);
  auto [x, c] = make_one_hot(vars, "x", values);
  std::vector<std::uint8_t> bits(16, 0);
  bits[4] = 1;
  EXPECT_EQ(decode(x, bits), 5);
}

TEST(OneHot, RejectsBadValueLists) {
  Variables vars;
  EXPECT_THROW(make_one_hot(vars, "x", {}), Error);
  EXPECT_THROW(make_one_hot(vars, "y", {1, 2, 1}), Error);
}

TEST(OneHotProperty, ConstraintIsSquaredExcessHotCount) {
  Variables vars;
  auto [x, c] = make_one_hot(vars, "x", {3, 5, 7, 11, 13, 17});
  for (std::uint64_t k = 0; k < 64; ++k) {
    auto bits = oracle::bits_of(k, 6);
    const int hot = std::popcount(k);
    EXPECT_EQ(c.evaluate(bits), static_cast<double>((hot - 1) * (hot - 1)));
    EXPECT_EQ(decode(x, bits).has_value(), hot == 1);
  }
}

TEST(Decode, MissingBitsThrow) {
  Variables vars;
  make_binary(vars, "pad", 2);
  const IntegerVar x = make_binary(vars, "x", 3);
  EXPECT_THROW(decode(x, std::vector<std::uint8_t>{0, 0, 0}), Error);
}

TEST(EncodingProperty, RoundTripAndRange) {
  for (int width = 1; width <= 10; ++width) {
    Variables vars;
    const IntegerVar b = make_binary(vars, "b", width);
    const IntegerVar o = make_offset_binary(vars, "o", width);
    std::vector<std::uint8_t> bits(vars.size());
    for (std::int64_t v = 0; v < (std::int64_t{1} << width); ++v) {
      encode(b, v, bits);
      encode(o, v + 1, bits);
      ASSERT_EQ(decode(b, bits), v);
      ASSERT_EQ(decode(o, bits), v + 1);
      ASSERT_EQ(b.value_poly.evaluate(bits), static_cast<double>(v));
      ASSERT_EQ(o.value_poly.evaluate(bits), static_cast<double>(v + 1));
    }
    // every bit pattern lands inside the domain
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << width); ++k) {
      auto pattern = oracle::bits_of(k, static_cast<std::size_t>(width));
      std::vector<std::uint8_t> all(vars.size(), 0);
      for (int i = 0; i < width; ++i) all[o.bit_vars[i]] = pattern[i];
      const auto v = decode(o, all).value();
      ASSERT_GE(v, 1);
      ASSERT_LE(v, std::int64_t{1} << width);
    }
    EXPECT_THROW(encode(o, 0, bits), Error);
  }
  Variables vars;
  auto [h, c] = make_one_hot(vars, "h", {2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  std::vector<std::uint8_t> bits(vars.size());
  for (std::int64_t v : h.scheme.domain_values) {
    encode(h, v, bits);
    EXPECT_EQ(decode(h, bits), v);
    EXPECT_EQ(c.evaluate(bits), 0.0);
  }
  EXPECT_THROW(encode(h, 4, bits), Error);
}

TEST(QubitCount, HoboAndQuboPowersThreeToTwelve) {
  const std::vector<std::array<std::int64_t, 3>> table = {
      {3, 24, 9},     {4, 48, 12},    {5, 96, 15},    {6, 192, 18},   {7, 384, 21},
      {8, 768, 24},   {9, 1536, 27},  {10, 3072, 30}, {11, 6144, 33}, {12, 12288, 36}};
  for (const auto& [power, qubo, hobo_count] : table) {
    EXPECT_EQ(qubit_count(ModelKind::qubo, static_cast<int>(power)), qubo);
    EXPECT_EQ(qubit_count(ModelKind::hobo, static_cast<int>(power)), hobo_count);
  }
  EXPECT_EQ(qubit_count(ModelKind::hobo, 1), 3);
  EXPECT_EQ(qubit_count(ModelKind::qubo, 1), 6);
}

TEST(RestoreIntegerVar, RebuildsSamePolynomial) {
  Variables vars;
  const IntegerVar x = make_offset_binary(vars, "x", 5);
  const IntegerVar r = restore_integer_var("x", x.scheme, x.bit_vars);
  EXPECT_EQ(r.value_poly, x.value_poly);
  EXPECT_THROW(restore_integer_var("x", x.scheme, {0, 1}), Error);
}
