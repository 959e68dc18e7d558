#pragma once

// Bounded integers expressed over fresh binary variables.
//
// bit_vars[i] carries weight 2^i (LSB first) for the binary schemes; for
// one-hot, bit_vars[i] selects domain_values[i].

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hobo/poly.hpp"

namespace hobo {

enum class EncodingKind { binary, offset_binary, one_hot };

inline const char* to_string(EncodingKind kind) {
  switch (kind) {
    case EncodingKind::binary: return "binary";
    case EncodingKind::offset_binary: return "offset_binary";
    case EncodingKind::one_hot: return "one_hot";
  }
  return "?";
}

inline EncodingKind encoding_kind_from_string(const std::string& s) {
  if (s == "binary") return EncodingKind::binary;
  if (s == "offset_binary") return EncodingKind::offset_binary;
  if (s == "one_hot") return EncodingKind::one_hot;
  throw Error("unknown encoding kind '" + s + "'");
}

struct EncodingScheme {
  EncodingKind kind = EncodingKind::binary;
  int width = 0;  // bits, or number of categories for one_hot
  std::vector<std::int64_t> domain_values;  // one_hot only

  std::int64_t min_value() const {
    switch (kind) {
      case EncodingKind::binary: return 0;
      case EncodingKind::offset_binary: return 1;
      case EncodingKind::one_hot: return *std::min_element(domain_values.begin(), domain_values.end());
    }
    return 0;
  }

  std::int64_t max_value() const {
    switch (kind) {
      case EncodingKind::binary: return (std::int64_t{1} << width) - 1;
      case EncodingKind::offset_binary: return std::int64_t{1} << width;
      case EncodingKind::one_hot: return *std::max_element(domain_values.begin(), domain_values.end());
    }
    return 0;
  }
};

struct IntegerVar {
  std::string name;
  EncodingScheme scheme;
  std::vector<VarIndex> bit_vars;
  Polynomial value_poly;
};

inline constexpr int kMaxEncodingWidth = 20;

namespace detail {

inline void check_width(int width) {
  if (width < 1 || width > kMaxEncodingWidth)
    throw Error("encoding width " + std::to_string(width) + " outside [1, " + std::to_string(kMaxEncodingWidth) + "]");
}

inline IntegerVar make_positional(Variables& vars, std::string name, int width, EncodingKind kind,
                                  const std::string& label_prefix) {
  check_width(width);
  IntegerVar out;
  out.scheme = {kind, width, {}};
  out.value_poly = kind == EncodingKind::offset_binary ? Polynomial::constant(1.0) : Polynomial{};
  for (int i = 0; i < width; ++i) {
    const VarIndex v = vars.add(label_prefix + std::to_string(i));
    out.bit_vars.push_back(v);
    out.value_poly += Polynomial::variable(v, static_cast<double>(std::int64_t{1} << i));
  }
  out.name = std::move(name);
  return out;
}

}  // namespace detail

/// value = sum 2^i * bit_i, domain [0, 2^width - 1]. Bits are labelled q<name><i>.
inline IntegerVar make_binary(Variables& vars, std::string name, int width) {
  const std::string prefix = "q" + name;
  return detail::make_positional(vars, std::move(name), width, EncodingKind::binary, prefix);
}

/// value = 1 + sum 2^i * bit_i, domain [1, 2^width].
inline IntegerVar make_offset_binary(Variables& vars, std::string name, int width) {
  const std::string prefix = "q" + name;
  return detail::make_positional(vars, std::move(name), width, EncodingKind::offset_binary, prefix);
}

/// One bit per candidate value. The returned constraint (sum bits - 1)^2 is
/// zero exactly when one bit is hot; the caller decides its weight.
inline std::pair<IntegerVar, Polynomial> make_one_hot(Variables& vars, std::string name,
                                                      std::vector<std::int64_t> values,
                                                      std::string label_prefix = {}) {
  if (values.empty()) throw Error("one-hot variable '" + name + "' needs at least one value");
  if (std::set<std::int64_t>(values.begin(), values.end()).size() != values.size())
    throw Error("one-hot variable '" + name + "' has duplicate values");
  if (label_prefix.empty()) label_prefix = "q" + name;

  IntegerVar out;
  out.scheme = {EncodingKind::one_hot, static_cast<int>(values.size()), values};
  Polynomial hot_count;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const VarIndex v = vars.add(label_prefix + std::to_string(i));
    out.bit_vars.push_back(v);
    out.value_poly += Polynomial::variable(v, static_cast<double>(values[i]));
    hot_count += Polynomial::variable(v);
  }
  out.name = std::move(name);
  Polynomial constraint = pow(hot_count - 1.0, 2);
  return {std::move(out), std::move(constraint)};
}

/// Rebuilds an IntegerVar over existing variable indices (used when loading models).
inline IntegerVar restore_integer_var(std::string name, EncodingScheme scheme, std::vector<VarIndex> bits) {
  IntegerVar out;
  out.name = std::move(name);
  if (scheme.kind == EncodingKind::one_hot) {
    if (scheme.domain_values.size() != bits.size()) throw Error("one-hot value list does not match bit count");
    scheme.width = static_cast<int>(bits.size());
  } else {
    detail::check_width(scheme.width);
    if (static_cast<int>(bits.size()) != scheme.width) throw Error("bit list does not match encoding width");
  }
  if (scheme.kind == EncodingKind::offset_binary) out.value_poly = Polynomial::constant(1.0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const double w = scheme.kind == EncodingKind::one_hot ? static_cast<double>(scheme.domain_values[i])
                                                          : static_cast<double>(std::int64_t{1} << i);
    out.value_poly += Polynomial::variable(bits[i], w);
  }
  out.scheme = std::move(scheme);
  out.bit_vars = std::move(bits);
  return out;
}

/// Returns the encoded integer, or nullopt when a one-hot variable does not
/// have exactly one hot bit. Throws if the assignment is too short.
inline std::optional<std::int64_t> decode(const IntegerVar& var, std::span<const std::uint8_t> bits) {
  for (VarIndex v : var.bit_vars)
    if (v >= bits.size()) throw Error("assignment does not cover bits of '" + var.name + "'");

  if (var.scheme.kind == EncodingKind::one_hot) {
    std::optional<std::int64_t> selected;
    int hot = 0;
    for (std::size_t i = 0; i < var.bit_vars.size(); ++i) {
      if (bits[var.bit_vars[i]]) {
        ++hot;
        selected = var.scheme.domain_values[i];
      }
    }
    if (hot != 1) return std::nullopt;
    return selected;
  }

  std::int64_t value = var.scheme.kind == EncodingKind::offset_binary ? 1 : 0;
  for (std::size_t i = 0; i < var.bit_vars.size(); ++i)
    if (bits[var.bit_vars[i]]) value += std::int64_t{1} << i;
  return value;
}

/// Writes the canonical bit pattern of `value` into `bits`.
inline void encode(const IntegerVar& var, std::int64_t value, std::span<std::uint8_t> bits) {
  if (value < var.scheme.min_value() || value > var.scheme.max_value())
    throw Error("value " + std::to_string(value) + " outside domain of '" + var.name + "'");
  for (VarIndex v : var.bit_vars)
    if (v >= bits.size()) throw Error("assignment does not cover bits of '" + var.name + "'");

  if (var.scheme.kind == EncodingKind::one_hot) {
    const auto& values = var.scheme.domain_values;
    auto it = std::find(values.begin(), values.end(), value);
    if (it == values.end()) throw Error("value " + std::to_string(value) + " not in one-hot domain of '" + var.name + "'");
    for (std::size_t i = 0; i < values.size(); ++i) bits[var.bit_vars[i]] = (values.begin() + i == it) ? 1 : 0;
    return;
  }
  const std::int64_t raw = var.scheme.kind == EncodingKind::offset_binary ? value - 1 : value;
  for (std::size_t i = 0; i < var.bit_vars.size(); ++i) bits[var.bit_vars[i]] = (raw >> i) & 1;
}

enum class ModelKind { hobo, qubo };

inline const char* to_string(ModelKind kind) { return kind == ModelKind::hobo ? "hobo" : "qubo"; }

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "hobo") return ModelKind::hobo;
  if (s == "qubo") return ModelKind::qubo;
  throw Error("unknown model kind '" + s + "' (expected hobo or qubo)");
}

/// Binary variables needed to search 1 <= x, y, z <= 2^power: three
/// offset-binary integers for HOBO, three one-hot lists for QUBO.
inline std::int64_t qubit_count(ModelKind kind, int power) {
  if (power < 1 || power > 60) throw Error("power must be in [1, 60]");
  return kind == ModelKind::hobo ? 3 * std::int64_t{power} : 3 * (std::int64_t{1} << power);
}

}  // namespace hobo
