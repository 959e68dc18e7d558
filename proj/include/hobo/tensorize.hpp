#pragma once

// Compiled cost models.
//
// A CompiledModel is the sparse form of the coefficient tensor: each
// monomial of the source polynomial is stored once, in canonical order, as
// a slice of a flat index array. Contracting the tensor with a solution
// vector is then the sum of coefficients whose variables are all set.
// The constant term is split off as `offset`; energies exclude it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "hobo/encoding.hpp"
#include "hobo/parallel.hpp"
#include "hobo/poly.hpp"

namespace hobo {

class CompiledModel {
 public:
  CompiledModel() = default;

  std::size_t degree() const { return degree_; }
  std::size_t nvars() const { return labels_.size(); }
  double offset() const { return offset_; }
  bool is_qubo() const { return degree_ <= 2; }

  std::size_t term_count() const { return coeffs_.size(); }
  std::span<const VarIndex> term_vars(std::size_t t) const {
    return {term_vars_.data() + term_start_[t], term_start_[t + 1] - term_start_[t]};
  }
  double term_coeff(std::size_t t) const { return coeffs_[t]; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  const std::vector<std::string>& var_labels() const { return labels_; }
  const std::vector<IntegerVar>& encodings() const { return encodings_; }

  /// Rebuilds the source polynomial, offset included.
  Polynomial to_polynomial() const {
    Polynomial p = Polynomial::constant(offset_);
    for (std::size_t t = 0; t < term_count(); ++t) {
      auto vars = term_vars(t);
      p.add_term(MonomialKey(vars.begin(), vars.end()), coeffs_[t]);
    }
    return p;
  }

  /// Stable FNV-1a fingerprint of the terms, offset and size; identifies
  /// which model a SampleSet came from.
  std::string fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
      for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffU;
        h *= 1099511628211ULL;
      }
    };
    auto mix_double = [&mix](double d) {
      std::uint64_t bits = 0;
      std::memcpy(&bits, &d, sizeof bits);
      mix(bits);
    };
    mix(nvars());
    mix_double(offset_);
    for (std::size_t t = 0; t < term_count(); ++t) {
      auto vars = term_vars(t);
      mix(vars.size());
      for (VarIndex v : vars) mix(v);
      mix_double(coeffs_[t]);
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xfU];
    return out;
  }

  friend CompiledModel compile(const Polynomial& p, std::vector<std::string> labels,
                               std::vector<IntegerVar> encodings);

 private:
  std::size_t degree_ = 0;
  double offset_ = 0.0;
  std::vector<std::uint32_t> term_start_{0};
  std::vector<VarIndex> term_vars_;
  std::vector<double> coeffs_;
  std::vector<std::string> labels_;
  std::vector<IntegerVar> encodings_;
};

/// Moves the constant term to the offset and flattens the remaining terms in
/// canonical (lexicographic) order. `labels` fixes nvars and must cover
/// every variable the polynomial uses.
inline CompiledModel compile(const Polynomial& p, std::vector<std::string> labels,
                             std::vector<IntegerVar> encodings = {}) {
  if (labels.size() < p.index_bound())
    throw Error("label table has " + std::to_string(labels.size()) + " entries, polynomial uses " +
                std::to_string(p.index_bound()) + " variables");
  CompiledModel m;
  m.labels_ = std::move(labels);
  m.encodings_ = std::move(encodings);
  m.coeffs_.reserve(p.size());
  m.term_start_.reserve(p.size() + 1);
  for (const auto& [vars, c] : p.terms()) {
    if (vars.empty()) {
      m.offset_ = c;
      continue;
    }
    m.term_vars_.insert(m.term_vars_.end(), vars.begin(), vars.end());
    m.term_start_.push_back(static_cast<std::uint32_t>(m.term_vars_.size()));
    m.coeffs_.push_back(c);
    m.degree_ = std::max(m.degree_, vars.size());
  }
  return m;
}

inline CompiledModel compile(const Polynomial& p, const Variables& vars, std::vector<IntegerVar> encodings = {}) {
  return compile(p, vars.labels(), std::move(encodings));
}

/// Compiles with generated labels x0..x{n-1}, n = one past the largest index used.
inline CompiledModel compile(const Polynomial& p) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < p.index_bound(); ++i) labels.push_back("x" + std::to_string(i));
  return compile(p, std::move(labels));
}

namespace detail {

inline void check_length(const CompiledModel& m, std::size_t n) {
  if (n != m.nvars())
    throw Error("assignment has " + std::to_string(n) + " bits, model has " + std::to_string(m.nvars()) + " variables");
}

template <class Acc>
Acc accumulate_energy(const CompiledModel& m, std::span<const std::uint8_t> bits) {
  Acc sum = 0;
  for (std::size_t t = 0; t < m.term_count(); ++t) {
    bool active = true;
    for (VarIndex v : m.term_vars(t)) {
      if (!bits[v]) {
        active = false;
        break;
      }
    }
    if (active) sum += static_cast<Acc>(m.term_coeff(t));
  }
  return sum;
}

}  // namespace detail

/// Sum of active terms, offset excluded. Accumulates in canonical term order.
inline double energy(const CompiledModel& m, std::span<const std::uint8_t> bits) {
  detail::check_length(m, bits.size());
  return detail::accumulate_energy<double>(m, bits);
}

/// Same contraction with float32 coefficients and accumulator. Exists to
/// show how single precision corrupts large integer energies; the samplers
/// never use it.
inline float energy_float32(const CompiledModel& m, std::span<const std::uint8_t> bits) {
  detail::check_length(m, bits.size());
  return detail::accumulate_energy<float>(m, bits);
}

struct EnergyReport {
  Bits assignment;
  double energy = 0.0;
  double total = 0.0;  // energy + offset
};

inline EnergyReport energy_report(const CompiledModel& m, std::span<const std::uint8_t> bits) {
  const double e = energy(m, bits);
  return {Bits(bits.begin(), bits.end()), e, e + m.offset()};
}

namespace detail {

template <class Out, class Fn>
std::vector<Out> map_batch(const CompiledModel& m, std::span<const Bits> batch, unsigned threads, Fn fn) {
  for (std::size_t r = 0; r < batch.size(); ++r)
    if (batch[r].size() != m.nvars())
      throw Error("ragged batch: row " + std::to_string(r) + " has " + std::to_string(batch[r].size()) +
                  " bits, expected " + std::to_string(m.nvars()));
  std::vector<Out> out(batch.size());
  parallel_for(batch.size(), worker_count(threads), [&](std::size_t r) { out[r] = fn(m, batch[r]); });
  return out;
}

}  // namespace detail

/// Row-wise energy(); each row is computed independently so results do not
/// depend on the thread count.
inline std::vector<double> energy_batch(const CompiledModel& m, std::span<const Bits> batch, unsigned threads = 0) {
  return detail::map_batch<double>(m, batch, threads, [](const CompiledModel& mm, const Bits& row) {
    return detail::accumulate_energy<double>(mm, row);
  });
}

inline std::vector<float> energy_batch_float32(const CompiledModel& m, std::span<const Bits> batch,
                                               unsigned threads = 0) {
  return detail::map_batch<float>(m, batch, threads, [](const CompiledModel& mm, const Bits& row) {
    return detail::accumulate_energy<float>(mm, row);
  });
}

struct PrecisionAudit {
  double max_abs_coeff = 0.0;
  double energy_bound = 0.0;  // sum of |coeff| over non-constant terms
  bool exceeds_float32 = false;  // bound > 2^24
  bool exceeds_float64 = false;  // bound > 2^53

  bool safe_in_float32() const { return !exceeds_float32; }
};

inline PrecisionAudit precision_audit(const CompiledModel& m) {
  PrecisionAudit a;
  for (double c : m.coeffs()) {
    a.max_abs_coeff = std::max(a.max_abs_coeff, std::fabs(c));
    a.energy_bound += std::fabs(c);
  }
  a.exceeds_float32 = a.energy_bound > 16777216.0;
  a.exceeds_float64 = a.energy_bound > 9007199254740992.0;
  return a;
}

}  // namespace hobo
