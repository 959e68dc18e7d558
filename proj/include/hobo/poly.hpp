#pragma once

// Sparse multilinear polynomials over binary variables.
//
// Every stored monomial is a strictly increasing list of variable indices
// with a nonzero coefficient. x*x collapses to x on multiplication, so any
// sequence of operations stays multilinear.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hobo {

using VarIndex = std::uint32_t;
using MonomialKey = std::vector<VarIndex>;
using Bits = std::vector<std::uint8_t>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr unsigned kMaxExponent = 16;

/// Registry of named binary variables. Indices are dense, 0..size()-1.
class Variables {
 public:
  Variables() = default;

  VarIndex add(std::string label) {
    if (label.empty()) throw Error("variable label must not be empty");
    if (index_.count(label)) throw Error("duplicate variable label '" + label + "'");
    const auto id = static_cast<VarIndex>(labels_.size());
    index_.emplace(label, id);
    labels_.push_back(std::move(label));
    return id;
  }

  std::optional<VarIndex> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& label(VarIndex id) const { return labels_.at(id); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, VarIndex> index_;
};

namespace detail {

struct KeyHash {
  std::size_t operator()(const MonomialKey& key) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (VarIndex v : key) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

inline bool is_integral(double c) { return std::isfinite(c) && std::floor(c) == c; }

// Integers above 2^53 are no longer exactly representable.
inline bool is_exact_integer(double c) { return is_integral(c) && std::fabs(c) <= 9007199254740992.0; }

inline MonomialKey merge_vars(const MonomialKey& a, const MonomialKey& b) {
  MonomialKey out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace detail

class Polynomial {
 public:
  using TermMap = std::map<MonomialKey, double>;

  Polynomial() = default;

  static Polynomial constant(double c) {
    Polynomial p;
    p.add_term({}, c);
    return p;
  }

  static Polynomial variable(VarIndex v, double coeff = 1.0) {
    Polynomial p;
    p.add_term({v}, coeff);
    return p;
  }

  /// Builds from raw (vars, coeff) pairs. Vars may be unsorted or repeated.
  static Polynomial from_terms(std::initializer_list<std::pair<MonomialKey, double>> terms) {
    Polynomial p;
    for (const auto& [vars, c] : terms) p.add_term(vars, c);
    return p;
  }

  /// Adds coeff * prod(vars). Applies x*x = x and drops the term if it cancels.
  void add_term(MonomialKey vars, double coeff) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    accumulate(std::move(vars), coeff);
  }

  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  double constant_term() const {
    auto it = terms_.find(MonomialKey{});
    return it == terms_.end() ? 0.0 : it->second;
  }

  double coeff(const MonomialKey& vars) const {
    auto it = terms_.find(vars);
    return it == terms_.end() ? 0.0 : it->second;
  }

  std::size_t degree() const {
    std::size_t d = 0;
    for (const auto& [vars, c] : terms_) d = std::max(d, vars.size());
    return d;
  }

  /// Sorted list of distinct variables appearing in some term.
  std::vector<VarIndex> variables() const {
    std::vector<VarIndex> out;
    for (const auto& [vars, c] : terms_) out.insert(out.end(), vars.begin(), vars.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::size_t nvars() const { return variables().size(); }

  /// One past the largest variable index used, i.e. the minimum assignment length.
  std::size_t index_bound() const {
    std::size_t bound = 0;
    for (const auto& [vars, c] : terms_)
      if (!vars.empty()) bound = std::max<std::size_t>(bound, vars.back() + 1);
    return bound;
  }

  bool all_integral() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return detail::is_integral(t.second); });
  }

  double evaluate(std::span<const std::uint8_t> bits) const {
    if (bits.size() < index_bound())
      throw Error("assignment has " + std::to_string(bits.size()) + " bits, polynomial needs " +
                  std::to_string(index_bound()));
    double sum = 0.0;
    for (const auto& [vars, c] : terms_) {
      bool active = true;
      for (VarIndex v : vars) {
        if (!bits[v]) {
          active = false;
          break;
        }
      }
      if (active) sum += c;
    }
    return sum;
  }

  Polynomial operator-() const {
    Polynomial out = *this;
    for (auto& [vars, c] : out.terms_) c = -c;
    return out;
  }

  Polynomial& operator+=(const Polynomial& other) {
    for (const auto& [vars, c] : other.terms_) accumulate(vars, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& other) {
    for (const auto& [vars, c] : other.terms_) accumulate(vars, -c);
    return *this;
  }

  Polynomial& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
    }
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator+(Polynomial a, double c) { return a += constant(c); }
  friend Polynomial operator-(Polynomial a, double c) { return a -= constant(c); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

 private:
  template <class Key>
  void accumulate(Key&& vars, double coeff) {
    if (coeff == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(std::forward<Key>(vars), coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  TermMap terms_;
};

inline Polynomial add(const Polynomial& a, const Polynomial& b) { return a + b; }

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::unordered_map<MonomialKey, double, detail::KeyHash> acc;
  acc.reserve(a.size() * b.size());
  for (const auto& [va, ca] : a.terms_)
    for (const auto& [vb, cb] : b.terms_) acc[detail::merge_vars(va, vb)] += ca * cb;

  std::vector<std::pair<MonomialKey, double>> sorted;
  sorted.reserve(acc.size());
  for (auto& [k, c] : acc)
    if (c != 0.0) sorted.emplace_back(k, c);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });

  Polynomial out;
  for (auto& [k, c] : sorted) out.terms_.emplace_hint(out.terms_.end(), std::move(k), c);

#ifndef NDEBUG
  if (a.all_integral() && b.all_integral())
    for (const auto& [k, c] : out.terms_) assert(detail::is_exact_integer(c) && "coefficient lost integrality");
#endif
  return out;
}

inline Polynomial mul(const Polynomial& a, const Polynomial& b) { return a * b; }

inline Polynomial pow(const Polynomial& a, unsigned k) {
  if (k > kMaxExponent)
    throw Error("exponent " + std::to_string(k) + " exceeds limit of " + std::to_string(kMaxExponent));
  Polynomial result = Polynomial::constant(1.0);
  Polynomial base = a;
  // square-and-multiply; multiplication is commutative so order is irrelevant
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

inline double evaluate(const Polynomial& p, std::span<const std::uint8_t> bits) { return p.evaluate(bits); }

}  // namespace hobo
