#pragma once

// Samplers for compiled models: exhaustive enumeration for small models and
// a Metropolis single-bit-flip annealer with a geometric schedule.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "hobo/parallel.hpp"
#include "hobo/tensorize.hpp"

namespace hobo {

struct AnnealConfig {
  std::uint64_t shots = 1000;
  std::uint32_t sweeps_per_shot = 100;
  std::optional<double> t_initial;  // unset: max(1, max |coeff|)
  double t_final = 0.1;
  std::uint64_t seed = 20240901;
  unsigned threads = 0;  // 0: HOBO_THREADS or hardware concurrency

  void validate() const {
    if (shots == 0) throw Error("shots must be positive");
    if (sweeps_per_shot == 0) throw Error("sweeps_per_shot must be positive");
    if (!(std::isfinite(t_final) && t_final > 0)) throw Error("t_final must be finite and positive");
    if (t_initial) {
      if (!(std::isfinite(*t_initial) && *t_initial > 0)) throw Error("t_initial must be finite and positive");
      if (t_final > *t_initial) throw Error("t_final must not exceed t_initial");
    }
  }
};

inline double default_t_initial(const CompiledModel& m) {
  return std::max(1.0, precision_audit(m).max_abs_coeff);
}

/// Geometric temperatures, one per sweep, from t_initial down to t_final.
inline std::vector<double> temperature_schedule(double t_initial, double t_final, std::uint32_t sweeps) {
  std::vector<double> temps(sweeps);
  if (sweeps == 1) {
    temps[0] = t_final;
    return temps;
  }
  const double ratio = std::log(t_final / t_initial);
  for (std::uint32_t s = 0; s < sweeps; ++s)
    temps[s] = t_initial * std::exp(ratio * static_cast<double>(s) / static_cast<double>(sweeps - 1));
  temps.back() = t_final;
  return temps;
}

struct Sample {
  Bits assignment;
  double energy = 0.0;
  std::uint64_t occurrence = 0;
};

/// Distinct assignments sorted by energy; ties keep first-seen order.
/// Occurrences sum to `shots`.
struct SampleSet {
  std::vector<Sample> entries;
  std::uint64_t shots = 0;
  std::string model_ref;
};

/// energy(bits with `flip` toggled) - energy(bits), computed directly from
/// the terms that contain `flip`.
inline double delta_energy(const CompiledModel& m, std::span<const std::uint8_t> bits, VarIndex flip) {
  detail::check_length(m, bits.size());
  if (flip >= m.nvars()) throw Error("flip index " + std::to_string(flip) + " out of range");
  double field = 0.0;
  for (std::size_t t = 0; t < m.term_count(); ++t) {
    auto vars = m.term_vars(t);
    if (!std::binary_search(vars.begin(), vars.end(), flip)) continue;
    bool others = true;
    for (VarIndex v : vars) {
      if (v != flip && !bits[v]) {
        others = false;
        break;
      }
    }
    if (others) field += m.term_coeff(t);
  }
  return bits[flip] ? -field : field;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// u < exp(-x). For x >= 37, exp(-x) is below the smallest nonzero draw
// (2^-53), so only u == 0 can pass; skipping exp there changes nothing.
inline bool metropolis_accept(double x, double u) { return x < 37.0 ? u < std::exp(-x) : u == 0.0; }

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

/// var -> terms containing it (CSR), with the other variables of each term
/// stored inline. Linear terms are omitted: they never change a field.
/// Terms longer than kInlineDegree keep their variables in `long_vars`.
struct Adjacency {
  static constexpr std::uint32_t kInlineDegree = 4;
  struct Entry {
    double coeff;
    std::uint32_t len;
    std::uint32_t other[kInlineDegree - 1];  // len <= kInlineDegree
  };
  struct LongEntry {
    double coeff;
    std::uint32_t term;
    std::uint32_t len;
    std::uint32_t vars_begin;
  };
  std::vector<std::uint32_t> start;
  std::vector<Entry> entries;
  std::vector<std::uint32_t> long_start;
  std::vector<LongEntry> long_entries;
  std::vector<VarIndex> long_vars;
  std::vector<std::uint32_t> long_terms;  // model term index of each long term

  explicit Adjacency(const CompiledModel& m) : start(m.nvars() + 1, 0), long_start(m.nvars() + 1, 0) {
    for (std::size_t t = 0; t < m.term_count(); ++t) {
      auto tv = m.term_vars(t);
      if (tv.size() < 2) continue;
      auto& counts = tv.size() <= kInlineDegree ? start : long_start;
      for (VarIndex v : tv) ++counts[v + 1];
    }
    std::partial_sum(start.begin(), start.end(), start.begin());
    std::partial_sum(long_start.begin(), long_start.end(), long_start.begin());
    entries.resize(start.back());
    long_entries.resize(long_start.back());
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    std::vector<std::uint32_t> long_fill(long_start.begin(), long_start.end() - 1);
    for (std::size_t t = 0; t < m.term_count(); ++t) {
      auto tv = m.term_vars(t);
      const auto len = static_cast<std::uint32_t>(tv.size());
      if (len < 2) continue;
      if (len <= kInlineDegree) {
        for (VarIndex v : tv) {
          Entry e{m.term_coeff(t), len, {0, 0, 0}};
          std::uint32_t k = 0;
          for (VarIndex w : tv)
            if (w != v) e.other[k++] = w;
          entries[fill[v]++] = e;
        }
      } else {
        const auto id = static_cast<std::uint32_t>(long_terms.size());
        const auto begin = static_cast<std::uint32_t>(long_vars.size());
        long_terms.push_back(static_cast<std::uint32_t>(t));
        long_vars.insert(long_vars.end(), tv.begin(), tv.end());
        for (VarIndex v : tv) long_entries[long_fill[v]++] = LongEntry{m.term_coeff(t), id, len, begin};
      }
    }
  }

  std::span<const Entry> of(VarIndex v) const { return {entries.data() + start[v], start[v + 1] - start[v]}; }
  std::span<const LongEntry> long_of(VarIndex v) const {
    return {long_entries.data() + long_start[v], long_start[v + 1] - long_start[v]};
  }
};

/// Incremental state holding the local field of every variable,
/// h_i = sum over terms t containing i of c_t * prod_{j in t, j != i} x_j.
/// Flipping i changes the energy by (1 - 2 x_i) h_i, so proposals are O(1);
/// an accepted flip touches only the terms containing i.
class LocalFieldState {
 public:
  LocalFieldState(const CompiledModel& m, const Adjacency& adj)
      : m_(m), adj_(adj), bits_(m.nvars(), 0), long_ones_(adj.long_terms.size(), 0), field_(m.nvars(), 0.0) {}

  void reset(std::span<const std::uint8_t> bits) {
    std::copy(bits.begin(), bits.end(), bits_.begin());
    std::fill(field_.begin(), field_.end(), 0.0);
    for (std::size_t t = 0; t < m_.term_count(); ++t) {
      auto vars = m_.term_vars(t);
      std::uint32_t ones = 0;
      for (VarIndex v : vars) ones += bits_[v];
      const auto len = static_cast<std::uint32_t>(vars.size());
      if (ones + 1 < len) continue;
      for (VarIndex v : vars)
        if (ones - bits_[v] == len - 1) field_[v] += m_.term_coeff(t);
    }
    for (std::size_t k = 0; k < adj_.long_terms.size(); ++k) {
      std::uint32_t ones = 0;
      for (VarIndex v : m_.term_vars(adj_.long_terms[k])) ones += bits_[v];
      long_ones_[k] = ones;
    }
  }

  double delta(VarIndex i) const { return bits_[i] ? -field_[i] : field_[i]; }

  void flip(VarIndex i) {
    const std::uint32_t old = bits_[i];
    const std::uint32_t now = 1U - old;
    const double sign = old ? -1.0 : 1.0;
    const std::uint8_t* x = bits_.data();
    double* h = field_.data();
    // Adding a zero contribution leaves a field unchanged, so the short
    // cases run without branches.
    for (const auto& e : adj_.of(i)) {
      const double dc = sign * e.coeff;
      switch (e.len) {
        case 2:
          h[e.other[0]] += dc;
          break;
        case 3:
          h[e.other[0]] += dc * x[e.other[1]];
          h[e.other[1]] += dc * x[e.other[0]];
          break;
        default: {
          const std::uint8_t a = x[e.other[0]], b = x[e.other[1]], c = x[e.other[2]];
          h[e.other[0]] += dc * (b & c);
          h[e.other[1]] += dc * (a & c);
          h[e.other[2]] += dc * (a & b);
        }
      }
    }
    for (const auto& e : adj_.long_of(i)) {
      const std::uint32_t others = long_ones_[e.term] - old;
      long_ones_[e.term] = others + now;
      // h_j depends on x_i only when every var other than i, j is set
      if (others + 2 < e.len) continue;
      const double dc = sign * e.coeff;
      for (std::uint32_t k = e.vars_begin, end = e.vars_begin + e.len; k < end; ++k) {
        const VarIndex j = adj_.long_vars[k];
        if (j != i && others - x[j] == e.len - 2) h[j] += dc;
      }
    }
    bits_[i] = static_cast<std::uint8_t>(now);
  }

  const Bits& bits() const { return bits_; }

 private:
  const CompiledModel& m_;
  const Adjacency& adj_;
  Bits bits_;
  std::vector<std::uint32_t> long_ones_;
  std::vector<double> field_;
};

inline Bits bits_from_index(std::uint64_t index, std::size_t n) {
  Bits b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = (index >> i) & 1U;
  return b;
}

}  // namespace detail

inline constexpr std::size_t kMaxExhaustiveVars = 26;

/// Enumerates all 2^n assignments in Gray-code order. Returns every
/// assignment on the lowest energy level, plus the next `extra_levels`
/// levels, each with occurrence 1. Ties are ordered by assignment index
/// (bit i of the index is variable i).
inline SampleSet solve_exhaustive(const CompiledModel& m, std::size_t extra_levels = 0) {
  const std::size_t n = m.nvars();
  if (n > kMaxExhaustiveVars)
    throw Error("model has " + std::to_string(n) + " variables; exhaustive solve supports at most " +
                std::to_string(kMaxExhaustiveVars));
  const std::size_t keep = extra_levels + 1;
  std::map<double, std::vector<std::uint64_t>> levels;
  auto offer = [&](double e, std::uint64_t index) {
    if (levels.size() == keep && e > levels.rbegin()->first) return;
    levels[e].push_back(index);
    if (levels.size() > keep) levels.erase(std::prev(levels.end()));
  };

  detail::Adjacency adj(m);
  detail::LocalFieldState state(m, adj);
  state.reset(Bits(n, 0));
  double e = 0.0;
  offer(e, 0);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const auto bit = static_cast<VarIndex>(std::countr_zero(k));
    e += state.delta(bit);
    state.flip(bit);
    offer(e, k ^ (k >> 1));
  }

  std::vector<std::pair<std::uint64_t, Sample>> found;
  for (auto& [level, indices] : levels) {
    for (std::uint64_t index : indices) {
      Bits b = detail::bits_from_index(index, n);
      const double exact = energy(m, b);
      found.push_back({index, Sample{std::move(b), exact, 1}});
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.second.energy != b.second.energy) return a.second.energy < b.second.energy;
    return a.first < b.first;
  });
  SampleSet out;
  out.model_ref = m.fingerprint();
  for (auto& [index, s] : found) out.entries.push_back(std::move(s));
  out.shots = out.entries.size();
  return out;
}

/// Merges final chain states into a SampleSet. Energies are recomputed
/// from scratch; the sort is stable so ties keep first-seen order.
inline SampleSet aggregate(const CompiledModel& m, const std::vector<Bits>& finals) {
  SampleSet out;
  out.model_ref = m.fingerprint();
  out.shots = finals.size();
  std::unordered_map<std::string, std::size_t> seen;
  for (const Bits& b : finals) {
    std::string key(b.begin(), b.end());
    auto [it, inserted] = seen.try_emplace(std::move(key), out.entries.size());
    if (inserted)
      out.entries.push_back(Sample{b, energy(m, b), 1});
    else
      ++out.entries[it->second].occurrence;
  }
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const Sample& a, const Sample& b) { return a.energy < b.energy; });
  return out;
}

/// Runs cfg.shots independent Metropolis chains. Chain c draws from its own
/// stream seeded by (seed, c), so the result is independent of threading.
inline SampleSet anneal(const CompiledModel& m, const AnnealConfig& cfg) {
  cfg.validate();
  const std::size_t n = m.nvars();
  if (n == 0) throw Error("cannot anneal a model without variables");
  const double t0 = cfg.t_initial.value_or(default_t_initial(m));
  if (cfg.t_final > t0) throw Error("t_final must not exceed t_initial");
  const std::vector<double> temps = temperature_schedule(t0, cfg.t_final, cfg.sweeps_per_shot);

  const detail::Adjacency adj(m);
  std::vector<Bits> finals(cfg.shots);
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(worker_count(cfg.threads), cfg.shots));

  parallel_for(workers, workers, [&](std::size_t w) {
    detail::LocalFieldState state(m, adj);
    std::vector<VarIndex> order(n);
    Bits init(n);
    const std::uint64_t begin = cfg.shots * w / workers;
    const std::uint64_t end = cfg.shots * (w + 1) / workers;
    for (std::uint64_t chain = begin; chain < end; ++chain) {
      std::mt19937_64 rng(detail::stream_seed(cfg.seed, chain));
      for (std::size_t i = 0; i < n; ++i) init[i] = static_cast<std::uint8_t>(rng() & 1U);
      state.reset(init);
      std::iota(order.begin(), order.end(), VarIndex{0});
      for (double temp : temps) {
        for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[detail::uniform_below(rng, i + 1)]);
        const double inv_t = 1.0 / temp;
        for (VarIndex v : order) {
          const double de = state.delta(v);
          if (de <= 0.0 || detail::metropolis_accept(de * inv_t, detail::uniform01(rng))) state.flip(v);
        }
      }
      finals[chain] = state.bits();
    }
  });
  return aggregate(m, finals);
}

}  // namespace hobo
