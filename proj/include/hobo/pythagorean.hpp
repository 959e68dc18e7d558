#pragma once

// Pythagorean triple search as binary optimization.
//
// HOBO: x, y, z are offset-binary integers of width p and the cost is
// (x^2 + y^2 - z^2)^2, a quartic in the bits. QUBO: one-hot lists over the
// squares 1..(2^p)^2 keep the equation term quadratic at the price of 2^p
// bits per integer.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "hobo/encoding.hpp"
#include "hobo/sampler.hpp"
#include "hobo/tensorize.hpp"

namespace hobo {

struct Triple {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t z = 0;

  bool satisfies() const { return x * x + y * y == z * z; }
  bool primitive() const { return std::gcd(std::gcd(x, y), z) == 1; }
  /// (x, y) sorted so that swapped legs compare equal.
  Triple unordered() const { return x <= y ? *this : Triple{y, x, z}; }

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct PythagoreanProblem {
  int power = 0;
  ModelKind kind = ModelKind::hobo;
  CompiledModel compiled;
  std::array<IntegerVar, 3> vars;  // x, y, z
  double penalty_weight = 0.0;     // qubo only
  // QUBO integers decode to the squares x^2, y^2, z^2.
  bool decodes_squares = false;
};

inline constexpr int kMaxHoboPower = 12;
inline constexpr int kMaxQuboPower = 9;
inline constexpr double kDefaultQuboPenalty = 0.01;

/// (x^2 + y^2 - z^2)^2 over three offset-binary integers of width `power`.
inline PythagoreanProblem build_hobo(int power) {
  if (power < 1 || power > kMaxHoboPower)
    throw Error("hobo power must be in [1, " + std::to_string(kMaxHoboPower) + "]");
  Variables vars;
  IntegerVar x = make_offset_binary(vars, "x", power);
  IntegerVar y = make_offset_binary(vars, "y", power);
  IntegerVar z = make_offset_binary(vars, "z", power);
  const Polynomial residual = pow(x.value_poly, 2) + pow(y.value_poly, 2) - pow(z.value_poly, 2);
  const Polynomial h = pow(residual, 2);

  PythagoreanProblem p;
  p.power = power;
  p.kind = ModelKind::hobo;
  p.compiled = compile(h, vars, {x, y, z});
  p.vars = {std::move(x), std::move(y), std::move(z)};
  return p;
}

/// One-hot constraints on each integer plus
/// penalty_weight * (sum x2*qx + sum y2*qy - sum z2*qz)^2.
inline PythagoreanProblem build_qubo(int power, double penalty_weight = kDefaultQuboPenalty) {
  if (power < 1 || power > kMaxQuboPower)
    throw Error("qubo power must be in [1, " + std::to_string(kMaxQuboPower) + "]");
  if (!(std::isfinite(penalty_weight) && penalty_weight > 0)) throw Error("penalty weight must be positive");
  std::vector<std::int64_t> squares;
  for (std::int64_t v = 1; v <= (std::int64_t{1} << power); ++v) squares.push_back(v * v);

  Variables vars;
  auto [x, cx] = make_one_hot(vars, "x2", squares, "qx");
  auto [y, cy] = make_one_hot(vars, "y2", squares, "qy");
  auto [z, cz] = make_one_hot(vars, "z2", squares, "qz");
  Polynomial h = cx + cy + cz;
  h += penalty_weight * pow(x.value_poly + y.value_poly - z.value_poly, 2);
  if (h.degree() > 2) throw Error("qubo model has degree " + std::to_string(h.degree()));

  PythagoreanProblem p;
  p.power = power;
  p.kind = ModelKind::qubo;
  p.penalty_weight = penalty_weight;
  p.decodes_squares = true;
  p.compiled = compile(h, vars, {x, y, z});
  p.vars = {std::move(x), std::move(y), std::move(z)};
  return p;
}

inline PythagoreanProblem build_problem(ModelKind kind, int power, double penalty_weight = kDefaultQuboPenalty) {
  return kind == ModelKind::hobo ? build_hobo(power) : build_qubo(power, penalty_weight);
}

/// Primitive triples with z <= limit_z, x < y, from Euclid's formula:
/// m > n > 0 coprime with opposite parity, legs m^2 - n^2 and 2mn.
inline std::vector<Triple> primitive_triples_euclid(std::int64_t limit_z) {
  std::vector<Triple> out;
  for (std::int64_t m = 2; m * m + 1 <= limit_z; ++m) {
    for (std::int64_t n = 1; n < m; ++n) {
      const std::int64_t z = m * m + n * n;
      if (z > limit_z) break;
      if ((m - n) % 2 == 0 || std::gcd(m, n) != 1) continue;
      out.push_back(Triple{m * m - n * n, 2 * m * n, z}.unordered());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Same set by scanning every x < y and testing x^2 + y^2 for a square.
inline std::vector<Triple> primitive_triples_scan(std::int64_t limit_z) {
  std::vector<Triple> out;
  const std::int64_t zz_max = limit_z * limit_z;
  for (std::int64_t x = 1; 2 * x * x < zz_max; ++x) {
    for (std::int64_t y = x + 1; x * x + y * y <= zz_max; ++y) {
      const std::int64_t zz = x * x + y * y;
      auto z = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(zz))));
      while (z * z > zz) --z;
      while ((z + 1) * (z + 1) <= zz) ++z;
      if (z * z != zz) continue;
      Triple t{x, y, z};
      if (t.primitive()) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Triple> oracle_primitive_triples(std::int64_t limit_z) {
  if (limit_z < 1) throw Error("limit_z must be at least 1");
  return primitive_triples_euclid(limit_z);
}

struct ExperimentReport {
  int power = 0;
  ModelKind kind = ModelKind::hobo;
  std::uint64_t shots = 0;
  std::set<Triple> found_primitive;
  std::set<Triple> theoretical;
  double discovery_rate = 0.0;
  // every valid triple seen (primitive or not), legs unordered
  std::map<Triple, std::uint64_t> occurrences;
  std::uint64_t one_hot_violations = 0;
};

namespace detail {

inline std::optional<std::int64_t> exact_sqrt(std::int64_t v) {
  if (v < 0) return std::nullopt;
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  if (r * r != v) return std::nullopt;
  return r;
}

}  // namespace detail

/// Decodes each sample to an (x, y, z) triple, or nullopt on a one-hot violation.
inline std::optional<Triple> decode_triple(const PythagoreanProblem& problem, std::span<const std::uint8_t> bits) {
  std::array<std::int64_t, 3> v{};
  for (std::size_t k = 0; k < 3; ++k) {
    auto d = decode(problem.vars[k], bits);
    if (!d) return std::nullopt;
    if (problem.decodes_squares) {
      d = detail::exact_sqrt(*d);
      if (!d) throw Error("one-hot value is not a perfect square");
    }
    v[k] = *d;
  }
  return Triple{v[0], v[1], v[2]};
}

/// Tallies valid triples in a SampleSet. Swapped legs are merged;
/// non-primitive triples are counted but do not contribute to the rate.
inline ExperimentReport harvest(const PythagoreanProblem& problem, const SampleSet& samples) {
  if (!samples.model_ref.empty() && samples.model_ref != problem.compiled.fingerprint())
    throw Error("sample set was not produced from this model");
  ExperimentReport r;
  r.power = problem.power;
  r.kind = problem.kind;
  r.shots = samples.shots;
  const auto theory = oracle_primitive_triples(std::int64_t{1} << problem.power);
  r.theoretical.insert(theory.begin(), theory.end());

  const std::int64_t limit = std::int64_t{1} << problem.power;
  for (const Sample& s : samples.entries) {
    if (s.assignment.size() != problem.compiled.nvars()) throw Error("sample width does not match model");
    auto t = decode_triple(problem, s.assignment);
    if (!t) {
      r.one_hot_violations += s.occurrence;
      continue;
    }
    if (!t->satisfies()) continue;
    if (t->z > limit) throw Error("decoded triple outside the search range");
    const Triple key = t->unordered();
    r.occurrences[key] += s.occurrence;
    if (key.primitive()) r.found_primitive.insert(key);
  }
  std::size_t hits = 0;
  for (const Triple& t : r.found_primitive) hits += r.theoretical.count(t);
  r.discovery_rate = r.theoretical.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(r.theoretical.size());
  return r;
}

inline constexpr int kFirstCurvePower = 3;

/// Per-power anneal seed derived from the master seed.
inline std::uint64_t power_seed(std::uint64_t master, int power) {
  return detail::stream_seed(master, 0x5079746861ULL + static_cast<std::uint64_t>(power));
}

/// Builds, anneals and harvests a single power. shots == 0 yields an empty report.
inline ExperimentReport run_experiment(ModelKind kind, int power, std::uint64_t shots, AnnealConfig cfg,
                                       double penalty_weight = kDefaultQuboPenalty) {
  const PythagoreanProblem problem = build_problem(kind, power, penalty_weight);
  SampleSet samples;
  samples.model_ref = problem.compiled.fingerprint();
  if (shots > 0) {
    cfg.shots = shots;
    samples = anneal(problem.compiled, cfg);
  }
  return harvest(problem, samples);
}

/// One report per power in [3, max_power]; each power anneals with
/// power_seed(cfg.seed, power). Empty when max_power < 3.
inline std::vector<ExperimentReport> discovery_curve(int max_power, std::uint64_t shots, ModelKind kind,
                                                     const AnnealConfig& cfg,
                                                     double penalty_weight = kDefaultQuboPenalty) {
  const int cap = kind == ModelKind::hobo ? kMaxHoboPower : kMaxQuboPower;
  if (max_power > cap)
    throw Error(std::string(to_string(kind)) + " discovery curve supports powers up to " + std::to_string(cap));
  std::vector<ExperimentReport> out;
  for (int p = kFirstCurvePower; p <= max_power; ++p) {
    AnnealConfig c = cfg;
    c.seed = power_seed(cfg.seed, p);
    out.push_back(run_experiment(kind, p, shots, c, penalty_weight));
  }
  return out;
}

}  // namespace hobo
