#pragma once

// JSON and CSV formats for polynomials, compiled models, sample sets,
// experiment reports and run manifests.

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hobo/encoding.hpp"
#include "hobo/poly.hpp"
#include "hobo/pythagorean.hpp"
#include "hobo/sampler.hpp"
#include "hobo/tensorize.hpp"

namespace hobo {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;

/// Shortest round-trip decimal form; integral values keep a trailing ".0"
/// ("1.0", "-1.0") so energies print the same way everywhere.
inline std::string format_number(double v) {
  if (std::isfinite(v) && std::floor(v) == v && std::fabs(v) < 1e16) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(v));
    std::string s(buf, ptr);
    if (v == 0.0 && std::signbit(v)) s = "-0";
    return s + ".0";
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string bitstring(std::span<const std::uint8_t> bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

inline Bits parse_bitstring(std::string_view s) {
  Bits b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw Error("invalid bitstring character '" + std::string(1, s[i]) + "'");
    b[i] = s[i] == '1';
  }
  return b;
}

// ---------------------------------------------------------------- polynomial

inline Json to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [vars, c] : p.terms()) terms.push_back({{"vars", vars}, {"coeff", c}});
  return {{"offset_included", true}, {"terms", terms}};
}

inline Polynomial polynomial_from_json(const Json& j) {
  Polynomial p;
  for (const auto& t : j.at("terms")) {
    auto vars = t.at("vars").get<MonomialKey>();
    if (!std::is_sorted(vars.begin(), vars.end()) || std::adjacent_find(vars.begin(), vars.end()) != vars.end())
      throw Error("polynomial term vars must be strictly increasing");
    p.add_term(std::move(vars), t.at("coeff").get<double>());
  }
  return p;
}

// ---------------------------------------------------------------- encodings

inline Json to_json(const IntegerVar& v) {
  Json j{{"name", v.name}, {"kind", to_string(v.scheme.kind)}, {"bits", v.bit_vars}};
  if (v.scheme.kind == EncodingKind::one_hot)
    j["values"] = v.scheme.domain_values;
  else
    j["width"] = v.scheme.width;
  return j;
}

inline IntegerVar integer_var_from_json(const Json& j) {
  EncodingScheme scheme;
  scheme.kind = encoding_kind_from_string(j.at("kind").get<std::string>());
  if (scheme.kind == EncodingKind::one_hot)
    scheme.domain_values = j.at("values").get<std::vector<std::int64_t>>();
  else
    scheme.width = j.at("width").get<int>();
  return restore_integer_var(j.at("name").get<std::string>(), std::move(scheme),
                             j.at("bits").get<std::vector<VarIndex>>());
}

// ---------------------------------------------------------------- compiled model

inline Json to_json(const CompiledModel& m) {
  Json terms = Json::array();
  for (std::size_t t = 0; t < m.term_count(); ++t) {
    auto vars = m.term_vars(t);
    terms.push_back({{"vars", std::vector<VarIndex>(vars.begin(), vars.end())}, {"coeff", m.term_coeff(t)}});
  }
  Json encodings = Json::array();
  for (const auto& e : m.encodings()) encodings.push_back(to_json(e));
  return {{"degree", m.degree()},   {"nvars", m.nvars()},        {"offset", m.offset()},
          {"terms", terms},         {"var_labels", m.var_labels()}, {"encodings", encodings}};
}

inline CompiledModel model_from_json(const Json& j) {
  auto labels = j.at("var_labels").get<std::vector<std::string>>();
  if (labels.size() != j.at("nvars").get<std::size_t>()) throw Error("var_labels size does not match nvars");
  Polynomial p = Polynomial::constant(j.at("offset").get<double>());
  for (const auto& t : j.at("terms")) {
    auto vars = t.at("vars").get<MonomialKey>();
    if (vars.empty()) throw Error("compiled model terms must not contain a constant");
    for (VarIndex v : vars)
      if (v >= labels.size()) throw Error("term references variable " + std::to_string(v) + " beyond nvars");
    p.add_term(std::move(vars), t.at("coeff").get<double>());
  }
  std::vector<IntegerVar> encodings;
  if (j.contains("encodings"))
    for (const auto& e : j.at("encodings")) encodings.push_back(integer_var_from_json(e));
  CompiledModel m = compile(p, std::move(labels), std::move(encodings));
  if (m.degree() != j.at("degree").get<std::size_t>()) throw Error("declared degree does not match terms");
  return m;
}

// ---------------------------------------------------------------- samples

/// CSV columns: assignment, energy, occurrence, then one decoded column per
/// attached encoding (empty on one-hot violation).
inline std::string samples_to_csv(const SampleSet& s, const CompiledModel& m) {
  std::ostringstream out;
  out << "assignment,energy,occurrence";
  for (const auto& e : m.encodings()) out << ',' << e.name;
  out << '\n';
  for (const Sample& row : s.entries) {
    out << bitstring(row.assignment) << ',' << format_number(row.energy) << ',' << row.occurrence;
    for (const auto& e : m.encodings()) {
      out << ',';
      if (auto v = decode(e, row.assignment)) out << *v;
    }
    out << '\n';
  }
  return out.str();
}

inline Json to_json(const SampleSet& s, const CompiledModel& m) {
  Json entries = Json::array();
  for (const Sample& row : s.entries) {
    Json e{{"assignment", bitstring(row.assignment)}, {"energy", row.energy}, {"occurrence", row.occurrence}};
    if (!m.encodings().empty()) {
      Json decoded = Json::object();
      for (const auto& enc : m.encodings()) {
        auto v = decode(enc, row.assignment);
        decoded[enc.name] = v ? Json(*v) : Json(nullptr);
      }
      e["decoded"] = decoded;
    }
    entries.push_back(std::move(e));
  }
  return {{"model_ref", s.model_ref}, {"shots", s.shots}, {"offset", m.offset()}, {"entries", entries}};
}

inline SampleSet samples_from_json(const Json& j) {
  SampleSet s;
  s.model_ref = j.value("model_ref", std::string{});
  s.shots = j.at("shots").get<std::uint64_t>();
  for (const auto& e : j.at("entries"))
    s.entries.push_back(Sample{parse_bitstring(e.at("assignment").get<std::string>()), e.at("energy").get<double>(),
                               e.at("occurrence").get<std::uint64_t>()});
  return s;
}

/// One row per assignment: one column per variable, then the energy.
inline std::string energy_dump_csv(const CompiledModel& m, std::span<const Bits> rows,
                                   std::span<const double> energies) {
  std::ostringstream out;
  for (const auto& label : m.var_labels()) out << label << ',';
  out << "energy\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::uint8_t b : rows[r]) out << int{b} << ',';
    out << format_number(energies[r]) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------- reports

inline std::string report_csv_header() { return "power,model,shots,theoretical_count,found_count,discovery_rate\n"; }

inline std::string report_csv_row(const ExperimentReport& r) {
  std::ostringstream out;
  out << r.power << ',' << to_string(r.kind) << ',' << r.shots << ',' << r.theoretical.size() << ','
      << r.found_primitive.size() << ',' << format_number(r.discovery_rate) << '\n';
  return out.str();
}

inline std::string reports_csv(const std::vector<ExperimentReport>& reports) {
  std::string out = report_csv_header();
  for (const auto& r : reports) out += report_csv_row(r);
  return out;
}

/// Per-triple occurrences. Theoretical primitive triples that were never
/// reached are listed with 0 so the table is complete.
inline std::string triples_csv(const ExperimentReport& r) {
  std::map<Triple, std::uint64_t> rows = r.occurrences;
  for (const Triple& t : r.theoretical) rows.try_emplace(t, 0);
  std::ostringstream out;
  out << "x,y,z,primitive,occurrences\n";
  for (const auto& [t, occ] : rows)
    out << t.x << ',' << t.y << ',' << t.z << ',' << (t.primitive() ? 1 : 0) << ',' << occ << '\n';
  return out.str();
}

// ---------------------------------------------------------------- files

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("failed writing '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::exception& e) {
    throw Error("invalid JSON in '" + path + "': " + e.what());
  }
}

/// Comment line that ties a CSV to the manifest of the run that wrote it.
inline std::string manifest_comment(const std::string& manifest_path) { return "# manifest: " + manifest_path + "\n"; }

}  // namespace hobo
