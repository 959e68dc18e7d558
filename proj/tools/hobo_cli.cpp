// hobo: compile polynomial cost functions, sample them, and run the
// Pythagorean triple experiments.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hobo/hobo.hpp"

namespace fs = std::filesystem;
using namespace hobo;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240901;
constexpr int kExitError = 1;
constexpr int kExitParse = 2;

struct SourceOptions {
  std::string expr_file;
  std::string expr;
  std::string vars;
  std::string preset;
  std::string model_file;
  int power = 4;
  std::string model_kind = "hobo";
  double penalty = kDefaultQuboPenalty;
};

struct AnnealOptions {
  std::uint64_t shots = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::uint32_t sweeps = 100;
  std::optional<double> t_initial;
  double t_final = 0.1;
  unsigned threads = 0;

  AnnealConfig config() const {
    AnnealConfig c;
    c.shots = shots;
    c.seed = seed;
    c.sweeps_per_shot = sweeps;
    c.t_initial = t_initial;
    c.t_final = t_final;
    c.threads = threads;
    return c;
  }
};

struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  Json config = Json::object();
  std::vector<std::string> outputs;
  bool record_time = false;

  void write(const std::string& path) const {
    Json j{{"command", command}, {"argv", argv},       {"config", config},
           {"version", kVersion}, {"outputs", outputs}};
    if (config.contains("seed")) j["seed"] = config["seed"];
    if (record_time) {
      const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      char buf[32];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      j["timestamp"] = buf;
    }
    write_text_file(path, j.dump(2) + "\n");
  }
};

std::vector<std::string> split_labels(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

void add_source_options(CLI::App* cmd, SourceOptions& o, bool allow_model_file) {
  cmd->add_option("--expr-file", o.expr_file, "File holding the cost expression");
  cmd->add_option("--expr", o.expr, "Cost expression given inline");
  cmd->add_option("--vars", o.vars, "Declared variable labels, comma or space separated");
  cmd->add_option("--preset", o.preset, "Built-in model")->check(CLI::IsMember({"pythagorean"}));
  cmd->add_option("--power", o.power, "Preset search range 1..2^power")->check(CLI::Range(1, kMaxHoboPower));
  cmd->add_option("--model", o.model_kind, "Preset formulation")->check(CLI::IsMember({"hobo", "qubo"}));
  cmd->add_option("--penalty", o.penalty, "QUBO equation penalty weight")->check(CLI::PositiveNumber);
  if (allow_model_file) cmd->add_option("--model-file,-m", o.model_file, "Compiled model JSON");
}

CompiledModel load_source(const SourceOptions& o, Json& config) {
  if (!o.model_file.empty()) {
    config["model_file"] = o.model_file;
    return model_from_json(read_json_file(o.model_file));
  }
  if (o.preset == "pythagorean") {
    config["preset"] = o.preset;
    config["power"] = o.power;
    config["model"] = o.model_kind;
    const ModelKind kind = model_kind_from_string(o.model_kind);
    if (kind == ModelKind::qubo) config["penalty"] = o.penalty;
    return build_problem(kind, o.power, o.penalty).compiled;
  }
  if (o.expr_file.empty() && o.expr.empty()) throw Error("one of --expr-file, --expr, --preset or --model-file is required");
  const std::string text = o.expr_file.empty() ? o.expr : read_text_file(o.expr_file);
  Variables vars;
  for (auto& label : split_labels(o.vars)) vars.add(label);
  config["expr"] = text;
  config["vars"] = vars.labels();
  return compile(parse_expr(text, vars), vars);
}

Json anneal_json(const AnnealConfig& c, double t_initial) {
  return {{"shots", c.shots}, {"seed", c.seed}, {"sweeps_per_shot", c.sweeps_per_shot},
          {"t_initial", t_initial}, {"t_final", c.t_final}};
}

void add_anneal_options(CLI::App* cmd, AnnealOptions& o) {
  cmd->add_option("--shots", o.shots, "Independent annealing chains")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master random seed")->capture_default_str();
  cmd->add_option("--sweeps", o.sweeps, "Sweeps per shot")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--t-initial", o.t_initial, "Initial temperature (default max(1, max |coeff|))");
  cmd->add_option("--t-final", o.t_final, "Final temperature")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (default HOBO_THREADS or all cores)");
}

std::string manifest_path_for(const std::string& output) { return output + ".manifest.json"; }

void print_samples(const SampleSet& s, const CompiledModel& m, std::size_t top) {
  for (std::size_t i = 0; i < std::min(top, s.entries.size()); ++i) {
    const Sample& row = s.entries[i];
    std::cout << "Energy " << format_number(row.energy) << ", Occurrence " << row.occurrence << '\n';
    for (const auto& e : m.encodings()) {
      if (auto v = decode(e, row.assignment))
        std::cout << e.name << " = " << *v << '\n';
      else
        std::cout << "ERR: " << e.name << " is not One-hot.\n";
    }
  }
}

int cmd_compile(const SourceOptions& src, const std::string& out, Manifest manifest) {
  CompiledModel m = load_source(src, manifest.config);
  const std::string mpath = manifest_path_for(out);
  Json j = to_json(m);
  j["manifest"] = mpath;
  write_text_file(out, j.dump(2) + "\n");
  manifest.outputs = {out};
  manifest.write(mpath);
  std::cout << "offset " << format_number(m.offset()) << '\n'
            << "degree " << m.degree() << '\n'
            << "nvars " << m.nvars() << '\n'
            << "terms " << m.term_count() << '\n';
  return 0;
}

int cmd_solve(const SourceOptions& src, const AnnealOptions& ao, bool exhaustive, std::size_t top,
              const std::string& out, const std::string& json_out, Manifest manifest) {
  CompiledModel m = load_source(src, manifest.config);
  SampleSet s;
  if (exhaustive) {
    manifest.config["solver"] = "exhaustive";
    s = solve_exhaustive(m);
  } else {
    const AnnealConfig cfg = ao.config();
    const double t0 = cfg.t_initial.value_or(default_t_initial(m));
    manifest.config["solver"] = "anneal";
    manifest.config["anneal"] = anneal_json(cfg, t0);
    manifest.config["seed"] = cfg.seed;
    s = anneal(m, cfg);
  }
  const std::string mpath = manifest_path_for(out);
  write_text_file(out, manifest_comment(mpath) + samples_to_csv(s, m));
  manifest.outputs = {out};
  if (!json_out.empty()) {
    Json j = to_json(s, m);
    j["manifest"] = mpath;
    write_text_file(json_out, j.dump(2) + "\n");
    manifest.outputs.push_back(json_out);
  }
  manifest.write(mpath);
  std::cout << "offset " << format_number(m.offset()) << '\n';
  print_samples(s, m, top);
  return 0;
}

int cmd_pythagorean(int power, const std::string& kind_name, double penalty, const AnnealOptions& ao,
                    const std::string& dir, bool save_samples, Manifest manifest) {
  const ModelKind kind = model_kind_from_string(kind_name);
  const PythagoreanProblem problem = build_problem(kind, power, penalty);
  AnnealConfig cfg = ao.config();
  SampleSet samples;
  samples.model_ref = problem.compiled.fingerprint();
  if (cfg.shots > 0) samples = anneal(problem.compiled, cfg);
  const ExperimentReport report = harvest(problem, samples);

  fs::create_directories(dir);
  const std::string mpath = (fs::path(dir) / "manifest.json").string();
  const std::string report_path = (fs::path(dir) / "report.csv").string();
  const std::string triples_path = (fs::path(dir) / "triples.csv").string();
  manifest.config = {{"power", power}, {"model", kind_name}, {"seed", cfg.seed}};
  if (kind == ModelKind::qubo) manifest.config["penalty"] = penalty;
  manifest.config["anneal"] = anneal_json(cfg, cfg.t_initial.value_or(default_t_initial(problem.compiled)));
  write_text_file(report_path, manifest_comment("manifest.json") + reports_csv({report}));
  write_text_file(triples_path, manifest_comment("manifest.json") + triples_csv(report));
  manifest.outputs = {report_path, triples_path};
  if (save_samples) {
    const std::string samples_path = (fs::path(dir) / "samples.csv").string();
    write_text_file(samples_path, manifest_comment("manifest.json") + samples_to_csv(samples, problem.compiled));
    manifest.outputs.push_back(samples_path);
  }
  manifest.write(mpath);

  std::cout << "power " << power << " model " << kind_name << " qubits " << problem.compiled.nvars() << " shots "
            << report.shots << '\n'
            << "theoretical " << report.theoretical.size() << " found " << report.found_primitive.size()
            << " discovery_rate " << format_number(report.discovery_rate) << '\n';
  if (kind == ModelKind::qubo) std::cout << "one_hot_violations " << report.one_hot_violations << '\n';
  for (const auto& [t, occ] : report.occurrences)
    std::cout << t.x << ' ' << t.y << ' ' << t.z << (t.primitive() ? " primitive " : " non-primitive ") << occ
              << '\n';
  return 0;
}

int cmd_discovery_curve(int max_power, const std::string& kind_name, double penalty, const AnnealOptions& ao,
                        const std::string& out, Manifest manifest) {
  std::vector<ModelKind> kinds;
  if (kind_name == "both")
    kinds = {ModelKind::hobo, ModelKind::qubo};
  else
    kinds = {model_kind_from_string(kind_name)};
  if (max_power < kFirstCurvePower)
    std::cerr << "warning: max power " << max_power << " is below " << kFirstCurvePower << "; curve is empty\n";

  AnnealConfig cfg = ao.config();
  std::map<ModelKind, std::map<int, ExperimentReport>> results;
  for (ModelKind k : kinds) {
    const int cap = k == ModelKind::hobo ? kMaxHoboPower : kMaxQuboPower;
    const int limit = kinds.size() > 1 ? std::min(max_power, cap) : max_power;
    for (auto& r : discovery_curve(limit, cfg.shots, k, cfg, penalty)) results[k][r.power] = std::move(r);
  }

  std::ostringstream csv;
  const std::string mpath = manifest_path_for(out);
  csv << manifest_comment(mpath);
  if (kinds.size() == 1) {
    std::vector<ExperimentReport> rows;
    for (auto& [p, r] : results[kinds[0]]) rows.push_back(r);
    csv << reports_csv(rows);
  } else {
    csv << "power,shots,theoretical_count,hobo_found,hobo_discovery_rate,qubo_found,qubo_discovery_rate\n";
    for (int p = kFirstCurvePower; p <= max_power; ++p) {
      const auto& h = results[ModelKind::hobo].at(p);
      csv << p << ',' << cfg.shots << ',' << h.theoretical.size() << ',' << h.found_primitive.size() << ','
          << format_number(h.discovery_rate) << ',';
      auto q = results[ModelKind::qubo].find(p);
      if (q != results[ModelKind::qubo].end())
        csv << q->second.found_primitive.size() << ',' << format_number(q->second.discovery_rate);
      else
        csv << ',';
      csv << '\n';
    }
  }
  write_text_file(out, csv.str());
  manifest.config = {{"max_power", max_power}, {"model", kind_name}, {"seed", cfg.seed}, {"shots", cfg.shots},
                     {"sweeps_per_shot", cfg.sweeps_per_shot}, {"t_final", cfg.t_final}};
  if (cfg.t_initial) manifest.config["t_initial"] = *cfg.t_initial;
  if (kind_name != "hobo") manifest.config["penalty"] = penalty;
  manifest.outputs = {out};
  manifest.write(mpath);

  for (ModelKind k : kinds)
    for (const auto& [p, r] : results[k])
      std::cout << "power " << p << " model " << to_string(k) << " theoretical " << r.theoretical.size() << " found "
                << r.found_primitive.size() << " discovery_rate " << format_number(r.discovery_rate) << '\n';
  return 0;
}

int cmd_energy(const SourceOptions& src, bool all, const std::string& input, bool float32, const std::string& out,
               Manifest manifest) {
  CompiledModel m = load_source(src, manifest.config);
  std::vector<Bits> rows;
  if (all) {
    if (m.nvars() > 20) throw Error("--all supports at most 20 variables");
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << m.nvars()); ++k)
      rows.push_back(detail::bits_from_index(k, m.nvars()));
  } else {
    if (input.empty()) throw Error("either --all or --input is required");
    std::istringstream in(read_text_file(input));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      rows.push_back(parse_bitstring(line));
    }
  }
  std::vector<double> energies;
  if (float32) {
    for (float f : energy_batch_float32(m, rows)) energies.push_back(f);
  } else {
    energies = energy_batch(m, rows);
  }
  const std::string mpath = manifest_path_for(out);
  write_text_file(out, manifest_comment(mpath) + energy_dump_csv(m, rows, energies));
  manifest.config["precision"] = float32 ? "float32" : "float64";
  manifest.outputs = {out};
  manifest.write(mpath);
  const PrecisionAudit a = precision_audit(m);
  std::cout << "rows " << rows.size() << '\n'
            << "max_abs_coeff " << format_number(a.max_abs_coeff) << '\n'
            << "energy_bound " << format_number(a.energy_bound) << '\n'
            << "float32_safe " << (a.safe_in_float32() ? "true" : "false") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-order binary optimization toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  bool record_time = false;
  app.add_flag("--record-time", record_time, "Add a wall-clock timestamp to run manifests");

  SourceOptions src;
  AnnealOptions ao;
  std::string out;

  auto* compile_cmd = app.add_subcommand("compile", "Compile an expression or preset to a model JSON");
  add_source_options(compile_cmd, src, false);
  compile_cmd->add_option("--out,-o", out, "Output model JSON")->required();

  auto* solve_cmd = app.add_subcommand("solve", "Sample a model and print the lowest-energy rows");
  add_source_options(solve_cmd, src, true);
  add_anneal_options(solve_cmd, ao);
  std::size_t top = 10;
  bool exhaustive = false;
  std::string json_out;
  solve_cmd->add_option("--top", top, "Rows to print")->capture_default_str();
  solve_cmd->add_flag("--exhaustive", exhaustive, "Enumerate all assignments instead of annealing");
  solve_cmd->add_option("--out,-o", out, "Output SampleSet CSV")->required();
  solve_cmd->add_option("--json", json_out, "Also write the SampleSet as JSON");

  auto* pyth_cmd = app.add_subcommand("pythagorean", "Search primitive Pythagorean triples at one power");
  int power = 4;
  std::string kind = "hobo";
  double penalty = kDefaultQuboPenalty;
  std::string dir = ".";
  bool save_samples = false;
  AnnealOptions pyth_ao;
  pyth_ao.shots = 100000;
  pyth_cmd->add_option("--power", power, "Search range 1..2^power")->required()->check(CLI::Range(1, kMaxHoboPower));
  pyth_cmd->add_option("--model", kind, "Formulation")->check(CLI::IsMember({"hobo", "qubo"}))->capture_default_str();
  pyth_cmd->add_option("--penalty", penalty, "QUBO equation penalty weight")->check(CLI::PositiveNumber);
  add_anneal_options(pyth_cmd, pyth_ao);
  pyth_cmd->add_option("--out,-o", dir, "Output directory")->capture_default_str();
  pyth_cmd->add_flag("--save-samples", save_samples, "Also write the full SampleSet CSV");

  auto* curve_cmd = app.add_subcommand("discovery-curve", "Discovery rate for powers 3..max");
  int max_power = 6;
  std::string curve_kind = "hobo";
  std::string curve_out = "discovery_curve.csv";
  AnnealOptions curve_ao;
  curve_ao.shots = 100000;
  curve_cmd->add_option("--max-power", max_power, "Largest power")->required();
  curve_cmd->add_option("--model", curve_kind, "Formulation")
      ->check(CLI::IsMember({"hobo", "qubo", "both"}))
      ->capture_default_str();
  curve_cmd->add_option("--penalty", penalty, "QUBO equation penalty weight")->check(CLI::PositiveNumber);
  add_anneal_options(curve_cmd, curve_ao);
  curve_cmd->add_option("--out,-o", curve_out, "Output CSV")->capture_default_str();

  auto* energy_cmd = app.add_subcommand("energy", "Evaluate energies of given or all assignments");
  add_source_options(energy_cmd, src, true);
  bool all = false;
  bool float32 = false;
  std::string input;
  energy_cmd->add_flag("--all", all, "Enumerate every assignment");
  energy_cmd->add_option("--input", input, "File with one bitstring per line");
  energy_cmd->add_flag("--float32", float32, "Evaluate in single precision");
  energy_cmd->add_option("--out,-o", out, "Output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  Manifest manifest;
  manifest.argv.assign(argv + 1, argv + argc);
  manifest.record_time = record_time;
  try {
    if (*compile_cmd) {
      manifest.command = "compile";
      return cmd_compile(src, out, manifest);
    }
    if (*solve_cmd) {
      manifest.command = "solve";
      return cmd_solve(src, ao, exhaustive, top, out, json_out, manifest);
    }
    if (*pyth_cmd) {
      manifest.command = "pythagorean";
      return cmd_pythagorean(power, kind, penalty, pyth_ao, dir, save_samples, manifest);
    }
    if (*curve_cmd) {
      manifest.command = "discovery-curve";
      return cmd_discovery_curve(max_power, curve_kind, penalty, curve_ao, curve_out, manifest);
    }
    if (*energy_cmd) {
      manifest.command = "energy";
      return cmd_energy(src, all, input, float32, out, manifest);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
