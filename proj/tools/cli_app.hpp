// Copyright 2026 The qgd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file cli_app.hpp
 * @brief The qgd command line, callable in-process for tests.
 *
 * Exit codes: 0 success (a solution was found / the circuit verifies),
 * 1 no solution / verification failed, 2 usage or input error, 3 internal error.
 */
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qgd/qgd.hpp"

namespace qgd::cli {

inline constexpr int kExitSolved = 0;
inline constexpr int kExitNoSolution = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool looks_like_file(const std::string& arg) {
  return arg.ends_with(".json") || std::filesystem::exists(arg);
}

inline std::string file_label(const std::string& path) { return std::filesystem::path(path).stem().string(); }

inline Ancilla parse_ancilla(const std::string& s) {
  const auto colon = s.find(':');
  try {
    std::size_t used = 0;
    Ancilla a;
    a.qubit = std::stoi(s.substr(0, colon), &used);
    if (used != (colon == std::string::npos ? s.size() : colon)) throw std::invalid_argument(s);
    if (colon != std::string::npos) {
      a.init_state = std::stoi(s.substr(colon + 1), &used);
      if (used != s.size() - colon - 1) throw std::invalid_argument(s);
    }
    return a;
  } catch (const std::exception&) {
    throw usage_error("--ancilla expects QUBIT[:STATE], got '" + s + "'");
  }
}

/// Target by name (cz, ccz, cccz, i) or JSON file, extended to n_total qubits.
inline TargetSpec resolve_target(const std::string& arg, int n_total, const std::vector<std::string>& ancilla_args,
                                 std::string& label) {
  std::optional<std::vector<Ancilla>> anc;
  if (!ancilla_args.empty()) {
    anc.emplace();
    for (const auto& a : ancilla_args) anc->push_back(parse_ancilla(a));
  }
  if (looks_like_file(arg)) {
    nlohmann::json j = read_json_file(arg);
    if (!j.contains("n_qubits")) j["n_qubits"] = n_total;
    if (anc && !j.contains("ancillas")) j["ancillas"] = *anc;
    label = file_label(arg);
    TargetSpec spec = target_spec_from_json(j);
    if (spec.n_qubits() != n_total)
      throw usage_error(arg + ": target has " + std::to_string(spec.n_qubits()) + " qubits, register has " +
                        std::to_string(n_total));
    return spec;
  }
  label = arg;
  std::transform(label.begin(), label.end(), label.begin(), [](unsigned char c) { return std::tolower(c); });
  const bool identity = label == "i" || label == "id" || label == "identity";
  const ComplexMatrix gate = named_gate(label, identity ? (std::size_t{1} << n_total) : 2);
  return ancilla_extend(gate, n_total, anc);
}

inline ConnectivityGraph resolve_connectivity(const std::string& arg, std::string& label) {
  if (looks_like_file(arg)) {
    label = file_label(arg);
    return read_json_file(arg).get<ConnectivityGraph>();
  }
  label = arg;
  return connectivity_preset(arg);
}

inline CircuitStructure resolve_structure(const std::string& arg) {
  nlohmann::json j;
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
    try {
      j = nlohmann::json::parse(arg);
    } catch (const nlohmann::json::parse_error& e) {
      throw usage_error(std::string("--structure: ") + e.what());
    }
  } else {
    j = read_json_file(arg);
  }
  if (j.is_array()) return CircuitStructure::from_sequence(j.get<std::vector<Edge>>());
  return j.get<CircuitStructure>();
}

inline CircuitWithAngles load_circuit(const std::string& path) {
  const nlohmann::json j = read_json_file(path);
  try {
    return circuit_from_json(j);
  } catch (const std::exception& e) {
    throw file_format_error(path + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw usage_error(path + ": cannot open for writing");
  out << text;
}

/// Integer option value, letting an environment variable replace the default.
template <class T>
void env_default(T& value, const char* var) {
  if (const char* s = std::getenv(var); s && *s) {
    std::istringstream is(s);
    T v{};
    if (!(is >> v) || !is.eof()) throw usage_error(std::string(var) + " must be an integer, got '" + s + "'");
    value = v;
  }
}

inline std::string format_infidelity(double f) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << 1.0 - f;
  return os.str();
}

// ---------------------------------------------------------------------------

struct DecomposeArgs {
  std::string target, connectivity, out = "results.jsonl", manifest, structure, trace, circuit_out;
  std::vector<std::string> ancillas;
  std::optional<int> cz_count, cz_depth;
  int restarts = 100, workers = 1, escalate_to = -1, max_sweeps = 10000;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> max_structures;
  std::string template_style = "reduced";
  bool full_start = false, all_solutions = false, all_restarts = false, no_dedup = false, resume = false;
  double eps = kConvergenceEps;
};

inline int run_decompose(const DecomposeArgs& a, std::ostream& out) {
  SearchJob job;
  job.graph = resolve_connectivity(a.connectivity, job.connectivity_label);
  job.spec = resolve_target(a.target, job.graph.n_qubits(), a.ancillas, job.target_label);
  if (a.cz_count) job.budget = {BudgetMode::Count, *a.cz_count};
  if (a.cz_depth) job.budget = {BudgetMode::Depth, *a.cz_depth};
  if (!a.structure.empty()) {
    job.fixed_structure = resolve_structure(a.structure);
    const auto& s = *job.fixed_structure;
    job.budget = {s.mode(), s.mode() == BudgetMode::Count ? s.cz_count() : s.cz_depth()};
  }
  job.restarts_per_structure = a.restarts;
  job.templ = {parse_template_style(a.template_style), a.full_start};
  job.optimizer.max_sweeps = a.max_sweeps;
  job.optimizer.convergence_eps = a.eps;
  job.optimizer.record_trace = !a.trace.empty();
  job.workers = a.workers;
  job.base_seed = a.seed;
  job.stop_at_first_solution = !a.all_solutions;
  job.first_hit_per_structure = !a.all_restarts;
  job.dedup = !a.no_dedup;
  job.max_structures = a.max_structures;
  if (job.restarts_per_structure < 1) throw usage_error("--restarts must be at least 1");
  if (job.budget.value < 0) throw usage_error("budget must be non-negative");

  const int max_budget = std::max(job.budget.value, a.escalate_to);
  std::vector<SearchOutcome> rounds;
  std::vector<DecompositionResult> results;
  while (true) {
    const std::string wal =
        a.out + "." + std::string(to_string(job.budget.mode)) + std::to_string(job.budget.value) + ".wal";
    TaskJournal journal(wal, config_hash(job), a.resume);
    if (journal.replayed() > 0) out << "resumed " << journal.replayed() << " finished tasks from " << wal << "\n";
    rounds.push_back(run_search(job, journal.hooks()));
    const auto& r = rounds.back();
    out << to_string(job.budget.mode) << " " << job.budget.value << ": " << r.summary.structures_tried
        << " structures, " << r.summary.tasks_run << " restarts, " << r.summary.converged_tasks << " converged"
        << (r.summary.incomplete ? " (incomplete)" : "") << "\n";
    results.insert(results.end(), r.results.begin(), r.results.end());
    if (r.summary.solved || job.budget.value >= max_budget) break;
    job = escalate(std::move(job));
  }

  write_file(a.out, results_jsonl(results));
  const std::string manifest_path = a.manifest.empty() ? a.out + ".manifest.json" : a.manifest;
  write_file(manifest_path, make_manifest(job, rounds, kVersion).dump(2) + "\n");

  for (const auto& r : results) {
    out << "solution: structure " << r.structure_index << " restart " << r.restart << "  1-F "
        << format_infidelity(r.fidelity) << "  cz_count " << r.cz_count << "  cz_depth " << r.cz_depth << "  ["
        << to_string(check_against_registry(r.target_label, r.connectivity_label, r.cz_count, r.cz_depth))
        << "]\n";
  }
  if (!results.empty() && !a.circuit_out.empty())
    write_file(a.circuit_out, circuit_to_json(results.front().circuit, results.front().angles).dump(2) + "\n");
  if (!a.trace.empty()) {
    const auto& tasks = rounds.back().tasks;
    const TaskOutcome* pick = nullptr;
    for (const auto& t : tasks)
      if (!pick || (t.converged && !pick->converged)) pick = &t;
    std::ofstream tr(a.trace);
    if (!tr) throw usage_error(a.trace + ": cannot open for writing");
    if (pick) write_trace_csv(tr, pick->trace);
  }
  out << "wrote " << results.size() << " result(s) to " << a.out << "\n";
  return results.empty() ? kExitNoSolution : kExitSolved;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string circuit, target;
  std::vector<std::string> ancillas;
  double eps = kConvergenceEps;
};

inline int run_verify(const VerifyArgs& a, std::ostream& out) {
  const auto c = load_circuit(a.circuit);
  if (!c.angles) throw usage_error(a.circuit + ": circuit has no angles");
  std::string label;
  const TargetSpec spec = resolve_target(a.target, c.circuit.n_qubits(), a.ancillas, label);
  const ComplexMatrix v = evaluate(c.circuit, *c.angles);
  const double f = normalized_fidelity(spec, v);
  out << std::setprecision(17) << "fidelity " << f << "\ninfidelity " << infidelity(spec, v) << "\n"
      << "cz_count " << c.circuit.cz_count() << "\ncz_depth " << c.circuit.cz_depth() << "\n";
  const bool ok = 1.0 - f < a.eps;
  out << (ok ? "verified" : "not verified") << "\n";
  return ok ? kExitSolved : kExitNoSolution;
}

// ---------------------------------------------------------------------------

struct PruneArgs {
  std::string circuit, target, out, report;
  std::vector<std::string> ancillas;
  int runs = 10000, workers = 1, verify_restarts = 50, min_uniform_samples = 1000;
  std::uint64_t seed = 0;
  double near_zero_window = 0.01, near_zero_fraction = 0.9, uniform_resultant = 0.2;
};

/// Counts over 8 equal bins of (-pi, pi].
inline std::vector<int> angle_histogram(const std::vector<double>& xs) {
  std::vector<int> h(8, 0);
  for (double x : xs) {
    const double u = (canonical_angle(x) + std::numbers::pi) / (2 * std::numbers::pi);
    ++h[std::clamp(static_cast<int>(u * 8), 0, 7)];
  }
  return h;
}

inline int run_prune(const PruneArgs& a, std::ostream& out) {
  const auto c = load_circuit(a.circuit);
  std::string label;
  const TargetSpec spec = resolve_target(a.target, c.circuit.n_qubits(), a.ancillas, label);
  StatisticsOptions opt;
  opt.runs = a.runs;
  opt.seed = a.seed;
  opt.workers = a.workers;
  opt.near_zero_window = a.near_zero_window;
  PruneThresholds th;
  th.near_zero_window = a.near_zero_window;
  th.near_zero_fraction = a.near_zero_fraction;
  th.uniform_resultant = a.uniform_resultant;
  th.min_uniform_samples = a.min_uniform_samples;
  th.verify_restarts = a.verify_restarts;
  th.stats_runs = a.runs;
  if (a.runs < 1 || a.verify_restarts < 1) throw usage_error("--runs and --verify-restarts must be positive");

  const AngleStatistics stats = collect_angle_statistics(c.circuit, spec, opt);
  out << "runs " << a.runs << ": " << stats.converged_runs << " converged, " << stats.failed_runs << " failed\n";
  if (stats.empty()) {
    out << "no converged runs; nothing to prune\n";
    return kExitNoSolution;
  }

  std::ofstream report;
  if (!a.report.empty()) {
    report.open(a.report, std::ios::trunc);
    if (!report) throw usage_error(a.report + ": cannot open for writing");
  }
  out << "param axis qubit samples mean resultant near_zero histogram\n";
  std::vector<const Rotation*> rot(c.circuit.rotation_count());
  for (const auto& e : c.circuit.elements())
    if (const auto* r = std::get_if<Rotation>(&e)) rot[r->param] = r;
  for (int p = 0; p < stats.parameter_count(); ++p) {
    const auto hist = angle_histogram(stats.samples[p]);
    out << std::fixed << std::setprecision(4) << p << " " << to_string(rot[p]->axis) << " " << rot[p]->target
        << " " << stats.samples[p].size() << " " << stats.circular_mean[p] << " " << stats.resultant_length[p]
        << " " << stats.fraction_near_zero[p];
    for (int h : hist) out << " " << h;
    out << "\n" << std::defaultfloat;
    if (report.is_open())
      report << nlohmann::json{{"param", p},
                               {"axis", std::string(to_string(rot[p]->axis))},
                               {"qubit", rot[p]->target},
                               {"samples", stats.samples[p].size()},
                               {"circular_mean", stats.circular_mean[p]},
                               {"resultant_length", stats.resultant_length[p]},
                               {"fraction_near_zero", stats.fraction_near_zero[p]},
                               {"histogram", hist}}
                    .dump()
             << "\n";
  }

  const PruneResult pr = prune(c.circuit, spec, stats, th, opt);
  if (pr.removed.empty()) {
    out << "no removable gates\n";
  } else {
    out << "removed params (input numbering):";
    for (int p : pr.removed) out << " " << p;
    out << "\nrotations " << c.circuit.rotation_count() << " -> " << pr.circuit.rotation_count() << "\n";
  }
  const double f = normalized_fidelity(spec, evaluate(pr.circuit, pr.angles));
  out << "fidelity 1-F " << format_infidelity(f) << "\n";
  const std::string json = circuit_to_json(pr.circuit, pr.angles).dump(2) + "\n";
  if (a.out.empty())
    out << json;
  else
    write_file(a.out, json);
  return 1.0 - f < kConvergenceEps ? kExitSolved : kExitNoSolution;
}

// ---------------------------------------------------------------------------

inline int run_registry(const std::string& check, std::ostream& out) {
  out << "target connectivity cz_count cz_depth source\n";
  for (const auto& r : known_records())
    out << r.target << " " << r.connectivity << " " << r.cz_count << " "
        << (r.cz_depth ? std::to_string(*r.cz_depth) : "-") << " " << r.source << "\n";
  if (check.empty()) return kExitSolved;
  out << "\ncheck " << check << "\n";
  for (const auto& res : read_results(check)) {
    out << res.target_label << " " << res.connectivity_label << " count " << res.cz_count << " depth "
        << res.cz_depth << ": "
        << to_string(check_against_registry(res.target_label, res.connectivity_label, res.cz_count, res.cz_depth))
        << "\n";
  }
  return kExitSolved;
}

inline void print_version(std::ostream& out) {
  out << "qgd " << kVersion << "\n";
  nlohmann::json m{{"version", kVersion},
                   {"cxx", __cplusplus},
                   {"connectivity_presets", connectivity_preset_names()},
                   {"targets", {"cz", "ccz", "cccz", "i"}},
                   {"convergence_eps", kConvergenceEps}};
  out << m.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Decompose multi-qubit gates into CZ and single-qubit rotations", "qgd"};
  app.require_subcommand(0, 1);
  bool version = false;
  app.add_flag("--version", version, "Print version and build manifest");

  DecomposeArgs d;
  try {
    env_default(d.workers, "QGD_WORKERS");
    env_default(d.seed, "QGD_SEED");
  } catch (const usage_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  auto* dec = app.add_subcommand("decompose", "Search CZ structures for a decomposition");
  dec->add_option("--target", d.target, "Target gate name (cz, ccz, cccz) or JSON file")->required();
  dec->add_option("--connectivity", d.connectivity, "Connectivity preset or JSON file")->required();
  auto* cnt = dec->add_option("--cz-count", d.cz_count, "CZ-count budget");
  auto* dep = dec->add_option("--cz-depth", d.cz_depth, "CZ-depth budget");
  auto* st = dec->add_option("--structure", d.structure, "Optimize only this structure (JSON file or inline JSON)");
  cnt->excludes(dep)->excludes(st);
  dep->excludes(st);
  dec->add_option("--ancilla", d.ancillas, "Ancilla qubit as QUBIT[:STATE] (repeatable)");
  dec->add_option("--restarts", d.restarts, "Restarts per structure")->capture_default_str();
  dec->add_option("--seed", d.seed, "Base seed (env QGD_SEED)")->capture_default_str();
  dec->add_option("--workers", d.workers, "Worker threads (env QGD_WORKERS)")->capture_default_str();
  dec->add_option("--out", d.out, "Result file (JSON lines)")->capture_default_str();
  dec->add_option("--manifest", d.manifest, "Manifest file (default: <out>.manifest.json)");
  dec->add_option("--escalate-to", d.escalate_to, "Raise the budget up to this value until a solution appears");
  dec->add_option("--max-structures", d.max_structures, "Stop after this many structures per budget");
  dec->add_option("--template", d.template_style, "Rotation template: reduced or full")->capture_default_str();
  dec->add_flag("--full-start", d.full_start, "Full Z-X-Z layer before each wire's first CZ");
  dec->add_option("--max-sweeps", d.max_sweeps, "Sweep limit per restart")->capture_default_str();
  dec->add_option("--eps", d.eps, "Convergence threshold on 1 - fidelity")->capture_default_str();
  dec->add_flag("--all-solutions", d.all_solutions, "Keep searching after the first solving structure");
  dec->add_flag("--all-restarts", d.all_restarts, "Run every restart even after one converges");
  dec->add_flag("--no-dedup", d.no_dedup, "Enumerate symmetric duplicates too");
  dec->add_flag("--resume", d.resume, "Replay finished tasks from <out>.<budget>.wal");
  dec->add_option("--trace", d.trace, "Write the per-update objective trace (CSV) of one restart");
  dec->add_option("--circuit-out", d.circuit_out, "Write the first solution as a circuit JSON file");

  VerifyArgs v;
  auto* ver = app.add_subcommand("verify", "Check a circuit with angles against a target");
  ver->add_option("--circuit", v.circuit, "Circuit JSON file")->required();
  ver->add_option("--target", v.target, "Target gate name or JSON file")->required();
  ver->add_option("--ancilla", v.ancillas, "Ancilla qubit as QUBIT[:STATE] (repeatable)");
  ver->add_option("--eps", v.eps, "Threshold on 1 - fidelity")->capture_default_str();

  PruneArgs p;
  p.workers = d.workers;
  p.seed = d.seed;
  auto* pru = app.add_subcommand("prune", "Remove rotations that angle statistics show to be unnecessary");
  pru->add_option("--circuit", p.circuit, "Circuit JSON file")->required();
  pru->add_option("--target", p.target, "Target gate name or JSON file")->required();
  pru->add_option("--ancilla", p.ancillas, "Ancilla qubit as QUBIT[:STATE] (repeatable)");
  pru->add_option("--runs", p.runs, "Optimization runs for the statistics")->capture_default_str();
  pru->add_option("--seed", p.seed, "Base seed (env QGD_SEED)")->capture_default_str();
  pru->add_option("--workers", p.workers, "Worker threads (env QGD_WORKERS)")->capture_default_str();
  pru->add_option("--verify-restarts", p.verify_restarts, "Restarts to confirm each removal")->capture_default_str();
  pru->add_option("--near-zero-window", p.near_zero_window, "Radians counted as near zero")->capture_default_str();
  pru->add_option("--near-zero-fraction", p.near_zero_fraction, "Fraction of runs near zero")->capture_default_str();
  pru->add_option("--uniform-resultant", p.uniform_resultant, "Resultant length below which angles count as spread")
      ->capture_default_str();
  pru->add_option("--min-uniform-samples", p.min_uniform_samples, "Samples needed for the spread test")
      ->capture_default_str();
  pru->add_option("--out", p.out, "Reduced circuit file (default: stdout)");
  pru->add_option("--report", p.report, "Per-rotation statistics as JSON lines");

  std::string check;
  auto* reg = app.add_subcommand("registry", "List best known records, optionally checking results");
  reg->add_option("--check", check, "Result file to compare against the registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSolved : kExitUsage;
  }

  try {
    if (version) {
      print_version(out);
      return kExitSolved;
    }
    if (dec->parsed()) {
      if (!d.cz_count && !d.cz_depth && d.structure.empty())
        throw usage_error("decompose needs --cz-count, --cz-depth or --structure");
      return run_decompose(d, out);
    }
    if (ver->parsed()) return run_verify(v, out);
    if (pru->parsed()) return run_prune(p, out);
    if (reg->parsed()) return run_registry(check, out);
    out << app.help();
    return kExitUsage;
  } catch (const internal_error& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    // Bad input of any kind (files, flags, dimensions) is a usage error.
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace qgd::cli
