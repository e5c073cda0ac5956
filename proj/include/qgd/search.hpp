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
 * @file search.hpp
 * @brief Restarted optimization over enumerated structures, and angle-statistics pruning.
 *
 * Every (structure index, restart index) pair is an independent task whose seed
 * is derived from the pair and the job's base seed, so results never depend on
 * the number of workers or the order in which tasks finish.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <climits>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qgd/circuit.hpp"
#include "qgd/enumerate.hpp"
#include "qgd/objective.hpp"
#include "qgd/structure.hpp"
#include "qgd/sweep.hpp"

namespace qgd {

// ---------------------------------------------------------------------------
// Seeds and task scheduling

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t task_seed(std::uint64_t base, std::uint64_t structure,
                                         std::uint64_t restart) noexcept {
  return splitmix64(splitmix64(splitmix64(base) ^ structure) ^ (restart * 0xd1b54a32d192ed03ULL));
}

namespace detail {

/// Run fn(i) for i in [0, n) on `workers` threads pulling from a shared counter.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
  };
  if (workers == 1) return body();
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
}

template <class T>
void atomic_min(std::atomic<T>& a, T v) {
  T cur = a.load();
  while (v < cur && !a.compare_exchange_weak(cur, v)) {
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Jobs and results

struct Budget {
  BudgetMode mode = BudgetMode::Count;
  int value = 0;

  friend bool operator==(const Budget&, const Budget&) = default;
};

struct SearchJob {
  TargetSpec spec;
  std::string target_label = "custom";
  ConnectivityGraph graph;
  std::string connectivity_label = "custom";
  Budget budget;
  int restarts_per_structure = 100;
  TemplateOptions templ;
  OptimizerConfig optimizer;
  int workers = 1;
  std::uint64_t base_seed = 0;
  /// Stop after the first structure (in enumeration order) that converges.
  bool stop_at_first_solution = true;
  /// Stop restarting a structure once one restart converges.
  bool first_hit_per_structure = true;
  bool dedup = true;
  /// Optimize exactly this structure instead of enumerating.
  std::optional<CircuitStructure> fixed_structure;
  /// Cap on enumerated structures; hitting it marks the summary incomplete.
  std::optional<std::uint64_t> max_structures;
  /// Structures handed to the worker pool at a time.
  int batch_structures = 16;
};

struct DecompositionResult {
  std::string target_label;
  std::string connectivity_label;
  std::uint64_t structure_index = 0;
  int restart = 0;
  std::uint64_t seed = 0;
  CircuitStructure structure;
  ParameterizedCircuit circuit;
  AngleVector angles;
  double fidelity = 0.0;
  double infidelity = 0.0;
  int cz_count = 0;
  int cz_depth = 0;
  int sweeps = 0;
};

/// One finished (structure, restart) task.
struct TaskOutcome {
  std::uint64_t structure_index = 0;
  int restart = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  double fidelity = 0.0;
  int sweeps = 0;
  AngleVector angles;
  std::vector<double> trace;
};

struct SearchSummary {
  Budget budget;
  std::uint64_t structures_tried = 0;
  std::uint64_t tasks_run = 0;
  std::uint64_t converged_tasks = 0;
  /// Counts of final 1 - fidelity per decade bucket.
  std::map<std::string, std::uint64_t> histogram;
  bool solved = false;
  bool incomplete = false;
};

struct SearchOutcome {
  std::vector<DecompositionResult> results;
  SearchSummary summary;
  /// Counted tasks in canonical order (for diagnostics and traces).
  std::vector<TaskOutcome> tasks;
};

inline std::string infidelity_bucket(double one_minus_f, double eps) {
  if (one_minus_f < eps) return "converged";
  if (one_minus_f < 1e-6) return "1e-10..1e-6";
  if (one_minus_f < 1e-3) return "1e-6..1e-3";
  if (one_minus_f < 1e-1) return "1e-3..1e-1";
  return ">=1e-1";
}

/// Hooks for durability and streaming; all optional.
struct SearchHooks {
  /// Previously completed task, if any (resume support).
  std::function<std::optional<TaskOutcome>(std::uint64_t structure, int restart)> lookup;
  /// Called from worker threads as soon as a task finishes; must be thread-safe.
  std::function<void(const TaskOutcome&)> on_task;
  /// Called in canonical order for each emitted result.
  std::function<void(const DecompositionResult&)> on_result;
};

/// Rebuild and re-verify a converged task from scratch; nullopt if it fails.
inline std::optional<DecompositionResult> verify_task(const SearchJob& job, const CircuitStructure& s,
                                                      const ParameterizedCircuit& circuit,
                                                      const TaskOutcome& t) {
  DecompositionResult r;
  r.target_label = job.target_label;
  r.connectivity_label = job.connectivity_label;
  r.structure_index = t.structure_index;
  r.restart = t.restart;
  r.seed = t.seed;
  r.structure = s;
  r.circuit = circuit;
  r.angles = canonical_angles(t.angles);
  const ComplexMatrix v = evaluate(circuit, r.angles);
  r.fidelity = normalized_fidelity(job.spec, v);
  r.infidelity = infidelity(job.spec, v);
  r.cz_count = circuit.cz_count();
  r.cz_depth = circuit.cz_depth();
  r.sweeps = t.sweeps;
  if (!(1.0 - r.fidelity < job.optimizer.convergence_eps)) return std::nullopt;
  return r;
}

inline SearchOutcome run_search(const SearchJob& job, const SearchHooks& hooks = {}) {
  if (job.restarts_per_structure < 1) throw std::invalid_argument("search: restarts must be >= 1");
  if (job.graph.n_qubits() != job.spec.n_qubits())
    throw std::invalid_argument("search: connectivity has " + std::to_string(job.graph.n_qubits()) +
                                " qubits, target has " + std::to_string(job.spec.n_qubits()));
  if (job.fixed_structure) job.fixed_structure->validate(job.graph);

  SearchOutcome out;
  out.summary.budget = job.budget;
  const CompiledTarget target(job.spec);
  const SymmetryGroup group =
      job.dedup ? symmetry_group(job.graph, job.spec) : SymmetryGroup::trivial(job.graph.n_qubits());
  StructureEnumerator en(job.graph, job.budget.mode, job.budget.value, group);
  bool fixed_pending = job.fixed_structure.has_value();
  std::uint64_t next_index = 0;
  const int restarts = job.restarts_per_structure;

  auto pull = [&]() -> std::optional<CircuitStructure> {
    if (job.fixed_structure) {
      if (!fixed_pending) return std::nullopt;
      fixed_pending = false;
      return job.fixed_structure;
    }
    return en.next();
  };

  while (true) {
    struct Item {
      std::uint64_t index;
      CircuitStructure structure;
      ParameterizedCircuit circuit;
      CompiledCircuit compiled;
    };
    std::vector<Item> batch;
    while (static_cast<int>(batch.size()) < std::max(1, job.batch_structures)) {
      if (job.max_structures && next_index >= *job.max_structures) break;
      auto s = pull();
      if (!s) break;
      auto circuit = apply_template(job.graph.n_qubits(), *s, job.templ);
      CompiledCircuit compiled(circuit);
      batch.push_back({next_index++, std::move(*s), std::move(circuit), std::move(compiled)});
    }
    if (batch.empty()) {
      if (job.max_structures && next_index >= *job.max_structures) {
        if (job.fixed_structure ? fixed_pending : true) out.summary.incomplete = true;
      }
      break;
    }

    const std::size_t n_tasks = batch.size() * restarts;
    std::vector<std::optional<TaskOutcome>> slots(n_tasks);
    std::vector<std::atomic<int>> first_conv(batch.size());
    for (auto& f : first_conv) f.store(INT_MAX);
    std::atomic<std::size_t> first_solved{SIZE_MAX};

    detail::parallel_for(n_tasks, job.workers, [&](std::size_t i) {
      const std::size_t b = i / restarts;
      const int r = static_cast<int>(i % restarts);
      if (job.first_hit_per_structure && first_conv[b].load() < r) return;
      if (job.stop_at_first_solution && first_solved.load() < b) return;
      const auto& item = batch[b];
      std::optional<TaskOutcome> done;
      if (hooks.lookup) done = hooks.lookup(item.index, r);
      if (!done) {
        OptimizerConfig cfg = job.optimizer;
        cfg.rng_seed = task_seed(job.base_seed, item.index, r);
        auto res = optimize(item.compiled, target, cfg);
        TaskOutcome t;
        t.structure_index = item.index;
        t.restart = r;
        t.seed = cfg.rng_seed;
        t.converged = res.converged;
        t.fidelity = res.fidelity;
        t.sweeps = res.sweeps;
        t.angles = std::move(res.angles);
        t.trace = std::move(res.trace);
        if (t.converged && !verify_task(job, item.structure, item.circuit, t)) t.converged = false;
        if (hooks.on_task) hooks.on_task(t);
        done = std::move(t);
      }
      if (done->converged) {
        detail::atomic_min(first_conv[b], r);
        detail::atomic_min(first_solved, b);
      }
      slots[i] = std::move(done);
    });

    // Keep exactly the tasks every schedule is guaranteed to have run.
    bool solved = false;
    for (std::size_t b = 0; b < batch.size() && !solved; ++b) {
      const int hit = first_conv[b].load();
      ++out.summary.structures_tried;
      for (int r = 0; r < restarts; ++r) {
        if (job.first_hit_per_structure && r > hit) break;
        auto& t = slots[b * restarts + r];
        if (!t) throw internal_error("search: required task was skipped");
        ++out.summary.tasks_run;
        ++out.summary.histogram[infidelity_bucket(1.0 - t->fidelity, job.optimizer.convergence_eps)];
        if (t->converged) {
          ++out.summary.converged_tasks;
          auto res = verify_task(job, batch[b].structure, batch[b].circuit, *t);
          if (!res) throw internal_error("search: converged task failed re-verification");
          if (hooks.on_result) hooks.on_result(*res);
          out.results.push_back(std::move(*res));
        }
        out.tasks.push_back(std::move(*t));
      }
      if (hit != INT_MAX) {
        out.summary.solved = true;
        solved = job.stop_at_first_solution;
      }
    }
    if (solved) break;
  }
  return out;
}

/// Same job with the budget raised by one.
inline SearchJob escalate(SearchJob job) {
  ++job.budget.value;
  return job;
}

/// Run searches from the job's budget up to max_budget until one succeeds.
inline std::vector<SearchOutcome> search_with_escalation(SearchJob job, int max_budget,
                                                         const SearchHooks& hooks = {}) {
  std::vector<SearchOutcome> rounds;
  while (job.budget.value <= max_budget) {
    rounds.push_back(run_search(job, hooks));
    if (rounds.back().summary.solved) break;
    job = escalate(std::move(job));
  }
  return rounds;
}

// ---------------------------------------------------------------------------
// Angle statistics and pruning

struct AngleStatistics {
  int converged_runs = 0;
  int failed_runs = 0;
  /// samples[p] holds canonical angles of parameter p over converged runs.
  std::vector<std::vector<double>> samples;
  std::vector<double> circular_mean;
  std::vector<double> resultant_length;
  std::vector<double> fraction_near_zero;
  /// Angles of the first converged run (by run index).
  AngleVector reference_angles;

  bool empty() const noexcept { return converged_runs == 0; }
  int parameter_count() const noexcept { return static_cast<int>(samples.size()); }
};

/// Fill the per-parameter summaries from `samples`.
inline void summarize(AngleStatistics& s, double near_zero_window) {
  const int k = s.parameter_count();
  s.circular_mean.assign(k, 0.0);
  s.resultant_length.assign(k, 0.0);
  s.fraction_near_zero.assign(k, 0.0);
  for (int p = 0; p < k; ++p) {
    const auto& xs = s.samples[p];
    if (xs.empty()) continue;
    double c = 0.0, sn = 0.0;
    int near = 0;
    for (double x : xs) {
      c += std::cos(x);
      sn += std::sin(x);
      near += std::abs(canonical_angle(x)) < near_zero_window;
    }
    const double n = static_cast<double>(xs.size());
    s.circular_mean[p] = std::atan2(sn, c);
    s.resultant_length[p] = std::hypot(c, sn) / n;
    s.fraction_near_zero[p] = near / n;
  }
}

struct StatisticsOptions {
  int runs = 10000;
  std::uint64_t seed = 0;
  int workers = 1;
  double near_zero_window = 0.01;
  OptimizerConfig optimizer;
};

inline AngleStatistics collect_angle_statistics(const ParameterizedCircuit& circuit, const TargetSpec& spec,
                                                const StatisticsOptions& opt) {
  if (circuit.n_qubits() != spec.n_qubits())
    throw std::invalid_argument("statistics: circuit and target qubit counts differ");
  const CompiledCircuit cc(circuit);
  const CompiledTarget tgt(spec);
  std::vector<std::optional<AngleVector>> runs(opt.runs);
  detail::parallel_for(runs.size(), opt.workers, [&](std::size_t i) {
    OptimizerConfig cfg = opt.optimizer;
    cfg.rng_seed = task_seed(opt.seed, 0, i);
    auto res = optimize(cc, tgt, cfg);
    if (res.converged) runs[i] = canonical_angles(res.angles);
  });
  AngleStatistics s;
  s.samples.resize(circuit.rotation_count());
  for (auto& r : runs) {
    if (!r) {
      ++s.failed_runs;
      continue;
    }
    if (s.converged_runs++ == 0) s.reference_angles = *r;
    for (int p = 0; p < circuit.rotation_count(); ++p) s.samples[p].push_back((*r)[p]);
  }
  summarize(s, opt.near_zero_window);
  return s;
}

struct PruneThresholds {
  double near_zero_window = 0.01;
  /// "Often near zero": more than this fraction of converged runs.
  double near_zero_fraction = 0.9;
  /// "Almost evenly distributed": resultant length below this ...
  double uniform_resultant = 0.2;
  /// ... over at least this many samples.
  int min_uniform_samples = 1000;
  /// Restarts used to confirm that a reduced circuit still converges.
  int verify_restarts = 50;
  /// Runs used to re-collect statistics after each removal.
  int stats_runs = 10000;
};

struct PruneCandidate {
  int param;
  double fraction_near_zero;
  double resultant_length;
};

/// Removal candidates ranked by near-zero fraction, then dispersion.
inline std::vector<PruneCandidate> prune_candidates(const AngleStatistics& s, const PruneThresholds& th) {
  std::vector<PruneCandidate> out;
  for (int p = 0; p < s.parameter_count(); ++p) {
    const bool near_zero = s.fraction_near_zero[p] > th.near_zero_fraction;
    const bool uniform = static_cast<int>(s.samples[p].size()) >= th.min_uniform_samples &&
                         s.resultant_length[p] < th.uniform_resultant;
    if (near_zero || uniform) out.push_back({p, s.fraction_near_zero[p], s.resultant_length[p]});
  }
  std::stable_sort(out.begin(), out.end(), [](const PruneCandidate& a, const PruneCandidate& b) {
    if (a.fraction_near_zero != b.fraction_near_zero) return a.fraction_near_zero > b.fraction_near_zero;
    return (1.0 - a.resultant_length) > (1.0 - b.resultant_length);
  });
  return out;
}

struct PruneResult {
  ParameterizedCircuit circuit;
  AngleVector angles;
  /// Parameter ids (in the input circuit's numbering) that were removed, in order.
  std::vector<int> removed;
  /// Statistics of the final circuit.
  AngleStatistics final_statistics;
  bool converged = false;
};

/// Pin removable rotations to zero one at a time, keeping a removal only if
/// the reduced circuit re-converges; repeat until nothing more can go.
inline PruneResult prune(const ParameterizedCircuit& circuit, const TargetSpec& spec, AngleStatistics stats,
                         const PruneThresholds& th, const StatisticsOptions& opt) {
  PruneResult out;
  out.circuit = circuit;
  out.final_statistics = stats;
  if (stats.empty()) return out;
  out.angles = stats.reference_angles;
  out.converged = true;

  std::vector<int> original(circuit.rotation_count());
  std::iota(original.begin(), original.end(), 0);
  const CompiledTarget tgt(spec);
  std::uint64_t round = 0;

  while (true) {
    bool removed = false;
    for (const auto& cand : prune_candidates(stats, th)) {
      ParameterizedCircuit reduced = out.circuit.without_parameter(cand.param);
      const CompiledCircuit cc(reduced);
      std::vector<std::optional<AngleVector>> hits(th.verify_restarts);
      detail::parallel_for(hits.size(), opt.workers, [&](std::size_t i) {
        OptimizerConfig cfg = opt.optimizer;
        cfg.rng_seed = task_seed(opt.seed ^ 0x5bd1e995ULL, round, i);
        auto res = optimize(cc, tgt, cfg);
        if (res.converged) hits[i] = res.angles;
      });
      auto hit = std::find_if(hits.begin(), hits.end(), [](const auto& h) { return h.has_value(); });
      ++round;
      if (hit == hits.end()) continue;

      out.removed.push_back(original[cand.param]);
      original.erase(original.begin() + cand.param);
      out.circuit = std::move(reduced);
      out.angles = canonical_angles(**hit);
      StatisticsOptions next = opt;
      next.runs = th.stats_runs;
      next.seed = task_seed(opt.seed, out.removed.size(), 0);
      stats = collect_angle_statistics(out.circuit, spec, next);
      removed = true;
      break;
    }
    if (!removed || stats.empty()) break;
  }
  out.final_statistics = stats;
  return out;
}

}  // namespace qgd
