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
 * @file sweep.hpp
 * @brief Sequential closed-form rotation-angle optimizer.
 *
 * Splitting V = V' R_k(t_k) V'' and cycling the trace gives
 *
 *     |tr(V_T^dag V P)|^2 = |tr(R_k(t_k) M)|^2,   M = V'' P V_T^dag V'.
 *
 * Because A^2 = I, R_k(t_k + x) = R_k(t_k) cos(x/2) + R_k(t_k + pi) sin(x/2), so
 * with t0 = tr(R_k(t_k) M) and tpi = tr(R_k(t_k + pi) M) the objective along the
 * k-th coordinate is a cos x + b sin x + c with
 *
 *     a = (|t0|^2 - |tpi|^2) / 2,  b = Re(t0 conj(tpi)),  c = (|t0|^2 + |tpi|^2) / 2,
 *
 * maximized at x = atan2(b, a) with value c + hypot(a, b). M is carried between
 * neighbouring rotations by absorbing one rotation and one fixed block on each
 * side, and rotations are visited in the zigzag order K-1 -> 0 -> K-1 -> ...
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "qgd/circuit.hpp"
#include "qgd/objective.hpp"

namespace qgd {

struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

enum class SweepOrder { Zigzag, Shuffled };

struct OptimizerConfig {
  int max_sweeps = 10000;
  /// Success when 1 - objective / D^2 drops below this.
  double convergence_eps = kConvergenceEps;
  /// Stop when a full sweep gains less than stall_eps * D^2 ...
  double stall_eps = 1e-14;
  /// ... this many sweeps in a row.
  int stall_sweeps = 3;
  /// Also stop when 1 - fidelity has not fallen below plateau_ratio times its
  /// value plateau_window sweeps earlier (0 disables).
  int plateau_window = 200;
  double plateau_ratio = 0.99;
  std::uint64_t rng_seed = 0;
  SweepOrder order = SweepOrder::Zigzag;
  /// Rebuild the cached M from scratch every this many sweeps.
  int rebuild_interval = 8;
  /// After reaching convergence_eps keep sweeping (at most this many sweeps)
  /// until 1 - fidelity < polish_factor * convergence_eps, so solutions
  /// re-verify with margin.
  int polish_sweeps = 20;
  double polish_factor = 1e-3;
  bool record_trace = false;
};

/// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct UpdateOutcome {
  /// Offset added to the angle at the cursor.
  double offset = 0.0;
  double objective = 0.0;
  cplx t0, tpi;
};

class SweepState {
 public:
  enum class Direction { Down, Up };

  /// Cursor starts at the last-applied rotation, moving down. The circuit and
  /// target must outlive the state.
  SweepState(const CompiledCircuit& circuit, const CompiledTarget& target, AngleVector angles)
      : cc_(circuit), tgt_(target), angles_(std::move(angles)) {
    if (cc_.n_qubits != tgt_.n_qubits)
      throw std::invalid_argument("sweep: circuit and target qubit counts differ");
    if (static_cast<int>(angles_.size()) != cc_.size())
      throw std::invalid_argument("sweep: angle count does not match circuit");
    if (cc_.size() == 0) throw std::invalid_argument("sweep: circuit has no rotations");
    cursor_ = cc_.size() - 1;
    rebuild();
  }

  int cursor() const noexcept { return cursor_; }
  Direction direction() const noexcept { return dir_; }
  double objective() const noexcept { return objective_; }
  const AngleVector& angles() const noexcept { return angles_; }
  const ComplexMatrix& cache() const noexcept { return m_; }
  int rotation_count() const noexcept { return cc_.size(); }

  /// Cursor moves in one zigzag period.
  int period() const noexcept { return cc_.size() == 1 ? 1 : 2 * cc_.size() - 2; }

  /// M for the current cursor computed from scratch: V'' Q V'.
  ComplexMatrix naive_cache() const {
    ComplexMatrix m = tgt_.q;
    cc_.apply_segment_left(m, angles_, 0, cursor_, true);
    const int k = cc_.size();
    cc_.blocks[k].right(m);
    for (int j = k - 1; j > cursor_; --j) {
      const auto& r = cc_.rotations[j];
      apply_right(m, cc_.n_qubits, r.qubit, rotation_entries(r.axis, angles_[r.param]));
      cc_.blocks[j].right(m);
    }
    return m;
  }

  /// Recompute M and the objective from scratch (drift control).
  void rebuild() {
    m_ = naive_cache();
    const auto& r = cc_.rotations[cursor_];
    const Gate2 block = qubit_block(m_, cc_.n_qubits, r.qubit);
    objective_ = std::norm(trace_with_block(rotation_entries(r.axis, angles_[r.param]), block));
  }

  /// Throws internal_error if the cached M disagrees with a fresh computation.
  void check_cache(double tol = 1e-9) const {
    if (max_abs_diff(m_, naive_cache()) > tol) throw internal_error("sweep: cached M is inconsistent");
  }

  /// Closed-form optimum of the rotation at the cursor.
  UpdateOutcome angle_update() {
    const auto& r = cc_.rotations[cursor_];
    double& theta = angles_[r.param];
    const Gate2 block = qubit_block(m_, cc_.n_qubits, r.qubit);
    UpdateOutcome out;
    out.t0 = trace_with_block(rotation_entries(r.axis, theta), block);
    out.tpi = trace_with_block(rotation_entries(r.axis, theta + std::numbers::pi), block);
    const double n0 = std::norm(out.t0), npi = std::norm(out.tpi);
    const double a = 0.5 * (n0 - npi);
    const double b = (out.t0 * std::conj(out.tpi)).real();
    const double c = 0.5 * (n0 + npi);
    const double amp = std::hypot(a, b);
    // Flat direction: every angle is optimal, keep the current one.
    if (amp <= 1e-14 * c || amp == 0.0) {
      out.objective = n0;
    } else {
      out.offset = std::atan2(b, a);
      out.objective = c + amp;
      theta += out.offset;
    }
    objective_ = out.objective;
    return out;
  }

  /// Step the cursor along the zigzag, carrying M across the boundary.
  void advance_cursor() {
    const int k = cc_.size();
    if (k == 1) return;  // M does not depend on the only angle
    if (dir_ == Direction::Down && cursor_ == 0) dir_ = Direction::Up;
    if (dir_ == Direction::Up && cursor_ == k - 1) dir_ = Direction::Down;
    if (dir_ == Direction::Down)
      step_down();
    else
      step_up();
  }

  /// Move the cursor to an arbitrary rotation, rebuilding M from scratch.
  void jump_to(int j) {
    if (j < 0 || j >= cc_.size()) throw std::invalid_argument("sweep: cursor out of range");
    cursor_ = j;
    rebuild();
  }

 private:
  Gate2 rot(int j, double sign) const {
    const auto& r = cc_.rotations[j];
    return rotation_entries(r.axis, sign * angles_[r.param]);
  }

  // M_{j-1} = R_{j-1}(-t) B_j^-1 M_j R_j(t_j) B_j
  void step_down() {
    const int j = cursor_;
    const int n = cc_.n_qubits;
    cc_.blocks[j].left_inverse(m_);
    apply_left(m_, n, cc_.rotations[j - 1].qubit, rot(j - 1, -1.0));
    apply_right(m_, n, cc_.rotations[j].qubit, rot(j, 1.0));
    cc_.blocks[j].right(m_);
    cursor_ = j - 1;
  }

  // M_{j+1} = B_{j+1} R_j(t_j) M_j B_{j+1}^-1 R_{j+1}(-t)
  void step_up() {
    const int j = cursor_;
    const int n = cc_.n_qubits;
    apply_left(m_, n, cc_.rotations[j].qubit, rot(j, 1.0));
    cc_.blocks[j + 1].left(m_);
    cc_.blocks[j + 1].right_inverse(m_);
    apply_right(m_, n, cc_.rotations[j + 1].qubit, rot(j + 1, -1.0));
    cursor_ = j + 1;
  }

  const CompiledCircuit& cc_;
  const CompiledTarget& tgt_;
  AngleVector angles_;
  ComplexMatrix m_;
  int cursor_ = 0;
  Direction dir_ = Direction::Down;
  double objective_ = 0.0;
};

struct OptimizeResult {
  AngleVector angles;
  /// objective / D^2 as tracked by the optimizer.
  double fidelity = 0.0;
  double objective = 0.0;
  int sweeps = 0;
  long updates = 0;
  bool converged = false;
  /// Objective at the end of each sweep (only with record_trace).
  std::vector<double> trace;
};

inline AngleVector random_angles(int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AngleVector v(k);
  for (auto& t : v) t = 2.0 * std::numbers::pi * uniform01(rng);
  return v;
}

/// Optimize from explicit starting angles.
inline OptimizeResult optimize_from(const CompiledCircuit& cc, const CompiledTarget& tgt,
                                    AngleVector start, const OptimizerConfig& cfg) {
  OptimizeResult res;
  const double dmax = tgt.max_objective();
  if (cc.size() == 0) {
    ComplexMatrix v = evaluate(cc, start);
    res.objective = std::norm((v * tgt.q).trace());
    res.fidelity = res.objective / dmax;
    res.converged = 1.0 - res.fidelity < cfg.convergence_eps;
    res.angles = std::move(start);
    return res;
  }

  SweepState st(cc, tgt, std::move(start));
  const int period = st.period();
  std::mt19937_64 order_rng(cfg.rng_seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<int> perm(cc.size());
  int stalled = 0;
  double prev = st.objective();
  std::vector<double> gaps{1.0 - prev / dmax};

  auto done = [&](double obj) { return 1.0 - obj / dmax < cfg.convergence_eps; };
  res.converged = done(prev);

  int polish_left = cfg.polish_sweeps;
  auto polished = [&](double obj) { return 1.0 - obj / dmax < cfg.polish_factor * cfg.convergence_eps; };

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    if (res.converged && (polish_left-- <= 0 || polished(st.objective()))) break;
    res.sweeps = sweep;
    if (cfg.order == SweepOrder::Zigzag) {
      if (sweep > 1 && (sweep - 1) % cfg.rebuild_interval == 0) st.rebuild();
      for (int u = 0; u < period; ++u) {
        const auto out = st.angle_update();
        ++res.updates;
        st.advance_cursor();
        if (!res.converged && done(out.objective)) {
          res.converged = true;
          break;
        }
      }
    } else {
      for (int i = 0; i < cc.size(); ++i) perm[i] = i;
      for (int i = cc.size() - 1; i > 0; --i)
        std::swap(perm[i], perm[static_cast<int>(uniform01(order_rng) * (i + 1))]);
      for (int j : perm) {
        st.jump_to(j);
        const auto out = st.angle_update();
        ++res.updates;
        if (!res.converged && done(out.objective)) {
          res.converged = true;
          break;
        }
      }
    }
    const double obj = st.objective();
    if (cfg.record_trace) res.trace.push_back(obj);
    stalled = (obj - prev < cfg.stall_eps * dmax) ? stalled + 1 : 0;
    prev = obj;
    if (stalled >= cfg.stall_sweeps && !res.converged) break;
    gaps.push_back(1.0 - obj / dmax);
    if (cfg.plateau_window > 0 && !res.converged && sweep >= cfg.plateau_window &&
        gaps[sweep] > cfg.plateau_ratio * gaps[sweep - cfg.plateau_window])
      break;
  }
  res.objective = st.objective();
  res.fidelity = res.objective / dmax;
  res.angles = st.angles();
  return res;
}

/// Optimize from angles drawn i.i.d. uniform on [0, 2 pi) using cfg.rng_seed.
inline OptimizeResult optimize(const CompiledCircuit& cc, const CompiledTarget& tgt,
                               const OptimizerConfig& cfg) {
  return optimize_from(cc, tgt, random_angles(cc.size(), cfg.rng_seed), cfg);
}

inline OptimizeResult optimize(const ParameterizedCircuit& circuit, const TargetSpec& spec,
                               const OptimizerConfig& cfg) {
  if (circuit.n_qubits() != spec.n_qubits())
    throw std::invalid_argument("optimize: circuit has " + std::to_string(circuit.n_qubits()) +
                                " qubits, target has " + std::to_string(spec.n_qubits()));
  const CompiledCircuit cc(circuit);
  const CompiledTarget tgt(spec);
  return optimize(cc, tgt, cfg);
}

/// CSV rows "sweep,objective" for a recorded trace.
inline void write_trace_csv(std::ostream& os, const std::vector<double>& trace) {
  os << "sweep,objective\n";
  os.precision(17);
  for (std::size_t i = 0; i < trace.size(); ++i) os << (i + 1) << ',' << trace[i] << '\n';
}

}  // namespace qgd
