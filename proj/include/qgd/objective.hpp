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
 * @file objective.hpp
 * @brief Gate-matching objective on an input subspace.
 *
 * For a target V_T and an input projector P of rank D,
 *
 *     f(V) = min_phi || e^{i phi} V_T^dag V P - P ||_F^2 = 2D - 2 |tr(V_T^dag V P)|,
 *
 * so matching V_T on the subspace up to a common global phase is the same as
 * driving |tr(V_T^dag V P)|^2 up to D^2.
 */
#pragma once

#include <cassert>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgd/tensor.hpp"

namespace qgd {

/// Rank-D orthogonal projector onto the admissible inputs.
class InputSubspace {
 public:
  InputSubspace() = default;

  InputSubspace(ComplexMatrix projector, double tol = kDefaultTolerance) : p_(std::move(projector)) {
    n_ = qubit_count(p_.dim());
    if (max_abs_diff(p_ * p_, p_) > tol) throw std::invalid_argument("subspace: P is not idempotent");
    if (max_abs_diff(p_.dagger(), p_) > tol) throw std::invalid_argument("subspace: P is not Hermitian");
    const double tr = p_.trace().real();
    d_ = static_cast<int>(std::lround(tr));
    if (std::abs(tr - d_) > 1e-9 || d_ < 1)
      throw std::invalid_argument("subspace: trace(P) is not a positive integer");
  }

  static InputSubspace whole(int n_qubits) {
    return InputSubspace(ComplexMatrix::identity(std::size_t{1} << n_qubits));
  }

  int n_qubits() const noexcept { return n_; }
  int rank() const noexcept { return d_; }
  const ComplexMatrix& projector() const noexcept { return p_; }

 private:
  int n_ = 0;
  int d_ = 0;
  ComplexMatrix p_;
};

struct Ancilla {
  int qubit = 0;
  int init_state = 0;

  friend bool operator==(const Ancilla&, const Ancilla&) = default;
};

class TargetSpec {
 public:
  TargetSpec() = default;

  TargetSpec(ComplexMatrix target, InputSubspace subspace, std::vector<Ancilla> ancillas = {})
      : v_t_(std::move(target)), sub_(std::move(subspace)), ancillas_(std::move(ancillas)) {
    if (v_t_.dim() != sub_.projector().dim())
      throw std::invalid_argument("target spec: target and projector dimensions differ");
    if (!v_t_.is_unitary(1e-10)) throw std::invalid_argument("target spec: target is not unitary");
  }

  /// Whole-space target (P = I).
  explicit TargetSpec(ComplexMatrix target)
      : TargetSpec(target, InputSubspace::whole(qubit_count(target.dim()))) {}

  int n_qubits() const noexcept { return sub_.n_qubits(); }
  std::size_t dim() const noexcept { return v_t_.dim(); }
  int rank() const noexcept { return sub_.rank(); }
  const ComplexMatrix& target() const noexcept { return v_t_; }
  const InputSubspace& subspace() const noexcept { return sub_; }
  const std::vector<Ancilla>& ancillas() const noexcept { return ancillas_; }

  /// Qubits that are not declared ancillas, ascending.
  std::vector<int> data_qubits() const {
    std::vector<int> out;
    for (int q = 0; q < n_qubits(); ++q) {
      bool anc = false;
      for (const auto& a : ancillas_) anc |= a.qubit == q;
      if (!anc) out.push_back(q);
    }
    return out;
  }

 private:
  ComplexMatrix v_t_;
  InputSubspace sub_;
  std::vector<Ancilla> ancillas_;
};

/// Trailing qubits m..n_total-1 as |0> ancillas.
inline std::vector<Ancilla> trailing_ancillas(int m, int n_total) {
  std::vector<Ancilla> out;
  for (int q = m; q < n_total; ++q) out.push_back({q, 0});
  return out;
}

/// Extend an m-qubit gate to n_total qubits. Data qubits are the non-ancilla
/// qubits in ascending order; V_T acts as identity on ancillas and P projects
/// the ancillas onto their initial basis states (D = 2^m).
inline TargetSpec ancilla_extend(const ComplexMatrix& gate, int n_total,
                                 std::optional<std::vector<Ancilla>> ancillas = std::nullopt) {
  const int m = qubit_count(gate.dim());
  if (n_total < m)
    throw std::invalid_argument("ancilla_extend: register of " + std::to_string(n_total) +
                                " qubits cannot hold a " + std::to_string(m) + "-qubit gate");
  if (n_total > kDefaultMaxQubits)
    throw std::invalid_argument("ancilla_extend: register exceeds " +
                                std::to_string(kDefaultMaxQubits) + " qubits");
  std::vector<Ancilla> anc = ancillas ? *ancillas : trailing_ancillas(m, n_total);
  if (static_cast<int>(anc.size()) != n_total - m)
    throw std::invalid_argument("ancilla_extend: expected " + std::to_string(n_total - m) +
                                " ancillas, got " + std::to_string(anc.size()));
  std::vector<int> anc_q;
  for (const auto& a : anc) {
    if (a.init_state != 0 && a.init_state != 1)
      throw std::invalid_argument("ancilla_extend: initial state must be 0 or 1");
    anc_q.push_back(a.qubit);
  }
  detail::check_targets(anc_q, n_total);

  std::vector<int> data;
  for (int q = 0; q < n_total; ++q)
    if (std::find(anc_q.begin(), anc_q.end(), q) == anc_q.end()) data.push_back(q);

  const std::size_t dim = std::size_t{1} << n_total;
  ComplexMatrix vt = embed(gate, data, n_total);
  std::vector<cplx> diag(dim, 1.0);
  for (std::size_t i = 0; i < dim; ++i)
    for (const auto& a : anc)
      if (((i & qubit_mask(n_total, a.qubit)) != 0) != (a.init_state == 1)) diag[i] = 0.0;
  return TargetSpec(std::move(vt), InputSubspace(ComplexMatrix::diagonal(diag)), std::move(anc));
}

/// tr(V_T^dag V P).
inline cplx trace_overlap(const TargetSpec& spec, const ComplexMatrix& v) {
  if (v.dim() != spec.dim())
    throw std::invalid_argument("objective: circuit dimension " + std::to_string(v.dim()) +
                                " does not match target dimension " + std::to_string(spec.dim()));
  return (spec.target().dagger() * v * spec.subspace().projector()).trace();
}

/// |tr(V_T^dag V P)|^2, in [0, D^2].
inline double trace_objective(const TargetSpec& spec, const ComplexMatrix& v) {
  const double t = std::norm(trace_overlap(spec, v));
#ifndef NDEBUG
  const double d = spec.rank();
  assert(t >= 0.0 && t <= d * d * (1.0 + 1e-9));
#endif
  return t;
}

/// f(V) = 2D - 2 |tr(V_T^dag V P)|, in [0, 2D].
inline double infidelity(const TargetSpec& spec, const ComplexMatrix& v) {
  return 2.0 * spec.rank() - 2.0 * std::abs(trace_overlap(spec, v));
}

/// |tr(V_T^dag V P)|^2 / D^2, in [0, 1].
inline double normalized_fidelity(const TargetSpec& spec, const ComplexMatrix& v) {
  const double d = spec.rank();
  return trace_objective(spec, v) / (d * d);
}

/// Default success threshold on 1 - normalized_fidelity.
inline constexpr double kConvergenceEps = 1e-10;

/// Precomputed Q = P V_T^dag so that tr(V_T^dag V P) = tr(V Q).
struct CompiledTarget {
  int n_qubits;
  int rank;
  ComplexMatrix q;

  explicit CompiledTarget(const TargetSpec& spec)
      : n_qubits(spec.n_qubits()), rank(spec.rank()),
        q(spec.subspace().projector() * spec.target().dagger()) {}

  double max_objective() const noexcept { return static_cast<double>(rank) * rank; }
};

// ---------------------------------------------------------------------------
// JSON: {n_qubits, target: "ccz" | "cccz" | {dim, entries}, ancillas: [{qubit, init_state}]}

inline void to_json(nlohmann::json& j, const Ancilla& a) {
  j = nlohmann::json{{"qubit", a.qubit}, {"init_state", a.init_state}};
}
inline void from_json(const nlohmann::json& j, Ancilla& a) {
  a.qubit = j.at("qubit").get<int>();
  a.init_state = j.value("init_state", 0);
}

inline TargetSpec target_spec_from_json(const nlohmann::json& j) {
  const auto& t = j.at("target");
  ComplexMatrix gate = t.is_string() ? named_gate(t.get<std::string>()) : t.get<ComplexMatrix>();
  const int n = j.value("n_qubits", qubit_count(gate.dim()));
  std::optional<std::vector<Ancilla>> anc;
  if (j.contains("ancillas")) anc = j.at("ancillas").get<std::vector<Ancilla>>();
  return ancilla_extend(gate, n, std::move(anc));
}

}  // namespace qgd
