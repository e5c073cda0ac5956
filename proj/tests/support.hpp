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

// Independent reference implementations and fixture builders shared by the
// unit tests, the acceptance binary and the fixture generator. Nothing here
// calls the library's kernels; it works on plain dense matrices.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "qgd/qgd.hpp"

namespace qgd::testing {

using Dense = std::vector<std::vector<cplx>>;

inline Dense dense_identity(std::size_t d) {
  Dense m(d, std::vector<cplx>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) m[i][i] = 1.0;
  return m;
}

inline Dense dense_mul(const Dense& a, const Dense& b) {
  const std::size_t d = a.size();
  Dense c(d, std::vector<cplx>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Dense kron(const Dense& a, const Dense& b) {
  const std::size_t da = a.size(), db = b.size();
  Dense c(da * db, std::vector<cplx>(da * db, 0.0));
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) c[i * db + k][j * db + l] = a[i][j] * b[k][l];
  return c;
}

inline Dense to_dense(const ComplexMatrix& m) {
  Dense d(m.dim(), std::vector<cplx>(m.dim()));
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) d[i][j] = m(i, j);
  return d;
}

inline double max_diff(const Dense& a, const ComplexMatrix& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) e = std::max(e, std::abs(a[i][j] - b(i, j)));
  return e;
}

/// cos(t/2) I - i sin(t/2) A written out entry by entry.
inline Dense rotation_2x2(RotationAxis axis, double t) {
  const double c = std::cos(t / 2), s = std::sin(t / 2);
  const cplx mi(0.0, -1.0);
  if (axis == RotationAxis::X) return {{c, mi * s}, {mi * s, c}};
  return {{cplx(c, -s), 0.0}, {0.0, cplx(c, s)}};
}

/// I x ... x g x ... x I with qubit 0 as the leftmost (most significant) factor.
inline Dense kron_embed(const Dense& g, int q, int n) {
  Dense out{{1.0}};
  for (int k = 0; k < n; ++k) out = kron(out, k == q ? g : dense_identity(2));
  return out;
}

inline Dense cz_dense(int a, int b, int n) {
  const std::size_t d = std::size_t{1} << n;
  Dense m = dense_identity(d);
  for (std::size_t i = 0; i < d; ++i)
    if ((i >> (n - 1 - a) & 1) && (i >> (n - 1 - b) & 1)) m[i][i] = -1.0;
  return m;
}

/// Left fold over the element list with Kronecker-built factors.
inline Dense naive_evaluate(const ParameterizedCircuit& c, const AngleVector& angles) {
  const int n = c.n_qubits();
  Dense v = dense_identity(c.dim());
  for (const auto& e : c.elements()) {
    if (const auto* r = std::get_if<Rotation>(&e)) {
      v = dense_mul(v, kron_embed(rotation_2x2(r->axis, angles[r->param]), r->target, n));
    } else {
      const auto& f = std::get<FixedGate>(e);
      if (!f.is_cz()) throw std::invalid_argument("naive_evaluate handles rotations and CZ only");
      v = dense_mul(v, cz_dense(f.targets[0], f.targets[1], n));
    }
  }
  return v;
}

inline cplx dense_trace(const Dense& m) {
  cplx t = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) t += m[i][i];
  return t;
}

inline Dense dense_dagger(const Dense& m) {
  Dense d(m.size(), std::vector<cplx>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) d[j][i] = std::conj(m[i][j]);
  return d;
}

/// |tr(V_T^dag V P)|^2 / D^2 from dense factors.
inline double naive_fidelity(const Dense& vt, const Dense& v, const Dense& p) {
  const double d = dense_trace(p).real();
  return std::norm(dense_trace(dense_mul(dense_mul(dense_dagger(vt), v), p))) / (d * d);
}

// ---------------------------------------------------------------------------
// Random instances

inline ComplexMatrix random_unitary(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<std::vector<cplx>> cols(d, std::vector<cplx>(d));
  for (auto& c : cols)
    for (auto& x : c) x = cplx(g(rng), g(rng));
  // Modified Gram-Schmidt.
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      cplx dot = 0.0;
      for (std::size_t i = 0; i < d; ++i) dot += std::conj(cols[j][i]) * cols[k][i];
      for (std::size_t i = 0; i < d; ++i) cols[k][i] -= dot * cols[j][i];
    }
    double nrm = 0.0;
    for (auto x : cols[k]) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    for (auto& x : cols[k]) x /= nrm;
  }
  ComplexMatrix u(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) u(i, j) = cols[j][i];
  return u;
}

/// Orthogonal projector onto `rank` columns of a random unitary.
inline ComplexMatrix random_projector(std::size_t d, int rank, std::mt19937_64& rng) {
  const ComplexMatrix u = random_unitary(d, rng);
  ComplexMatrix p(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (int k = 0; k < rank; ++k) p(i, j) += u(i, k) * std::conj(u(j, k));
  return p;
}

/// A circuit of `k` random rotations interleaved with random CZs on n qubits.
inline ParameterizedCircuit random_circuit(int n, int k, std::mt19937_64& rng) {
  std::vector<CircuitElement> elems;
  std::uniform_int_distribution<int> qd(0, n - 1);
  std::bernoulli_distribution coin(0.5);
  for (int p = 0; p < k; ++p) {
    if (n > 1 && coin(rng)) {
      int a = qd(rng), b = qd(rng);
      while (b == a) b = qd(rng);
      elems.emplace_back(FixedGate::cz(a, b));
    }
    elems.emplace_back(Rotation{coin(rng) ? RotationAxis::X : RotationAxis::Z, qd(rng), p});
  }
  std::shuffle(elems.begin(), elems.end(), rng);
  return ParameterizedCircuit(n, std::move(elems));
}

inline AngleVector random_angle_vector(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  AngleVector v(k);
  for (auto& x : v) x = u(rng);
  return v;
}

// ---------------------------------------------------------------------------
// Fixture builders

/// Collects gates in the order they act, numbering parameters in that order.
class Timeline {
 public:
  explicit Timeline(int n) : n_(n) {}

  Timeline& rot(RotationAxis axis, int q, double angle) {
    elems_.emplace_back(Rotation{axis, q, static_cast<int>(angles_.size())});
    angles_.push_back(angle);
    return *this;
  }
  Timeline& rz(int q, double a) { return rot(RotationAxis::Z, q, a); }
  Timeline& rx(int q, double a) { return rot(RotationAxis::X, q, a); }
  Timeline& cz(int a, int b) {
    elems_.emplace_back(FixedGate::cz(a, b));
    return *this;
  }
  /// Hadamard up to phase: R_Z(pi/2) R_X(pi/2) R_Z(pi/2).
  Timeline& h(int q) {
    const double h = std::numbers::pi / 2;
    return rz(q, h).rx(q, h).rz(q, h);
  }
  Timeline& cnot(int control, int target) { return h(target).cz(control, target).h(target); }

  CircuitWithAngles build() const {
    return {ParameterizedCircuit(n_, {elems_.rbegin(), elems_.rend()}), angles_};
  }

 private:
  int n_;
  std::vector<CircuitElement> elems_;
  AngleVector angles_;
};

/// Phase-polynomial CCZ on qubits 0, 1, 2 with six CZs, each CZ sharing one
/// wire with the last: T on every qubit, then T^dag/T on the parities
/// b^c, a^b^c, a^c and T^dag on a^b, each computed with CNOT pairs.
inline CircuitWithAngles textbook_ccz() {
  const double t = std::numbers::pi / 4;
  Timeline tl(3);
  tl.rz(0, t).rz(1, t).rz(2, t);
  tl.cnot(1, 2).rz(2, -t);
  tl.cnot(0, 2).rz(2, t);
  tl.cnot(1, 2).rz(2, -t);
  tl.cnot(0, 2);
  tl.cnot(0, 1).rz(1, -t);
  tl.cnot(0, 1);
  return tl.build();
}

/// R_Z(g) R_X(b) R_Z(a) acting in the order a, b, g.
inline ComplexMatrix zxz(double a, double b, double g) {
  return rotation_gate(RotationAxis::Z, g) * rotation_gate(RotationAxis::X, b) * rotation_gate(RotationAxis::Z, a);
}

inline constexpr double kInertEuler[3] = {0.4, 0.9, -1.3};

/// Data qubit 0 carries a generic single-qubit gate; qubit 1 is a |0> ancilla.
inline TargetSpec inert_target() {
  return ancilla_extend(zxz(kInertEuler[0], kInertEuler[1], kInertEuler[2]), 2);
}

/// Z-X-Z on the data wire plus an R_Z on the ancilla, which only adds a phase.
inline CircuitWithAngles inert_fixture() {
  Timeline tl(2);
  tl.rz(0, kInertEuler[0]).rx(0, kInertEuler[1]).rz(0, kInertEuler[2]).rz(1, 0.3);
  return tl.build();
}

inline TargetSpec rz_target(double angle) { return TargetSpec(rotation_gate(RotationAxis::Z, angle)); }

/// Single R_Z against R_Z(pi/2): the only rotation is pinned.
inline CircuitWithAngles pinned_fixture() {
  Timeline tl(1);
  tl.rz(0, std::numbers::pi / 2);
  return tl.build();
}

/// Two adjacent R_Z against R_Z(pi/2): only their sum is pinned.
inline CircuitWithAngles redundant_fixture() {
  Timeline tl(1);
  tl.rz(0, 1.0).rz(0, std::numbers::pi / 2 - 1.0);
  return tl.build();
}

inline constexpr double kDiagonalAngle = 0.7;

/// Z-X-Z against the diagonal R_Z(0.7): the X must sit at zero.
inline CircuitWithAngles diagonal_fixture() {
  Timeline tl(1);
  tl.rz(0, 0.3).rx(0, 0.0).rz(0, kDiagonalAngle - 0.3);
  return tl.build();
}

inline nlohmann::json target_file_json(const TargetSpec& spec, const ComplexMatrix& gate) {
  nlohmann::json j{{"n_qubits", spec.n_qubits()}, {"target", gate}};
  if (!spec.ancillas().empty()) j["ancillas"] = spec.ancillas();
  return j;
}

}  // namespace qgd::testing
