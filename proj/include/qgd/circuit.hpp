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
 * @file circuit.hpp
 * @brief Parameterized circuits V = W_K R_K(t_K) ... W_1 R_1(t_1) W_0.
 *
 * Elements are stored in matrix-product order: elements.front() is the
 * leftmost factor and acts last, elements.back() acts first. Rotation
 * parameters index into an AngleVector.
 */
#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qgd/structure.hpp"
#include "qgd/tensor.hpp"

namespace qgd {

using AngleVector = std::vector<double>;

/// Map an angle into (-pi, pi]. Shifting a single rotation by 2*pi only flips
/// the global sign, so this is lossless for every objective in this library.
inline double canonical_angle(double theta) {
  double r = std::remainder(theta, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

inline AngleVector canonical_angles(const AngleVector& v) {
  AngleVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = canonical_angle(v[i]);
  return out;
}

/// Fixed multi-qubit gate. `name` is "cz" for the primitive; empty for an explicit matrix.
struct FixedGate {
  std::string name;
  ComplexMatrix matrix;
  std::vector<int> targets;

  static FixedGate cz(int a, int b) { return {"cz", controlled_z(2), {a, b}}; }
  bool is_cz() const noexcept { return name == "cz"; }

  friend bool operator==(const FixedGate&, const FixedGate&) = default;
};

struct Rotation {
  RotationAxis axis = RotationAxis::Z;
  int target = 0;
  int param = 0;

  friend bool operator==(const Rotation&, const Rotation&) = default;
};

using CircuitElement = std::variant<FixedGate, Rotation>;

class ParameterizedCircuit {
 public:
  ParameterizedCircuit() = default;
  ParameterizedCircuit(int n_qubits, std::vector<CircuitElement> elements)
      : n_(n_qubits), elements_(std::move(elements)) {
    validate();
  }

  int n_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return std::size_t{1} << n_; }
  const std::vector<CircuitElement>& elements() const noexcept { return elements_; }

  /// K, the number of rotation parameters.
  int rotation_count() const noexcept { return k_; }

  /// Two-qubit fixed placements in time order (first applied first).
  std::vector<Edge> two_qubit_placements() const {
    std::vector<Edge> out;
    for (auto it = elements_.rbegin(); it != elements_.rend(); ++it)
      if (const auto* f = std::get_if<FixedGate>(&*it); f && f->targets.size() == 2)
        out.emplace_back(f->targets[0], f->targets[1]);
    return out;
  }

  int cz_count() const {
    int c = 0;
    for (const auto& e : elements_)
      if (const auto* f = std::get_if<FixedGate>(&e); f && f->is_cz()) ++c;
    return c;
  }
  int cz_depth() const { return compute_depth(two_qubit_placements()); }

  /// Copy of this circuit with the rotation owning `param` deleted (its angle
  /// pinned to zero). Remaining parameters are renumbered densely, keeping order.
  ParameterizedCircuit without_parameter(int param) const {
    std::vector<CircuitElement> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) {
      if (const auto* r = std::get_if<Rotation>(&e)) {
        if (r->param == param) continue;
        Rotation copy = *r;
        if (copy.param > param) --copy.param;
        out.emplace_back(copy);
      } else {
        out.push_back(e);
      }
    }
    return ParameterizedCircuit(n_, std::move(out));
  }

  friend bool operator==(const ParameterizedCircuit&, const ParameterizedCircuit&) = default;

 private:
  void validate() {
    if (n_ < 1 || n_ > kDefaultMaxQubits)
      throw std::invalid_argument("circuit: qubit count " + std::to_string(n_) + " outside [1, " +
                                  std::to_string(kDefaultMaxQubits) + "]");
    std::vector<int> seen;
    for (const auto& e : elements_) {
      if (const auto* r = std::get_if<Rotation>(&e)) {
        if (r->target < 0 || r->target >= n_)
          throw std::invalid_argument("circuit: rotation target " + std::to_string(r->target) +
                                      " out of range");
        if (r->param < 0) throw std::invalid_argument("circuit: negative parameter id");
        if (static_cast<int>(seen.size()) <= r->param) seen.resize(r->param + 1, 0);
        if (seen[r->param]++)
          throw std::invalid_argument("circuit: parameter " + std::to_string(r->param) +
                                      " used twice");
      } else {
        const auto& f = std::get<FixedGate>(e);
        detail::check_targets(f.targets, n_);
        if (f.matrix.dim() != (std::size_t{1} << f.targets.size()))
          throw std::invalid_argument("circuit: fixed gate dimension does not match its targets");
      }
    }
    for (std::size_t p = 0; p < seen.size(); ++p)
      if (!seen[p]) throw std::invalid_argument("circuit: parameter " + std::to_string(p) + " unused");
    k_ = static_cast<int>(seen.size());
  }

  int n_ = 1;
  std::vector<CircuitElement> elements_;
  int k_ = 0;
};

// ---------------------------------------------------------------------------
// Compiled form

/// Product of consecutive fixed gates. Diagonal blocks (all CZ chains) are
/// fused into a single diagonal; anything else stays a time-ordered gate list.
class FixedBlock {
 public:
  FixedBlock() = default;
  FixedBlock(int n, std::vector<FixedGate> gates) : n_(n), gates_(std::move(gates)) {
    diagonal_ = std::all_of(gates_.begin(), gates_.end(), [](const FixedGate& g) { return g.is_cz(); });
    if (diagonal_ && !gates_.empty()) {
      diag_.assign(std::size_t{1} << n_, 1.0);
      for (const auto& g : gates_) {
        const std::size_t m = qubit_mask(n_, g.targets[0]) | qubit_mask(n_, g.targets[1]);
        for (std::size_t i = 0; i < diag_.size(); ++i)
          if ((i & m) == m) diag_[i] = -diag_[i];
      }
      diag_inv_.resize(diag_.size());
      for (std::size_t i = 0; i < diag_.size(); ++i) diag_inv_[i] = std::conj(diag_[i]);
    }
  }

  bool is_identity() const noexcept { return gates_.empty(); }
  const std::vector<FixedGate>& gates() const noexcept { return gates_; }

  /// M <- W M
  void left(ComplexMatrix& m) const {
    if (gates_.empty()) return;
    if (diagonal_) return scale_rows(m, diag_);
    for (const auto& g : gates_) apply_left(m, n_, g.targets, g.matrix);
  }
  /// M <- W^-1 M
  void left_inverse(ComplexMatrix& m) const {
    if (gates_.empty()) return;
    if (diagonal_) return scale_rows(m, diag_inv_);
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it)
      apply_left(m, n_, it->targets, it->matrix.dagger());
  }
  /// M <- M W
  void right(ComplexMatrix& m) const {
    if (gates_.empty()) return;
    if (diagonal_) return scale_cols(m, diag_);
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) apply_right(m, n_, it->targets, it->matrix);
  }
  /// M <- M W^-1
  void right_inverse(ComplexMatrix& m) const {
    if (gates_.empty()) return;
    if (diagonal_) return scale_cols(m, diag_inv_);
    for (const auto& g : gates_) apply_right(m, n_, g.targets, g.matrix.dagger());
  }

 private:
  int n_ = 1;
  std::vector<FixedGate> gates_;
  bool diagonal_ = true;
  std::vector<cplx> diag_, diag_inv_;
};

struct RotationSlot {
  RotationAxis axis;
  int qubit;
  int param;
};

/// Time-ordered view: V = blocks[K] R_{K-1} blocks[K-1] ... R_0 blocks[0].
struct CompiledCircuit {
  int n_qubits = 1;
  std::vector<RotationSlot> rotations;
  std::vector<FixedBlock> blocks;

  std::size_t dim() const noexcept { return std::size_t{1} << n_qubits; }
  int size() const noexcept { return static_cast<int>(rotations.size()); }

  explicit CompiledCircuit(const ParameterizedCircuit& c) : n_qubits(c.n_qubits()) {
    std::vector<FixedGate> pending;
    for (auto it = c.elements().rbegin(); it != c.elements().rend(); ++it) {
      if (const auto* r = std::get_if<Rotation>(&*it)) {
        blocks.emplace_back(n_qubits, std::move(pending));
        pending.clear();
        rotations.push_back({r->axis, r->target, r->param});
      } else {
        pending.push_back(std::get<FixedGate>(*it));
      }
    }
    blocks.emplace_back(n_qubits, std::move(pending));
  }

  /// Left-multiply m by rotations [from, to) and the blocks between them,
  /// i.e. m <- blocks[to] R_{to-1} ... R_from blocks[from] m when `include_last`
  /// is set, otherwise stopping after R_{to-1}.
  void apply_segment_left(ComplexMatrix& m, const AngleVector& angles, int from, int to,
                          bool include_last_block) const {
    for (int j = from; j < to; ++j) {
      blocks[j].left(m);
      const auto& r = rotations[j];
      apply_left(m, n_qubits, r.qubit, rotation_entries(r.axis, angles[r.param]));
    }
    if (include_last_block) blocks[to].left(m);
  }
};

inline void check_angles(const ParameterizedCircuit& c, const AngleVector& angles) {
  if (static_cast<int>(angles.size()) != c.rotation_count())
    throw std::invalid_argument("angle count " + std::to_string(angles.size()) +
                                " does not match circuit parameter count " +
                                std::to_string(c.rotation_count()));
}

/// Full 2^n unitary of the circuit; the rightmost element is applied first.
inline ComplexMatrix evaluate(const CompiledCircuit& cc, const AngleVector& angles) {
  ComplexMatrix m = ComplexMatrix::identity(cc.dim());
  cc.apply_segment_left(m, angles, 0, cc.size(), true);
  return m;
}

inline ComplexMatrix evaluate(const ParameterizedCircuit& c, const AngleVector& angles) {
  check_angles(c, angles);
  return evaluate(CompiledCircuit(c), angles);
}

// ---------------------------------------------------------------------------
// Single-qubit templates around a CZ structure

enum class TemplateStyle { Full, Reduced };

inline std::string_view to_string(TemplateStyle s) { return s == TemplateStyle::Full ? "full" : "reduced"; }
inline TemplateStyle parse_template_style(std::string_view s) {
  if (s == "full") return TemplateStyle::Full;
  if (s == "reduced") return TemplateStyle::Reduced;
  throw std::invalid_argument("template style must be 'full' or 'reduced'");
}

struct TemplateOptions {
  TemplateStyle style = TemplateStyle::Reduced;
  /// Use a full Z-X-Z layer before the first CZ on each wire even in reduced style.
  bool full_start = false;
};

/// Attach parameterized single-qubit layers to a CZ structure.
///
/// Each wire gets one layer before each of its CZs (the post-layer of one CZ and
/// the pre-layer of the next are the same layer) and a closing Z-X-Z layer. In
/// reduced style interior layers are Z-X: the dropped R_Z commutes through the
/// following CZ into the next layer. Wires without CZs get only the closing layer.
/// Parameters are numbered in time order.
inline ParameterizedCircuit apply_template(int n_qubits, const CircuitStructure& structure,
                                           TemplateOptions opts = {}) {
  for (const auto& e : structure.placements())
    if (e.a < 0 || e.b >= n_qubits)
      throw std::invalid_argument("template: placement outside the register");

  std::vector<CircuitElement> timeline;
  int next_param = 0;
  auto layer = [&](int q, bool full) {
    timeline.emplace_back(Rotation{RotationAxis::Z, q, next_param++});
    timeline.emplace_back(Rotation{RotationAxis::X, q, next_param++});
    if (full) timeline.emplace_back(Rotation{RotationAxis::Z, q, next_param++});
  };

  const bool reduced = opts.style == TemplateStyle::Reduced;
  std::vector<bool> open(n_qubits, false);
  std::vector<bool> started(n_qubits, false);
  for (const auto& e : structure.placements()) {
    for (int q : {e.a, e.b}) {
      if (open[q]) continue;
      layer(q, !reduced || (!started[q] && opts.full_start));
      open[q] = started[q] = true;
    }
    timeline.emplace_back(FixedGate::cz(e.a, e.b));
    open[e.a] = open[e.b] = false;
  }
  for (int q = 0; q < n_qubits; ++q) layer(q, true);

  return ParameterizedCircuit(n_qubits, {timeline.rbegin(), timeline.rend()});
}

// ---------------------------------------------------------------------------
// JSON: {n_qubits, elements: [{type:"cz",targets:[a,b]} | {type:"rot",axis,target,param}
//        | {type:"fixed",targets,matrix}], angles: [...]}

inline nlohmann::json circuit_to_json(const ParameterizedCircuit& c,
                                      const std::optional<AngleVector>& angles = std::nullopt) {
  nlohmann::json elems = nlohmann::json::array();
  for (const auto& e : c.elements()) {
    if (const auto* r = std::get_if<Rotation>(&e)) {
      elems.push_back({{"type", "rot"},
                       {"axis", std::string(to_string(r->axis))},
                       {"target", r->target},
                       {"param", r->param}});
    } else {
      const auto& f = std::get<FixedGate>(e);
      if (f.is_cz())
        elems.push_back({{"type", "cz"}, {"targets", f.targets}});
      else
        elems.push_back({{"type", "fixed"}, {"targets", f.targets}, {"matrix", f.matrix}});
    }
  }
  nlohmann::json j{{"n_qubits", c.n_qubits()}, {"elements", std::move(elems)}};
  if (angles) j["angles"] = canonical_angles(*angles);
  return j;
}

struct CircuitWithAngles {
  ParameterizedCircuit circuit;
  std::optional<AngleVector> angles;
};

inline CircuitWithAngles circuit_from_json(const nlohmann::json& j) {
  const int n = j.at("n_qubits").get<int>();
  std::vector<CircuitElement> elems;
  for (const auto& e : j.at("elements")) {
    const std::string type = e.at("type").get<std::string>();
    if (type == "rot") {
      elems.emplace_back(Rotation{parse_axis(e.at("axis").get<std::string>()), e.at("target").get<int>(),
                                  e.at("param").get<int>()});
    } else if (type == "cz") {
      const auto t = e.at("targets").get<std::vector<int>>();
      if (t.size() != 2) throw std::invalid_argument("cz element needs two targets");
      elems.emplace_back(FixedGate::cz(t[0], t[1]));
    } else if (type == "fixed") {
      elems.emplace_back(FixedGate{"", e.at("matrix").get<ComplexMatrix>(),
                                   e.at("targets").get<std::vector<int>>()});
    } else {
      throw std::invalid_argument("unknown circuit element type '" + type + "'");
    }
  }
  CircuitWithAngles out{ParameterizedCircuit(n, std::move(elems)), std::nullopt};
  if (j.contains("angles")) {
    out.angles = j.at("angles").get<AngleVector>();
    check_angles(out.circuit, *out.angles);
  }
  return out;
}

}  // namespace qgd
