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
 * @file enumerate.hpp
 * @brief Streaming enumeration of CZ structures up to symmetry.
 *
 * A structure is a word over an alphabet of symbols: graph edges in count mode,
 * nonempty matchings in depth mode. Two words are equivalent when a qubit
 * relabeling that preserves both the graph and the target maps one onto the
 * other, optionally composed with word reversal (valid for self-adjoint
 * targets). Only the lexicographically smallest word of each class is emitted.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "qgd/objective.hpp"
#include "qgd/structure.hpp"

namespace qgd {

/// Qubit relabelings plus an optional reversal generator.
struct SymmetryGroup {
  /// perms[g][q] is the image of qubit q; always contains the identity first.
  std::vector<std::vector<int>> perms;
  bool reversal = false;

  static SymmetryGroup trivial(int n_qubits) {
    std::vector<int> id(n_qubits);
    std::iota(id.begin(), id.end(), 0);
    return {{id}, false};
  }

  std::size_t order() const noexcept { return perms.size() * (reversal ? 2 : 1); }
};

namespace detail {

/// Basis index with qubit q's bit moved to qubit perm[q]'s position.
inline std::size_t permute_index(std::size_t i, const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::size_t out = 0;
  for (int q = 0; q < n; ++q)
    if (i & qubit_mask(n, q)) out |= qubit_mask(n, perm[q]);
  return out;
}

inline bool invariant_under(const ComplexMatrix& m, const std::vector<int>& perm, double tol) {
  std::vector<std::size_t> map(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) map[i] = permute_index(i, perm);
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (std::abs(m(map[i], map[j]) - m(i, j)) > tol) return false;
  return true;
}

inline bool is_automorphism(const ConnectivityGraph& g, const std::vector<int>& perm) {
  for (const auto& e : g.edges())
    if (!g.has_edge(Edge(perm[e.a], perm[e.b]))) return false;
  return true;
}

}  // namespace detail

/// Relabelings that are automorphisms of the graph and leave V_T and P
/// invariant; reversal when V_T is self-adjoint and commutes with P.
inline SymmetryGroup symmetry_group(const ConnectivityGraph& graph, const TargetSpec& spec,
                                    double tol = 1e-10) {
  if (graph.n_qubits() != spec.n_qubits())
    throw std::invalid_argument("symmetry: graph and target qubit counts differ");
  SymmetryGroup g;
  std::vector<int> perm(graph.n_qubits());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (detail::is_automorphism(graph, perm) && detail::invariant_under(spec.target(), perm, tol) &&
        detail::invariant_under(spec.subspace().projector(), perm, tol))
      g.perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  const auto& vt = spec.target();
  const auto& p = spec.subspace().projector();
  g.reversal = max_abs_diff(vt, vt.dagger()) < tol && max_abs_diff(vt * p, p * vt) < tol;
  return g;
}

/// All nonempty matchings, largest first, ties in lexicographic edge order.
inline std::vector<std::vector<Edge>> nonempty_matchings(const ConnectivityGraph& g) {
  const auto& edges = g.edges();
  std::vector<std::vector<Edge>> out;
  const std::size_t m = edges.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<Edge> sel;
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      for (const auto& e : sel) ok &= !e.shares_qubit(edges[i]);
      sel.push_back(edges[i]);
    }
    if (ok) out.push_back(std::move(sel));
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.size() != y.size() ? x.size() > y.size() : x < y;
  });
  return out;
}

/// Deterministic pull-style generator of canonical structures.
class StructureEnumerator {
 public:
  StructureEnumerator(const ConnectivityGraph& graph, BudgetMode mode, int length,
                      const SymmetryGroup& group)
      : mode_(mode), length_(length), reversal_(group.reversal) {
    if (length < 0) throw std::invalid_argument("enumerate: negative budget");
    if (mode == BudgetMode::Count) {
      for (const auto& e : graph.edges()) symbols_.push_back({e});
    } else {
      symbols_ = nonempty_matchings(graph);
    }
    for (const auto& perm : group.perms) {
      std::vector<int> map(symbols_.size());
      bool identity = true;
      for (std::size_t s = 0; s < symbols_.size(); ++s) {
        std::vector<Edge> img;
        for (const auto& e : symbols_[s]) img.emplace_back(perm[e.a], perm[e.b]);
        std::sort(img.begin(), img.end());
        auto it = std::find(symbols_.begin(), symbols_.end(), img);
        if (it == symbols_.end()) throw std::invalid_argument("enumerate: group does not preserve the graph");
        map[s] = static_cast<int>(it - symbols_.begin());
        identity &= map[s] == static_cast<int>(s);
      }
      if (!identity) maps_.push_back(std::move(map));
    }
    if (reversal_) {
      std::vector<int> id(symbols_.size());
      std::iota(id.begin(), id.end(), 0);
      rev_maps_ = maps_;
      rev_maps_.insert(rev_maps_.begin(), id);
    }
    word_.assign(length_, -1);
  }

  std::size_t alphabet_size() const noexcept { return symbols_.size(); }

  /// Number of structures emitted so far (the next structure's index).
  std::uint64_t emitted() const noexcept { return emitted_; }

  std::optional<CircuitStructure> next() {
    if (done_) return std::nullopt;
    if (length_ == 0) {
      done_ = true;
      ++emitted_;
      return build();
    }
    const int last = length_ - 1;
    const int alphabet = static_cast<int>(symbols_.size());
    while (depth_ >= 0) {
      if (++word_[depth_] >= alphabet) {
        word_[depth_] = -1;
        --depth_;
        continue;
      }
      if (!prefix_canonical(depth_ + 1)) continue;
      if (depth_ < last) {
        ++depth_;
        continue;
      }
      if (reversal_ && !reversal_canonical()) continue;
      ++emitted_;
      return build();
    }
    done_ = true;
    return std::nullopt;
  }

 private:
  // Prefix pruning is sound for relabelings only: g(w) < w is decided by the
  // first differing position, which lies inside the prefix once g(prefix) < prefix.
  bool prefix_canonical(int len) const {
    for (const auto& map : maps_) {
      for (int i = 0; i < len; ++i) {
        const int img = map[word_[i]];
        if (img < word_[i]) return false;
        if (img > word_[i]) break;
      }
    }
    return true;
  }

  bool reversal_canonical() const {
    for (const auto& map : rev_maps_) {
      for (int i = 0; i < length_; ++i) {
        const int img = map[word_[length_ - 1 - i]];
        if (img < word_[i]) return false;
        if (img > word_[i]) break;
      }
    }
    return true;
  }

  CircuitStructure build() const {
    if (mode_ == BudgetMode::Count) {
      std::vector<Edge> seq;
      for (int s : word_) seq.push_back(symbols_[s].front());
      return CircuitStructure::from_sequence(std::move(seq));
    }
    std::vector<std::vector<Edge>> layers;
    for (int s : word_) layers.push_back(symbols_[s]);
    return CircuitStructure::from_layers(std::move(layers));
  }

  BudgetMode mode_;
  int length_;
  bool reversal_;
  std::vector<std::vector<Edge>> symbols_;
  std::vector<std::vector<int>> maps_;      // non-identity relabelings on symbols
  std::vector<std::vector<int>> rev_maps_;  // all relabelings, composed with reversal
  std::vector<int> word_;
  int depth_ = 0;
  bool done_ = false;
  std::uint64_t emitted_ = 0;
};

inline StructureEnumerator enumerate_count(const ConnectivityGraph& g, int cz_count,
                                           const SymmetryGroup& group) {
  return StructureEnumerator(g, BudgetMode::Count, cz_count, group);
}
inline StructureEnumerator enumerate_count(const ConnectivityGraph& g, int cz_count) {
  return enumerate_count(g, cz_count, SymmetryGroup::trivial(g.n_qubits()));
}

inline StructureEnumerator enumerate_depth(const ConnectivityGraph& g, int cz_depth,
                                           const SymmetryGroup& group) {
  return StructureEnumerator(g, BudgetMode::Depth, cz_depth, group);
}
inline StructureEnumerator enumerate_depth(const ConnectivityGraph& g, int cz_depth) {
  return enumerate_depth(g, cz_depth, SymmetryGroup::trivial(g.n_qubits()));
}

/// Materialize every structure (small spaces only).
inline std::vector<CircuitStructure> collect(StructureEnumerator e) {
  std::vector<CircuitStructure> out;
  while (auto s = e.next()) out.push_back(std::move(*s));
  return out;
}

}  // namespace qgd
