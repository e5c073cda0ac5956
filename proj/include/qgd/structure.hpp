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
 * @file structure.hpp
 * @brief Qubit connectivity graphs and CZ placement structures.
 */
#pragma once

#include <algorithm>
#include <compare>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qgd {

/// Unordered qubit pair, stored with a < b.
struct Edge {
  int a = 0;
  int b = 0;

  Edge() = default;
  Edge(int x, int y) : a(std::min(x, y)), b(std::max(x, y)) {}

  bool touches(int q) const noexcept { return a == q || b == q; }
  bool shares_qubit(const Edge& o) const noexcept { return touches(o.a) || touches(o.b); }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class ConnectivityGraph {
 public:
  ConnectivityGraph() = default;
  ConnectivityGraph(int n_qubits, std::vector<Edge> edges) : n_(n_qubits), edges_(std::move(edges)) {
    if (n_ < 1) throw std::invalid_argument("connectivity: need at least one qubit");
    for (const auto& e : edges_) {
      if (e.a == e.b) throw std::invalid_argument("connectivity: self-loop on qubit " + std::to_string(e.a));
      if (e.a < 0 || e.b >= n_)
        throw std::invalid_argument("connectivity: edge (" + std::to_string(e.a) + "," +
                                    std::to_string(e.b) + ") out of range");
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  int n_qubits() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool has_edge(const Edge& e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

  /// Index of e in edges(), or -1.
  int edge_index(const Edge& e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    return (it != edges_.end() && *it == e) ? static_cast<int>(it - edges_.begin()) : -1;
  }

  friend bool operator==(const ConnectivityGraph&, const ConnectivityGraph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

/// Named graphs for the benchmark connectivities.
inline ConnectivityGraph connectivity_preset(std::string_view name) {
  if (name == "triangle") return {3, {{0, 1}, {0, 2}, {1, 2}}};
  if (name == "line3") return {3, {{0, 1}, {1, 2}}};
  // Square with one auxiliary corner (qubit 3 by convention).
  if (name == "square4" || name == "square") return {4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}};
  if (name == "fully4") return {4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  if (name == "t-shape") return {4, {{0, 1}, {0, 2}, {0, 3}}};
  // Triangle 1-2-3 with qubit 0 hanging off qubit 1.
  if (name == "paw") return {4, {{0, 1}, {1, 2}, {2, 3}, {1, 3}}};
  if (name == "line4") return {4, {{0, 1}, {1, 2}, {2, 3}}};
  if (name == "pair") return {2, {{0, 1}}};
  throw std::invalid_argument("unknown connectivity preset '" + std::string(name) + "'");
}

inline const std::vector<std::string>& connectivity_preset_names() {
  static const std::vector<std::string> names = {"triangle", "line3", "square4", "fully4", "t-shape",
                                                 "square",   "paw",   "line4",   "pair"};
  return names;
}

/// Greedy ASAP CZ depth: each CZ lands one layer after the latest earlier CZ sharing a qubit.
inline int compute_depth(std::span<const Edge> placements) {
  std::vector<int> last;
  int depth = 0;
  for (const auto& e : placements) {
    const int need = std::max(e.a, e.b) + 1;
    if (static_cast<int>(last.size()) < need) last.resize(need, 0);
    const int layer = std::max(last[e.a], last[e.b]) + 1;
    last[e.a] = last[e.b] = layer;
    depth = std::max(depth, layer);
  }
  return depth;
}

enum class BudgetMode { Count, Depth };

inline std::string_view to_string(BudgetMode m) { return m == BudgetMode::Count ? "count" : "depth"; }

/// A connectivity-respecting CZ placement, before any angles are attached.
class CircuitStructure {
 public:
  CircuitStructure() = default;

  static CircuitStructure from_sequence(std::vector<Edge> placements) {
    CircuitStructure s;
    s.mode_ = BudgetMode::Count;
    s.flat_ = std::move(placements);
    return s;
  }

  static CircuitStructure from_layers(std::vector<std::vector<Edge>> layers) {
    CircuitStructure s;
    s.mode_ = BudgetMode::Depth;
    for (const auto& layer : layers) {
      if (layer.empty()) throw std::invalid_argument("structure: empty CZ layer");
      for (std::size_t i = 0; i < layer.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (layer[i].shares_qubit(layer[j]))
            throw std::invalid_argument("structure: layer is not a matching");
      s.flat_.insert(s.flat_.end(), layer.begin(), layer.end());
    }
    s.layers_ = std::move(layers);
    return s;
  }

  BudgetMode mode() const noexcept { return mode_; }
  /// All placements in time order (layers flattened in depth mode).
  const std::vector<Edge>& placements() const noexcept { return flat_; }
  const std::vector<std::vector<Edge>>& layers() const noexcept { return layers_; }

  int cz_count() const noexcept { return static_cast<int>(flat_.size()); }
  int cz_depth() const {
    return mode_ == BudgetMode::Depth ? static_cast<int>(layers_.size()) : compute_depth(flat_);
  }

  /// Throws unless every placement is an edge of the graph.
  void validate(const ConnectivityGraph& g) const {
    for (const auto& e : flat_)
      if (!g.has_edge(e))
        throw std::invalid_argument("structure: CZ on (" + std::to_string(e.a) + "," +
                                    std::to_string(e.b) + ") is not a connectivity edge");
  }

  friend bool operator==(const CircuitStructure&, const CircuitStructure&) = default;

 private:
  BudgetMode mode_ = BudgetMode::Count;
  std::vector<Edge> flat_;
  std::vector<std::vector<Edge>> layers_;
};

// ---------------------------------------------------------------------------
// JSON

inline void to_json(nlohmann::json& j, const Edge& e) { j = nlohmann::json::array({e.a, e.b}); }
inline void from_json(const nlohmann::json& j, Edge& e) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("edge must be [a, b]");
  e = Edge(j[0].get<int>(), j[1].get<int>());
}

inline void to_json(nlohmann::json& j, const ConnectivityGraph& g) {
  j = nlohmann::json{{"n_qubits", g.n_qubits()}, {"edges", g.edges()}};
}
inline void from_json(const nlohmann::json& j, ConnectivityGraph& g) {
  g = ConnectivityGraph(j.at("n_qubits").get<int>(), j.at("edges").get<std::vector<Edge>>());
}

inline void to_json(nlohmann::json& j, const CircuitStructure& s) {
  j = nlohmann::json{{"mode", std::string(to_string(s.mode()))},
                     {"cz_count", s.cz_count()},
                     {"cz_depth", s.cz_depth()}};
  if (s.mode() == BudgetMode::Depth)
    j["layers"] = s.layers();
  else
    j["placements"] = s.placements();
}
inline void from_json(const nlohmann::json& j, CircuitStructure& s) {
  const std::string mode = j.value("mode", j.contains("layers") ? "depth" : "count");
  if (mode == "depth")
    s = CircuitStructure::from_layers(j.at("layers").get<std::vector<std::vector<Edge>>>());
  else if (mode == "count")
    s = CircuitStructure::from_sequence(j.at("placements").get<std::vector<Edge>>());
  else
    throw std::invalid_argument("structure mode must be 'count' or 'depth'");
}

}  // namespace qgd
