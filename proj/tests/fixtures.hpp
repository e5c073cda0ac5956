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

// Contents of every file under fixtures/, keyed by file name.

#pragma once

#include <map>
#include <numbers>
#include <string>

#include "support.hpp"

namespace qgd::testing {

inline constexpr double kPerturbation = 1e-3;

/// Gray-code phase polynomial for CCCZ on four fully connected qubits.
inline CircuitStructure cccz_fully4_structure() {
  return CircuitStructure::from_sequence({{0, 3}, {1, 3}, {0, 3}, {2, 3}, {0, 3}, {1, 3}, {0, 3},
                                          {2, 3}, {0, 2}, {1, 2}, {0, 2}, {1, 2}, {0, 1}, {0, 1}});
}

inline std::map<std::string, nlohmann::json> fixture_files() {
  std::map<std::string, nlohmann::json> f;
  const auto ccz = textbook_ccz();
  f["textbook_ccz.json"] = circuit_to_json(ccz.circuit, ccz.angles);
  AngleVector bent = *ccz.angles;
  bent[0] += kPerturbation;
  f["textbook_ccz_perturbed.json"] = circuit_to_json(ccz.circuit, bent);
  f["identity_1q.json"] = circuit_to_json(ParameterizedCircuit(1, {}), AngleVector{});

  const auto inert = inert_fixture();
  f["prune_inert.json"] = circuit_to_json(inert.circuit, inert.angles);
  f["target_inert.json"] =
      target_file_json(inert_target(), zxz(kInertEuler[0], kInertEuler[1], kInertEuler[2]));
  const auto pinned = pinned_fixture();
  f["prune_pinned.json"] = circuit_to_json(pinned.circuit, pinned.angles);
  const auto half_pi = rotation_gate(RotationAxis::Z, std::numbers::pi / 2);
  f["target_rz_half_pi.json"] = target_file_json(TargetSpec(half_pi), half_pi);
  const auto redundant = redundant_fixture();
  f["prune_redundant.json"] = circuit_to_json(redundant.circuit, redundant.angles);
  const auto diag = diagonal_fixture();
  f["prune_diagonal.json"] = circuit_to_json(diag.circuit, diag.angles);
  const auto rz07 = rotation_gate(RotationAxis::Z, kDiagonalAngle);
  f["target_rz_0p7.json"] = target_file_json(TargetSpec(rz07), rz07);

  f["structure_cccz_fully4_14.json"] = cccz_fully4_structure();
  f["structure_ccz_triangle_6.json"] =
      CircuitStructure::from_sequence({{1, 2}, {0, 2}, {1, 2}, {0, 2}, {0, 1}, {0, 1}});
  return f;
}

}  // namespace qgd::testing
