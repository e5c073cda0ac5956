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

#pragma once

#include <string_view>

#include "qgd/circuit.hpp"
#include "qgd/enumerate.hpp"
#include "qgd/io.hpp"
#include "qgd/objective.hpp"
#include "qgd/registry.hpp"
#include "qgd/search.hpp"
#include "qgd/structure.hpp"
#include "qgd/sweep.hpp"
#include "qgd/tensor.hpp"

namespace qgd {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace qgd
