// Copyright 2026 The qvdp Authors
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

#include <string>
#include <vector>

#include "qvdp/error.hpp"

namespace qvdp::sweep {

/// Numerical tolerances for sweeps, and the width of the acceptance bands.
struct ToleranceProfile {
  std::string name = "default";
  double band_scale = 1.0;     // multiplies every acceptance tolerance
  double residual_max = 1e-8;  // rows whose steady-state residual exceeds this fail
  double dim_tol = 1e-8;       // choose_dim convergence threshold
};

inline std::vector<std::string> profile_names() { return {"default", "loose"}; }

inline ToleranceProfile profile_by_name(const std::string& name) {
  if (name == "default") return {};
  if (name == "loose") return {"loose", 2.0, 1e-6, 1e-6};
  throw ConfigError("unknown tolerance profile '" + name + "' (valid: default, loose)");
}

}  // namespace qvdp::sweep
