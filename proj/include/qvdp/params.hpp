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

#include <cmath>
#include <sstream>

#include "qvdp/error.hpp"

namespace qvdp {

/// Rates and drive strengths of the driven van der Pol master equation.
///
/// All quantities share one unit; the pump rate is conventionally 1 so that
/// everything reads in units of gamma_1.
///   pump             gamma_1  single-photon gain
///   two_photon_loss  gamma_2  nonlinear damping that creates the limit cycle
///   loss             kappa    single-photon loss (the noise channel)
///   detuning         delta    omega_0 - omega_d, may be negative
///   drive            Omega    harmonic drive strength
///   squeeze          eta      two-photon (squeezing) drive strength
struct SystemParams {
  double pump = 1.0;
  double two_photon_loss = 0.0;
  double loss = 0.0;
  double detuning = 0.0;
  double drive = 0.0;
  double squeeze = 0.0;

  void validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(pump) || !finite(two_photon_loss) || !finite(loss) || !finite(detuning) ||
        !finite(drive) || !finite(squeeze)) {
      throw ConfigError("SystemParams: non-finite value in " + describe());
    }
    if (pump <= 0.0) throw ConfigError("SystemParams: pump rate must be > 0");
    if (two_photon_loss < 0.0) throw ConfigError("SystemParams: two-photon loss must be >= 0");
    if (loss < 0.0) throw ConfigError("SystemParams: single-photon loss must be >= 0");
    if (drive < 0.0) throw ConfigError("SystemParams: drive must be >= 0");
    if (squeeze < 0.0) throw ConfigError("SystemParams: squeeze drive must be >= 0");
  }

  bool undriven() const { return drive == 0.0 && squeeze == 0.0; }

  /// Same physics with every rate divided by the pump rate.
  SystemParams in_pump_units() const {
    return {1.0, two_photon_loss / pump, loss / pump, detuning / pump, drive / pump, squeeze / pump};
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(6);
    os << "{gamma1=" << pump << ", gamma2=" << two_photon_loss << ", kappa=" << loss
       << ", delta=" << detuning << ", Omega=" << drive << ", eta=" << squeeze << "}";
    return os.str();
  }
};

}  // namespace qvdp
