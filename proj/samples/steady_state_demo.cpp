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

// Steady state of a resonantly driven oscillator in the deep quantum regime,
// compared with the closed forms.

#include <cstdio>

#include "qvdp/analytic.hpp"
#include "qvdp/liouvillian.hpp"
#include "qvdp/observables.hpp"

int main() {
  using namespace qvdp;
  SystemParams p;
  p.two_photon_loss = 100.0;
  p.loss = 0.5;
  p.detuning = 0.3;
  p.drive = analytic::threshold_drive(p, 0.1);

  const DimChoice choice = choose_dim(p);
  const Liouvillian l = build_liouvillian(p, choice.dim);
  const SteadyState ss = steady_state(l);

  ReportOptions ro;
  SystemParams free = p;
  free.drive = 0.0;
  ro.undriven_amplitude = amplitude(steady_state(build_liouvillian(free, choice.dim)).rho);
  const SyncReport rep = make_sync_report(ss.rho, ro);

  std::printf("%s\n", p.describe().c_str());
  std::printf("dim %d (%d solves), residual %.2e\n", choice.dim.value(), choice.solves, ss.residual);
  std::printf("N  %.6f   ansatz %.6f\n", rep.N, analytic::ansatz_elements(p).amplitude());
  std::printf("dN %.6f\n", rep.delta_N.value_or(0.0));
  std::printf("S  %.6f   ansatz %.6f   limit %.6f\n", rep.S, analytic::ansatz_elements(p).sync(),
              analytic::sync_closed(p, analytic::SyncLimit::deep_quantum_limit).S);
  std::printf("mu %.6f   closed %.6f\n", rep.mu,
              analytic::sync_closed(p, analytic::SyncLimit::deep_quantum_limit).mu);
  for (const CoherenceEntry& c : rep.coherences)
    std::printf("|rho%d%d| %.3e\n", c.m, c.n, c.magnitude);

  std::printf("\n   phi      P(phi)   cardioid\n");
  const std::size_t stride = rep.phase_samples.size() / 16;
  for (std::size_t i = 0; i < rep.phase_samples.size(); i += stride) {
    const PhaseSample& s = rep.phase_samples[i];
    std::printf("%6.3f  %.6f  %.6f\n", s.phi, s.p, cardioid(s.phi, rep.S, rep.mu));
  }
  return 0;
}
