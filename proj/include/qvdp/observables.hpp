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
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qvdp/density_matrix.hpp"

namespace qvdp {

/// Below this mean resultant length the mean direction is numerical noise.
inline constexpr double kPhaseUndefinedBelow = 1e-12;

struct SyncMeasure {
  double S = 0.0;   // mean resultant length |<e^{i phi}>|
  double mu = 0.0;  // mean direction arg <e^{i phi}>, in (-pi, pi]
  bool phase_defined = false;
  Complex first_moment{};
};

struct PhaseSample {
  double phi = 0.0;
  double p = 0.0;
};

struct CoherenceEntry {
  int m = 0;
  int n = 0;
  double magnitude = 0.0;
};

struct SyncReport {
  double S = 0.0;
  double mu = 0.0;
  bool phase_defined = false;
  double N = 0.0;
  std::optional<double> delta_N;  // N - N0 when the undriven amplitude is supplied
  std::vector<CoherenceEntry> coherences;
  std::vector<PhaseSample> phase_samples;
};

/// <e^{i phi}> = sum_n rho[n+1, n], the first circular moment of the Fock-basis
/// phase distribution.
inline Complex first_phase_moment(const Matrix& rho) {
  Complex c{};
  for (Eigen::Index n = 0; n + 1 < rho.rows(); ++n) c += rho(n + 1, n);
  return c;
}

inline SyncMeasure sync_measure(const DensityMatrix& rho) {
  SyncMeasure out;
  out.first_moment = first_phase_moment(rho.matrix());
  out.S = std::abs(out.first_moment);
  out.phase_defined = out.S >= kPhaseUndefinedBelow;
  out.mu = out.phase_defined ? std::arg(out.first_moment) : 0.0;
  return out;
}

/// P(phi_k) = (1/2pi) sum_{m,n>=0} e^{i(n-m)phi_k} rho_mn on phi_k = 2 pi k / n_points.
inline std::vector<PhaseSample> phase_distribution(const DensityMatrix& rho, int n_points = 1024) {
  if (n_points < 16) throw ConfigError("phase_distribution: need at least 16 points");
  const Matrix& m = rho.matrix();
  const int d = rho.dim().value();
  // superdiagonal sums u_k = sum_j rho[j, j+k]
  std::vector<Complex> u(d);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j + k < d; ++j) u[k] += m(j, j + k);

  std::vector<PhaseSample> out(n_points);
  const double step = 2.0 * std::numbers::pi / n_points;
  for (int i = 0; i < n_points; ++i) {
    const double phi = i * step;
    double acc = u[0].real();
    for (int k = 1; k < d; ++k) acc += 2.0 * (u[k] * std::polar(1.0, k * phi)).real();
    out[i] = {phi, acc / (2.0 * std::numbers::pi)};
  }
  return out;
}

/// Periodic trapezoid integral of uniformly sampled P over [0, 2pi).
inline double integrate_phase(const std::vector<PhaseSample>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& s : samples) acc += s.p;
  return acc * 2.0 * std::numbers::pi / static_cast<double>(samples.size());
}

/// N = <a^dag a>
inline double amplitude(const DensityMatrix& rho) {
  double n = 0.0;
  for (int k = 1; k < rho.dim().value(); ++k) n += k * rho.population(k);
  return n;
}

inline double coherence(const DensityMatrix& rho, int m, int n) {
  const int d = rho.dim().value();
  if (m < 0 || n < 0 || m >= d || n >= d) {
    throw std::out_of_range("coherence: index (" + std::to_string(m) + ", " + std::to_string(n) +
                            ") outside dim " + std::to_string(d));
  }
  return std::abs(rho(m, n));
}

/// Cardioid density with mean resultant length S and mean direction mu.
inline double cardioid(double phi, double S, double mu) {
  return (1.0 + 2.0 * S * std::cos(phi - mu)) / (2.0 * std::numbers::pi);
}

struct ReportOptions {
  std::vector<std::pair<int, int>> coherence_pairs{{0, 1}, {0, 2}, {1, 2}};
  int phase_points = 1024;
  std::optional<double> undriven_amplitude;
};

inline SyncReport make_sync_report(const DensityMatrix& rho, const ReportOptions& opts = {}) {
  SyncReport r;
  const SyncMeasure s = sync_measure(rho);
  r.S = s.S;
  r.mu = s.mu;
  r.phase_defined = s.phase_defined;
  r.N = amplitude(rho);
  if (opts.undriven_amplitude) r.delta_N = r.N - *opts.undriven_amplitude;
  for (auto [m, n] : opts.coherence_pairs) r.coherences.push_back({m, n, coherence(rho, m, n)});
  if (opts.phase_points > 0) r.phase_samples = phase_distribution(rho, opts.phase_points);
  return r;
}

}  // namespace qvdp
