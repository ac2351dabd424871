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

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "qvdp/observables.hpp"

namespace qvdp {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

DensityMatrix random_state(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
  Matrix rho = m * m.adjoint();
  return DensityMatrix::validated(rho / rho.trace().real());
}

DensityMatrix coherent(int d, Complex alpha) {
  Vector c(d);
  double fact = 1.0;
  for (int n = 0; n < d; ++n) {
    if (n > 0) fact *= n;
    c(n) = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(fact);
  }
  c /= c.norm();
  return DensityMatrix::validated(c * c.adjoint());
}

// Quadrature oracle: full double sum for P(phi), then |int e^{i phi} P dphi|.
double brute_mrl(const DensityMatrix& rho, int k = 2048) {
  const Matrix& m = rho.matrix();
  const int d = rho.dim().value();
  Complex moment = 0.0;
  for (int j = 0; j < k; ++j) {
    const double phi = kTwoPi * j / k;
    double p = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) p += (std::polar(1.0, (b - a) * phi) * m(a, b)).real();
    moment += std::polar(1.0, phi) * p / kTwoPi;
  }
  return std::abs(moment * kTwoPi / static_cast<double>(k));
}

TEST(SyncMeasure, MatchesQuadratureOracle) {
  std::mt19937_64 rng(11);
  for (int d : {3, 4, 8, 16}) {
    for (int i = 0; i < 4; ++i) {
      const DensityMatrix rho = random_state(rng, d);
      EXPECT_NEAR(sync_measure(rho).S, brute_mrl(rho), 1e-10);
    }
  }
}

TEST(SyncMeasure, FockStateHasUndefinedPhase) {
  const SyncMeasure s = sync_measure(fock_state(FockDim(5), 2));
  EXPECT_EQ(s.S, 0.0);
  EXPECT_FALSE(s.phase_defined);
  for (const PhaseSample& p : phase_distribution(fock_state(FockDim(5), 2), 64))
    EXPECT_NEAR(p.p, 1.0 / kTwoPi, 1e-14);
}

TEST(SyncMeasure, CoherentStateDirection) {
  const Complex alpha = std::polar(2.0, 0.7);
  const DensityMatrix rho = coherent(40, alpha);
  const SyncMeasure s = sync_measure(rho);
  EXPECT_TRUE(s.phase_defined);
  EXPECT_NEAR(s.mu, 0.7, 1e-10);
  EXPECT_GT(s.S, 0.9);
  EXPECT_LT(s.S, 1.0);
  // P(phi) peaks at the mean direction.
  const auto samples = phase_distribution(rho, 1024);
  const auto best = std::max_element(samples.begin(), samples.end(),
                                     [](const auto& a, const auto& b) { return a.p < b.p; });
  EXPECT_NEAR(best->phi, 0.7, kTwoPi / 1024);
}

TEST(PhaseDistribution, NormalizedAndNonNegative) {
  std::mt19937_64 rng(12);
  const DensityMatrix rho = random_state(rng, 10);
  const auto samples = phase_distribution(rho, 512);
  EXPECT_NEAR(integrate_phase(samples), 1.0, 1e-12);
  for (const auto& s : samples) EXPECT_GT(s.p, -1e-12);
  EXPECT_THROW(phase_distribution(rho, 8), ConfigError);
}

TEST(PhaseDistribution, TwoLevelStateIsExactCardioid) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 0.6;
  m(1, 1) = 0.4;
  m(1, 0) = std::polar(0.3, -1.1);
  m(0, 1) = std::conj(m(1, 0));
  const DensityMatrix rho = DensityMatrix::validated(m);
  const SyncMeasure s = sync_measure(rho);
  EXPECT_NEAR(s.S, 0.3, 1e-15);
  EXPECT_NEAR(s.mu, -1.1, 1e-15);
  for (const auto& p : phase_distribution(rho, 128))
    EXPECT_NEAR(p.p, cardioid(p.phi, s.S, s.mu), 1e-14);
}

TEST(Observables, AmplitudeAndCoherence) {
  const DensityMatrix rho = coherent(30, Complex(1.5, 0.0));
  EXPECT_NEAR(amplitude(rho), 2.25, 1e-8);
  EXPECT_GT(coherence(rho, 0, 1), 0.0);
  EXPECT_THROW(coherence(rho, 0, 30), std::out_of_range);
  EXPECT_THROW(coherence(rho, -1, 0), std::out_of_range);
}

TEST(Observables, Report) {
  ReportOptions o;
  o.undriven_amplitude = 2.0;
  o.phase_points = 64;
  const SyncReport r = make_sync_report(coherent(30, Complex(1.5, 0.0)), o);
  ASSERT_TRUE(r.delta_N.has_value());
  EXPECT_NEAR(*r.delta_N, 0.25, 1e-8);
  EXPECT_EQ(r.coherences.size(), 3u);
  EXPECT_EQ(r.phase_samples.size(), 64u);
  EXPECT_TRUE(r.phase_defined);
}

}  // namespace
}  // namespace qvdp
