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

#include <cmath>
#include <limits>

#include "qvdp/analytic.hpp"
#include "qvdp/liouvillian.hpp"
#include "qvdp/observables.hpp"

namespace qvdp::analytic {
namespace {

SystemParams sp(double g2, double k, double d, double w) { return SystemParams{1.0, g2, k, d, w, 0.0}; }

DensityMatrix numeric(const SystemParams& p) {
  return steady_state(build_liouvillian(p, choose_dim(p).dim)).rho;
}

TEST(Regime, Classification) {
  EXPECT_EQ(classify(0.0).label, Regime::classical_limit);
  EXPECT_EQ(classify(0.1).label, Regime::semi_classical);
  EXPECT_EQ(classify(1.0).label, Regime::quantum);
  EXPECT_EQ(classify(10.0).label, Regime::deep_quantum);
  EXPECT_EQ(classify(std::numeric_limits<double>::infinity()).label, Regime::deep_quantum_limit);
  EXPECT_THROW(amplitude_closed(sp(1.0, 0, 0, 0), classify(1.0)), NotApplicable);
}

TEST(Ansatz, ElementsNormalized) {
  const AnsatzState s = ansatz_elements(sp(7.0, 0.8, -0.4, 0.6));
  EXPECT_NEAR(s.rho00 + s.rho11 + s.rho22, 1.0, 1e-14);
  EXPECT_GT(s.D, 0.0);
  EXPECT_NEAR(s.sync(), ansatz_sync_numerator(sp(7.0, 0.8, -0.4, 0.6)) / s.D, 1e-14);
}

TEST(Ansatz, UndrivenEqualsThreeLevelTruncation) {
  for (double g2 : {0.5, 10.0, 300.0}) {
    const SystemParams p = sp(g2, 0.3, 0, 0);
    const DensityMatrix rho = steady_state(build_liouvillian(p, FockDim(3))).rho;
    EXPECT_NEAR(amplitude(rho), amplitude_closed(p, AmplitudeModel::undriven_ansatz), 1e-12);
  }
}

TEST(Ansatz, GenericPointAgainstNumerics) {
  const SystemParams p = sp(100.0, 0.5, 0.3, 0.4);
  const AnsatzState s = ansatz_elements(p);
  const DensityMatrix rho = numeric(p);
  EXPECT_NEAR(rho.population(0) / s.rho00, 1.0, 0.02);
  EXPECT_NEAR(rho.population(1) / s.rho11, 1.0, 0.02);
  EXPECT_NEAR(std::abs(rho(0, 1)) / std::abs(s.rho01), 1.0, 0.10);

  const SystemParams deep = sp(1e4, 0.5, 0.3, 0.4);
  const AnsatzState sd = ansatz_elements(deep);
  const DensityMatrix rd = numeric(deep);
  EXPECT_NEAR(rd.population(0) / sd.rho00, 1.0, 0.02);
  EXPECT_NEAR(rd.population(1) / sd.rho11, 1.0, 0.02);
  EXPECT_NEAR(std::abs(rd(0, 1)) / std::abs(sd.rho01), 1.0, 0.02);
}

TEST(Ansatz, RequiresHarmonicDrive) {
  SystemParams p = sp(10.0, 0, 0, 0.3);
  p.squeeze = 0.1;
  EXPECT_THROW(ansatz_elements(p), NotApplicable);
  EXPECT_THROW(ansatz_elements(sp(0.0, 2.0, 0, 0.3)), NotApplicable);
}

TEST(Amplitude, DeepQuantumLimitAgainstNumerics) {
  for (double k : {0.0, 1.0}) {
    const SystemParams p = sp(1e5, k, 0.7, 0.5);
    EXPECT_NEAR(amplitude(numeric(p)) / amplitude_closed(p, AmplitudeModel::deep_quantum_limit),
                1.0, 1e-3);
  }
}

TEST(Amplitude, NoiseDependenceLimit) {
  for (double k : {0.5, 1.0, 2.0, 5.0}) {
    const SystemParams p = sp(1e4, k, 0, 0);
    EXPECT_DOUBLE_EQ(amplitude_closed(p, AmplitudeModel::undriven_deep_quantum_limit), 1.0 / (3.0 + k));
    EXPECT_NEAR(amplitude(numeric(p)) * (3.0 + k), 1.0, 5e-3);
  }
  EXPECT_NEAR(amplitude_closed(sp(1e9, 0.5, 0, 0), AmplitudeModel::undriven_ansatz), 1.0 / 3.5, 1e-8);
}

TEST(Amplitude, UndrivenModelsRejectDrive) {
  EXPECT_THROW(amplitude_closed(sp(1.0, 0, 0, 0.2), AmplitudeModel::undriven_ansatz), NotApplicable);
  EXPECT_THROW(amplitude_closed(sp(0.0, 2.0, 0, 0), AmplitudeModel::system_size_expansion), ConfigError);
}

// alpha' = (g1 - k)/2 alpha - g2 |alpha|^2 alpha - i(delta alpha + Omega), RK4 to late time.
double integrate_mean_field(const SystemParams& p, Complex alpha) {
  auto f = [&](Complex a) {
    return 0.5 * (p.pump - p.loss) * a - p.two_photon_loss * std::norm(a) * a -
           kI * (p.detuning * a + p.drive);
  };
  const double h = 1e-3;
  for (int i = 0; i < 400000; ++i) {
    const Complex k1 = f(alpha), k2 = f(alpha + 0.5 * h * k1), k3 = f(alpha + 0.5 * h * k2),
                  k4 = f(alpha + h * k3);
    alpha += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return std::norm(alpha);
}

TEST(Amplitude, MeanFieldMatchesForwardIntegration) {
  for (const SystemParams& p : {sp(0.05, 0, 0.2, 1.0), sp(0.2, 0.3, -0.3, 0.8), sp(0.1, 0, 0, 0)}) {
    const double n = amplitude_closed(p, AmplitudeModel::mean_field);
    EXPECT_NEAR(integrate_mean_field(p, Complex(0.3, 0.1)), n, 1e-6 * std::max(1.0, n));
  }
}

TEST(Amplitude, MeanFieldUnlockedHasNoFixedPoint) {
  // Weak drive far from resonance: the classical orbit stays a limit cycle.
  EXPECT_THROW(amplitude_closed(sp(0.05, 0, 0.5, 0.3), AmplitudeModel::mean_field), NotApplicable);
}

TEST(Amplitude, ClassicalLimitsAgainstNumerics) {
  const SystemParams p = sp(0.01, 0, 0, 0);
  const double n = amplitude(numeric(p));
  EXPECT_NEAR(amplitude_closed(p, AmplitudeModel::mean_field) / n, 1.0, 0.1);
  EXPECT_NEAR(amplitude_closed(p, AmplitudeModel::system_size_expansion) / n, 1.0, 0.1);
}

TEST(Sync, DeepQuantumLimitAgainstNumerics) {
  const SystemParams p = sp(1e5, 0.8, 0.6, 0.5);
  const ClosedSync c = sync_closed(p, SyncLimit::deep_quantum_limit);
  const SyncMeasure m = sync_measure(numeric(p));
  EXPECT_NEAR(m.S / c.S, 1.0, 2e-3);
  EXPECT_LT(distance_mod_pi(m.mu, c.mu), 1e-3);
  EXPECT_NEAR(cardioid_coefficient_dql(p), 2.0 * c.S, 1e-14);
}

TEST(Sync, NoiselessEqualsAnsatzAtZeroKappa) {
  const SystemParams p = sp(40.0, 0.0, -0.9, 0.35);
  EXPECT_NEAR(sync_closed(p, SyncLimit::noiseless).S, ansatz_elements(p).sync(), 1e-14);
  EXPECT_THROW(sync_closed(sp(40.0, 0.1, 0, 0.3), SyncLimit::noiseless), NotApplicable);
}

TEST(Sync, UndrivenHasNoPhase) {
  const ClosedSync c = sync_closed(sp(10.0, 0.5, 1.0, 0.0), SyncLimit::deep_quantum_limit);
  EXPECT_EQ(c.S, 0.0);
  EXPECT_FALSE(c.phase_defined);
}

TEST(Sync, MeanDirectionConvention) {
  for (double d : {-2.0, -0.3, 0.0, 0.5, 3.0}) {
    const SystemParams p = sp(1e4, 1.0, d, 0.4);
    const double mu = sync_closed(p, SyncLimit::deep_quantum_limit).mu;
    EXPECT_LT(distance_mod_pi(mu, -printed_mean_direction(p)), 1e-12);
  }
  EXPECT_DOUBLE_EQ(printed_mean_direction(sp(1.0, 0, 0, 1.0)), -std::numbers::pi / 2.0);
  EXPECT_NEAR(distance_mod_pi(0.1, 0.1 + std::numbers::pi), 0.0, 1e-15);
}

TEST(Sync, OptimalDriveMatchesGoldenSection) {
  for (double k : {0.0, 1.0, 4.0}) {
    const auto s = [&](double w) { return sync_closed(sp(1.0, k, 0, w), SyncLimit::deep_quantum_limit).S; };
    double a = 0.0, b = 10.0;
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i = 0; i < 200; ++i) {
      const double c = b - r * (b - a), d = a + r * (b - a);
      if (s(c) > s(d))
        b = d;
      else
        a = c;
    }
    EXPECT_NEAR(0.5 * (a + b), optimal_drive_dql(sp(1.0, k, 0, 0)), 1e-6);
  }
}

TEST(Threshold, BoundAndErrors) {
  EXPECT_NEAR(distortion_bound(sp(1, 0, 0, 0)), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(distortion_bound(sp(1, 1, 0, 0)), 0.25, 1e-15);
  EXPECT_THROW(threshold_drive(sp(100, 0, 0, 0), 0.0), ConfigError);
  EXPECT_THROW(threshold_drive(sp(100, 0, 0, 0), 1.0 / 6.0), UnattainableDistortion);
  EXPECT_NO_THROW(threshold_drive(sp(100, 0, 0, 0), 1.0 / 6.0 - 1e-9));
  EXPECT_NEAR(threshold_drive(sp(100, 0, 0, 0), 0.1), std::sqrt(1.6875), 1e-12);
}

TEST(Threshold, AbsoluteDistortionAgainstNumerics) {
  for (double k : {0.0, 0.5, 2.0}) {
    SystemParams p = sp(1e4, k, 0.5, 0.0);
    const double n0 = amplitude(numeric(p));
    p.drive = threshold_drive(p, 0.1);
    const double n = amplitude(numeric(p));
    EXPECT_NEAR(std::abs(n - n0), 0.1, 1e-3);
  }
}

TEST(Boost, DerivativeMatchesClosedForm) {
  for (double w : {0.3, 1.0, 2.0}) {
    const auto s = [&](double k) { return sync_closed(sp(1.0, k, 0, w), SyncLimit::deep_quantum_limit).S; };
    const double h = 1e-5;
    const double fd = (-3.0 * s(0) + 4.0 * s(h) - s(2 * h)) / (2 * h);
    EXPECT_NEAR(fd, boost_analysis(sp(1.0, 0, 0, w)).dS_dkappa_at_zero, 1e-7);
  }
}

TEST(Boost, NecessaryCondition) {
  EXPECT_FALSE(boost_analysis(sp(0.5, 0, 0, 0.5)).boost_possible);
  EXPECT_TRUE(boost_analysis(sp(1.0, 0, 0, 0.5)).boost_possible);
  EXPECT_FALSE(boost_analysis(sp(0.74, 0, 0, 0.5)).boost_possible);
  EXPECT_TRUE(boost_analysis(sp(0.76, 0, 0, 0.5)).boost_possible);
  EXPECT_THROW(boost_analysis(sp(1.0, 0, 0, 0.0)), ConfigError);
}

}  // namespace
}  // namespace qvdp::analytic
