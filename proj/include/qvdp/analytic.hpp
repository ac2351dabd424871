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

#include <unsupported/Eigen/Polynomials>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qvdp/core_hilbert.hpp"
#include "qvdp/error.hpp"
#include "qvdp/params.hpp"

// Closed-form results for the driven van der Pol oscillator in the deep quantum
// regime. Each printed expression is coded from its master form with the
// limits kept as separate functions, so each can be checked on its own.
// Rates may be given in any unit; every formula carries gamma1 explicitly.

namespace qvdp::analytic {

enum class Regime { classical_limit, semi_classical, quantum, deep_quantum, deep_quantum_limit };

struct AnalyticRegime {
  Regime label;
  std::string method;
};

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::classical_limit: return "classical-limit";
    case Regime::semi_classical: return "semi-classical";
    case Regime::quantum: return "quantum";
    case Regime::deep_quantum: return "deep-quantum";
    case Regime::deep_quantum_limit: return "deep-quantum-limit";
  }
  return "unknown";
}

/// Regime by damping ratio gamma2/gamma1, with the analytical method that works there.
inline AnalyticRegime classify(double damping_ratio) {
  if (!(damping_ratio >= 0.0)) throw ConfigError("classify: damping ratio must be >= 0");
  if (damping_ratio == 0.0) return {Regime::classical_limit, "mean-field"};
  if (damping_ratio <= 0.1) return {Regime::semi_classical, "system size expansion"};
  if (damping_ratio < 10.0) return {Regime::quantum, "none"};
  if (std::isinf(damping_ratio)) return {Regime::deep_quantum_limit, "density matrix ansatz"};
  return {Regime::deep_quantum, "density matrix ansatz"};
}

namespace detail {
// (3 gamma1 + kappa)^2 + 4 delta^2, written the way it appears in the expressions.
inline double base_poly(const SystemParams& p) {
  const double g1 = p.pump, k = p.loss, d = p.detuning;
  return 6.0 * g1 * k + 9.0 * g1 * g1 + 4.0 * d * d + k * k;
}
inline void require_harmonic_only(const SystemParams& p, const char* who) {
  if (p.squeeze != 0.0) {
    throw NotApplicable(std::string(who) + ": derived for harmonic driving only (eta = 0)");
  }
}
inline void require_undriven(const SystemParams& p, const char* who) {
  if (!p.undriven()) throw NotApplicable(std::string(who) + ": undriven formula (Omega = eta = 0)");
}
}  // namespace detail

/// Steady-state elements of the three-level ansatz rho = [[r00, r01, 0], [r10, r11, 0], [0, 0, r22]].
struct AnsatzState {
  double rho00 = 0.0;
  double rho11 = 0.0;
  double rho22 = 0.0;
  Complex rho01{};
  double D = 0.0;  // common denominator

  double amplitude() const { return rho11 + 2.0 * rho22; }
  /// |<e^{i phi}>| = |rho01|
  double sync() const { return std::abs(rho01); }
  /// Mean direction: argument of the subdiagonal element rho10 = conj(rho01).
  double mean_direction() const { return std::arg(std::conj(rho01)); }
};

/// Common denominator D of the ansatz elements.
inline double ansatz_denominator(const SystemParams& p) {
  const double g1 = p.pump, g2 = p.two_photon_loss, k = p.loss, d = p.detuning, w = p.drive;
  const double d2 = d * d, k2 = k * k, w2 = w * w;
  return g1 * (4.0 * g1 * (d2 + 4.0 * k2 + 3.0 * w2) + 15.0 * g1 * g1 * k + 9.0 * g1 * g1 * g1 +
               4.0 * d2 * k + 7.0 * k * (k2 + 4.0 * w2)) +
         g2 * (3.0 * g1 + k) * (detail::base_poly(p) + 8.0 * w2) +
         k2 * (4.0 * d2 + k2 + 8.0 * w2);
}

/// Numerator M of S = M / D.
inline double ansatz_sync_numerator(const SystemParams& p) {
  const double g1 = p.pump, g2 = p.two_photon_loss, k = p.loss, d = p.detuning, w = p.drive;
  return 2.0 * w * (g1 * (g2 - k) + k * (g2 + k)) *
         std::sqrt(4.0 * d * d + (k + 3.0 * g1) * (k + 3.0 * g1));
}

inline AnsatzState ansatz_elements(const SystemParams& p) {
  p.validate();
  detail::require_harmonic_only(p, "ansatz_elements");
  if (p.two_photon_loss <= 0.0) throw NotApplicable("ansatz_elements: requires gamma2 > 0");
  const double g1 = p.pump, g2 = p.two_photon_loss, k = p.loss, d = p.detuning, w = p.drive;
  const double d2 = d * d, k2 = k * k, w2 = w * w;
  const double poly = detail::base_poly(p);

  AnsatzState s;
  s.D = ansatz_denominator(p);
  s.rho00 = (2.0 * g1 * (g2 * (4.0 * (d2 + k2) + 6.0 * w2) + 3.0 * k * (k2 + 2.0 * w2)) +
             k * (g2 + k) * (4.0 * d2 + k2 + 4.0 * w2) + 3.0 * g1 * g1 * k * (7.0 * g2 + 3.0 * k) +
             18.0 * g2 * g1 * g1 * g1) /
            s.D;
  const double ladder = g1 * (poly + 12.0 * w2) + 4.0 * k * w2;
  s.rho11 = (g2 + k) * ladder / s.D;
  s.rho22 = g1 * ladder / s.D;
  s.rho01 = -2.0 * w * (g1 * (g2 - k) + k * (g2 + k)) * Complex(2.0 * d, -(3.0 * g1 + k)) / s.D;
  return s;
}

enum class AmplitudeModel {
  deep_quantum_limit,           // driven, gamma2/gamma1 -> infinity
  undriven_ansatz,              // undriven, finite gamma2
  undriven_deep_quantum_limit,  // undriven, gamma2/gamma1 -> infinity
  system_size_expansion,        // undriven, semi-classical
  mean_field,                   // stationary |alpha|^2 of the mean-field equation
};

namespace detail {

// alpha' = (g1 - k)/2 alpha - g2 |alpha|^2 alpha - i(delta alpha + Omega)
inline double mean_field_amplitude(const SystemParams& p) {
  const double g = 0.5 * (p.pump - p.loss);
  const double g2 = p.two_photon_loss, d = p.detuning, w = p.drive;
  if (w == 0.0) return g > 0.0 ? g / g2 : 0.0;

  // n (g - g2 n)^2 + n delta^2 = Omega^2, n = |alpha|^2
  Eigen::Vector4d coeffs;
  coeffs << -w * w, g * g + d * d, -2.0 * g * g2, g2 * g2;
  Eigen::PolynomialSolver<double, 3> solver(coeffs);
  std::vector<double> roots;
  solver.realRoots(roots, 1e-9);

  double best = -1.0;
  for (double n : roots) {
    if (n <= 0.0) continue;
    // Linear stability of the fixed point alpha = i Omega / ((g - g2 n) - i delta).
    const Complex alpha = kI * w / Complex(g - g2 * n, -d);
    const Complex A = Complex(g - 2.0 * g2 * n, -d);
    const Complex B = -g2 * alpha * alpha;
    const double j11 = A.real() + B.real(), j12 = -A.imag() + B.imag();
    const double j21 = A.imag() + B.imag(), j22 = A.real() - B.real();
    const bool stable = (j11 + j22) < 0.0 && (j11 * j22 - j12 * j21) > 0.0;
    if (stable) best = std::max(best, n);
  }
  if (best < 0.0) throw NotApplicable("mean-field: no stable fixed point for " + p.describe());
  return best;
}

}  // namespace detail

inline double amplitude_closed(const SystemParams& p, AmplitudeModel model) {
  p.validate();
  const double g1 = p.pump, g2 = p.two_photon_loss, k = p.loss, w = p.drive;
  switch (model) {
    case AmplitudeModel::deep_quantum_limit: {
      detail::require_harmonic_only(p, "amplitude_closed(deep_quantum_limit)");
      const double poly = detail::base_poly(p);
      return (g1 * (poly + 12.0 * w * w) + 4.0 * k * w * w) /
             ((3.0 * g1 + k) * (poly + 8.0 * w * w));
    }
    case AmplitudeModel::undriven_ansatz:
      detail::require_undriven(p, "amplitude_closed(undriven_ansatz)");
      return g1 * (2.0 * g1 + g2 + k) / (g1 * (3.0 * g2 + k) + k * (g2 + k) + g1 * g1);
    case AmplitudeModel::undriven_deep_quantum_limit:
      detail::require_undriven(p, "amplitude_closed(undriven_deep_quantum_limit)");
      return g1 / (3.0 * g1 + k);
    case AmplitudeModel::system_size_expansion:
      detail::require_undriven(p, "amplitude_closed(system_size_expansion)");
      if (g2 <= 0.0) throw ConfigError("amplitude_closed: system size expansion needs gamma2 > 0");
      return (g1 + 2.0 * g2 - k) / (2.0 * g2);
    case AmplitudeModel::mean_field:
      if (g2 <= 0.0) throw ConfigError("amplitude_closed: mean-field needs gamma2 > 0");
      detail::require_harmonic_only(p, "amplitude_closed(mean_field)");
      return detail::mean_field_amplitude(p);
  }
  throw ConfigError("amplitude_closed: unknown model");
}

/// Model matching the analytical method of a regime.
inline double amplitude_closed(const SystemParams& p, const AnalyticRegime& regime) {
  switch (regime.label) {
    case Regime::classical_limit: return amplitude_closed(p, AmplitudeModel::mean_field);
    case Regime::semi_classical: return amplitude_closed(p, AmplitudeModel::system_size_expansion);
    case Regime::quantum:
      throw NotApplicable("amplitude_closed: no analytical method in the quantum regime");
    case Regime::deep_quantum: return amplitude_closed(p, AmplitudeModel::undriven_ansatz);
    case Regime::deep_quantum_limit: return amplitude_closed(p, AmplitudeModel::deep_quantum_limit);
  }
  throw ConfigError("amplitude_closed: unknown regime");
}

enum class SyncLimit { deep_quantum_limit, noiseless };

struct ClosedSync {
  double S = 0.0;
  double mu = 0.0;  // argument of the closed-form subdiagonal coherence
  bool phase_defined = false;
};

/// Closed-form synchronization measure and mean direction.
///
/// deep_quantum_limit: gamma2/gamma1 -> infinity at any kappa (gamma2 ignored).
/// noiseless: kappa = 0 at finite gamma2.
inline ClosedSync sync_closed(const SystemParams& p, SyncLimit limit) {
  p.validate();
  detail::require_harmonic_only(p, "sync_closed");
  const double g1 = p.pump, g2 = p.two_photon_loss, k = p.loss, d = p.detuning, w = p.drive;
  ClosedSync out;
  Complex moment;
  if (limit == SyncLimit::deep_quantum_limit) {
    const double poly = detail::base_poly(p);
    const double denom = (3.0 * g1 + k) * (poly + 8.0 * w * w);
    out.S = 2.0 * w * (g1 + k) * std::sqrt((3.0 * g1 + k) * (3.0 * g1 + k) + 4.0 * d * d) / denom;
    moment = -2.0 * w * (g1 + k) * Complex(2.0 * d, 3.0 * g1 + k) / denom;
  } else {
    if (k != 0.0) throw NotApplicable("sync_closed(noiseless): requires kappa = 0");
    if (g2 <= 0.0) throw NotApplicable("sync_closed(noiseless): requires gamma2 > 0");
    const double denom = 4.0 * g1 * (d * d + 3.0 * w * w) +
                         3.0 * g2 * (9.0 * g1 * g1 + 4.0 * d * d + 8.0 * w * w) + 9.0 * g1 * g1 * g1;
    out.S = 2.0 * g2 * w * std::sqrt(9.0 * g1 * g1 + 4.0 * d * d) / denom;
    moment = -2.0 * g2 * w * Complex(2.0 * d, 3.0 * g1) / denom;
  }
  out.phase_defined = out.S > 0.0;
  out.mu = out.phase_defined ? std::arg(moment) : 0.0;
  return out;
}

/// The printed single-branch arctangent form -arctan((kappa + 3 gamma1)/(2 delta)),
/// with -pi/2 at delta = 0. It describes the same direction as the numerical
/// mean direction up to orientation and branch: mu_numeric == -printed (mod pi).
inline double printed_mean_direction(const SystemParams& p) {
  if (p.detuning == 0.0) return -std::numbers::pi / 2.0;
  return -std::atan((p.loss + 3.0 * p.pump) / (2.0 * p.detuning));
}

/// Smallest |a - b| modulo pi, in [0, pi/2].
inline double distance_mod_pi(double a, double b) {
  const double r = std::remainder(a - b, std::numbers::pi);
  return std::abs(r);
}

/// Amplitude of the cos term in the deep-quantum-limit cardioid, i.e. 2S.
inline double cardioid_coefficient_dql(const SystemParams& p) {
  const double g1 = p.pump, k = p.loss, d = p.detuning, w = p.drive;
  const double poly = detail::base_poly(p);
  return 4.0 * w * (k + g1) / (poly + 8.0 * w * w) *
         std::sqrt(1.0 + 4.0 * d * d / ((k + 3.0 * g1) * (k + 3.0 * g1)));
}

/// Drive strength maximizing the deep-quantum-limit S at fixed kappa, delta = 0.
inline double optimal_drive_dql(const SystemParams& p) {
  const double g1 = p.pump, k = p.loss;
  return std::sqrt((9.0 * g1 * g1 + 6.0 * g1 * k + k * k) / 8.0);
}

/// Largest reachable distortion as the drive grows without bound.
inline double distortion_bound(const SystemParams& p) {
  return (p.pump + p.loss) / (2.0 * (3.0 * p.pump + p.loss));
}

/// Drive strength at which the deep-quantum-limit amplitude moves by epsilon.
///
/// Throws UnattainableDistortion when epsilon >= distortion_bound(p): no finite
/// drive reaches it.
inline double threshold_drive(const SystemParams& p, double epsilon) {
  p.validate();
  if (!(epsilon > 0.0)) throw ConfigError("threshold_drive: epsilon must be > 0");
  const double bound = distortion_bound(p);
  if (epsilon >= bound) {
    throw UnattainableDistortion("threshold_drive: epsilon " + std::to_string(epsilon) +
                                 " >= bound " + std::to_string(bound));
  }
  const double g1 = p.pump, k = p.loss;
  const double num = epsilon * (3.0 * g1 + k) * detail::base_poly(p);
  const double den = 4.0 * (g1 * (1.0 - 6.0 * epsilon) + k * (1.0 - 2.0 * epsilon));
  return std::sqrt(num / den);
}

struct BoostAnalysis {
  double dS_dkappa_at_zero = 0.0;  // deep-quantum-limit slope, resonant drive
  bool boost_possible = false;     // necessary condition on gamma2/gamma1
};

inline BoostAnalysis boost_analysis(const SystemParams& p) {
  p.validate();
  if (!(p.drive > 0.0)) throw ConfigError("boost_analysis: requires Omega > 0");
  const double g1 = p.pump, w = p.drive;
  const double q = 9.0 * g1 * g1 + 8.0 * w * w;
  BoostAnalysis out;
  out.dS_dkappa_at_zero = 2.0 * w * (3.0 * g1 * g1 + 8.0 * w * w) / (q * q);
  const double dr = p.detuning / g1;
  out.boost_possible = p.two_photon_loss / g1 > 1.0 - 3.0 / (4.0 * dr * dr + 12.0);
  return out;
}

}  // namespace qvdp::analytic
