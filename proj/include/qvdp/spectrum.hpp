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

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "qvdp/liouvillian.hpp"

namespace qvdp {

/// Uniform grid of rotating-frame angular frequencies.
struct FrequencyGrid {
  double lo = -10.0;
  double hi = 10.0;
  int n = 2001;

  double step() const { return (hi - lo) / (n - 1); }
  double at(int i) const { return lo + i * step(); }
  std::vector<double> values() const {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = at(i);
    return v;
  }
};

/// Grid covering [-(4|delta| + 10 gamma1), +(4|delta| + 10 gamma1)] with the given spacing.
inline FrequencyGrid standard_grid(const SystemParams& p, double step) {
  const double half = 4.0 * std::abs(p.detuning) + 10.0 * p.pump;
  const int n = 2 * static_cast<int>(std::ceil(half / step)) + 1;
  const double h = (n - 1) / 2 * step;
  return {-h, h, n};
}

namespace detail {

// Tr(A X) as a linear functional on vec(X): f . vec(X) with f = vec(A^T).
inline Vector trace_functional(const Matrix& a) { return vectorize(a.transpose()); }

}  // namespace detail

/// g(tau) = Tr(a^dag exp(L tau)[a rho_ss]) = <a^dag(tau) a(0)> for each tau >= 0.
inline std::vector<Complex> correlation(const Liouvillian& l, const DensityMatrix& rho_ss,
                                        std::span<const double> taus, const EvolveOptions& opts = {}) {
  const FockDim dim = l.dim();
  if (rho_ss.dim() != dim) throw DimensionMismatch("correlation: state and Liouvillian dims differ");
  const Matrix a = annihilation(dim).matrix();
  const Vector f = detail::trace_functional(a.adjoint());

  std::vector<std::size_t> order(taus.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return taus[i] < taus[j]; });

  std::vector<Complex> out(taus.size());
  Vector x = vectorize(a * rho_ss.matrix());
  double t = 0.0;
  std::optional<Propagator> cached;
  for (std::size_t idx : order) {
    const double tau = taus[idx];
    if (!(tau >= 0.0)) throw ConfigError("correlation: tau must be >= 0");
    const double dt = tau - t;
    if (dt > 0.0) {
      const bool same = cached && std::abs(cached->dt() - dt) <= 1e-12 * std::max(1.0, dt);
      if (same) {
        x = cached->step(x);
      } else if (l.dim().value() <= opts.dense_max_dim) {
        cached.emplace(l, dt);
        x = cached->step(x);
      } else {
        x = vectorize(propagate(l, unvectorize(x, dim.value()), dt, opts));
      }
      t = tau;
    }
    out[idx] = f.conjugate().dot(x);  // dot() conjugates its left operand
  }
  return out;
}

/// Lorentzian-mixture representation g(tau) = sum_k w_k exp(lambda_k tau).
struct SpectralDecomposition {
  std::vector<Complex> eigenvalues;
  std::vector<Complex> weights;
  int stationary_index = -1;
  double cancellation = 0.0;  // sum |c_k| |v_k| / |x|, large means ill-conditioned

  Complex coherent_weight() const { return weights[stationary_index]; }

  /// 2 Re sum_{k != stationary} w_k / (i w - lambda_k)
  double density(double w) const {
    Complex acc{};
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
      if (static_cast<int>(k) == stationary_index) continue;
      acc += weights[k] / (Complex(0.0, w) - eigenvalues[k]);
    }
    return 2.0 * acc.real();
  }

  /// Smallest decay rate among modes carrying at least rel_weight of the total.
  double narrowest_rate(double rel_weight = 1e-8) const {
    double total = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k)
      if (static_cast<int>(k) != stationary_index) total += std::abs(weights[k]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (static_cast<int>(k) == stationary_index) continue;
      if (std::abs(weights[k]) >= rel_weight * total) best = std::min(best, -eigenvalues[k].real());
    }
    return best;
  }
};

struct DecompositionOptions {
  int max_liouville_size = 2500;
  double max_cancellation = 1e8;
  double max_reconstruction_error = 1e-8;
};

/// Expands a rho_ss in right eigenvectors of L. Returns nullopt when the
/// eigenbasis is too ill-conditioned (near-degenerate, defective) or too large.
inline std::optional<SpectralDecomposition> decompose(const Liouvillian& l, const DensityMatrix& rho_ss,
                                                      const DecompositionOptions& o = {}) {
  const int d = l.dim().value();
  if (d * d > o.max_liouville_size) return std::nullopt;
  const Matrix a = annihilation(l.dim()).matrix();
  const Vector x = vectorize(a * rho_ss.matrix());
  const Vector f = detail::trace_functional(a.adjoint());

  Eigen::ComplexEigenSolver<Matrix> es(l.dense());
  if (es.info() != Eigen::Success) return std::nullopt;
  const Matrix& v = es.eigenvectors();
  const Vector c = v.fullPivLu().solve(x);
  const double xn = x.norm();
  if (xn == 0.0) return std::nullopt;
  if ((v * c - x).norm() > o.max_reconstruction_error * xn) return std::nullopt;

  SpectralDecomposition s;
  const Eigen::Index n = es.eigenvalues().size();
  s.eigenvalues.resize(n);
  s.weights.resize(n);
  double canc = 0.0;
  double closest = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < n; ++k) {
    s.eigenvalues[k] = es.eigenvalues()(k);
    s.weights[k] = f.conjugate().dot(v.col(k)) * c(k);
    canc += std::abs(c(k)) * v.col(k).norm();
    if (std::abs(s.eigenvalues[k]) < closest) {
      closest = std::abs(s.eigenvalues[k]);
      s.stationary_index = static_cast<int>(k);
    }
  }
  s.cancellation = canc / xn;
  if (s.cancellation > o.max_cancellation) return std::nullopt;
  return s;
}

struct FftOptions {
  double dt = 0.01;
  double decay_tol = 1e-10;   // stop once |g_inc| stays below this fraction of |g_inc(0)|
  long max_samples = 1L << 21;
  int oversample = 8;         // FFT bins per target grid step
};

namespace detail {

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace detail

/// Independent spectrum pipeline: propagate a rho_ss with exp(L dt), subtract the
/// factorized long-time limit, trapezoid-weight, FFT, interpolate onto the grid.
inline std::vector<double> fft_spectrum(const Liouvillian& l, const DensityMatrix& rho_ss,
                                        const FrequencyGrid& grid, const FftOptions& o = {}) {
  const Matrix a = annihilation(l.dim()).matrix();
  const Matrix ad = a.adjoint();
  const Complex coherent = (ad * rho_ss.matrix()).trace() * (a * rho_ss.matrix()).trace();
  const Vector f = detail::trace_functional(ad);
  const Propagator prop(l, o.dt);

  std::vector<Complex> g;
  Vector x = vectorize(a * rho_ss.matrix());
  const long window = std::max<long>(64, static_cast<long>(std::ceil(5.0 / o.dt)));
  long quiet = 0;
  double g0 = 0.0;
  while (true) {
    const Complex gi = f.conjugate().dot(x) - coherent;
    if (g.empty()) g0 = std::abs(gi);
    g.push_back(gi);
    quiet = std::abs(gi) <= o.decay_tol * std::max(g0, 1e-300) ? quiet + 1 : 0;
    if (quiet >= window) break;
    if (static_cast<long>(g.size()) >= o.max_samples) {
      throw StiffnessError("fft_spectrum: correlation did not decay within " +
                           std::to_string(o.max_samples) + " samples");
    }
    x = prop.step(x);
  }
  g[0] *= 0.5;  // trapezoid end weight; the far end is already below tolerance

  const double target_bin = grid.step() / o.oversample;
  const std::size_t need = static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi / (target_bin * o.dt)));
  const std::size_t size = detail::next_pow2(std::max<std::size_t>(4 * g.size(), need));
  const double nyquist = std::numbers::pi / o.dt;
  if (std::max(std::abs(grid.lo), std::abs(grid.hi)) >= nyquist) {
    throw ConfigError("fft_spectrum: grid exceeds the Nyquist frequency of dt");
  }
  std::vector<Complex> in(size, Complex{});
  std::copy(g.begin(), g.end(), in.begin());
  std::vector<Complex> spec;
  Eigen::FFT<double> fft;
  fft.fwd(spec, in);  // X_k = sum_j x_j exp(-2 pi i jk / size)

  const double bin = 2.0 * std::numbers::pi / (static_cast<double>(size) * o.dt);
  auto value_at_bin = [&](long k) {
    const long m = static_cast<long>(size);
    const long idx = ((k % m) + m) % m;
    return 2.0 * o.dt * spec[static_cast<std::size_t>(idx)].real();
  };
  std::vector<double> out(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double pos = grid.at(i) / bin;
    const long k0 = static_cast<long>(std::floor(pos));
    const double frac = pos - static_cast<double>(k0);
    out[i] = (1.0 - frac) * value_at_bin(k0) + frac * value_at_bin(k0 + 1);
  }
  return out;
}

/// Grid maximum refined by a parabola through it and its two neighbours.
inline double find_peak(const std::vector<double>& freqs, const std::vector<double>& density) {
  if (freqs.size() != density.size() || freqs.size() < 3) {
    throw ConfigError("find_peak: need matching grids of at least 3 points");
  }
  const auto it = std::max_element(density.begin(), density.end());
  const std::size_t i = static_cast<std::size_t>(it - density.begin());
  if (i == 0 || i + 1 == density.size()) return freqs[i];
  const double y0 = density[i - 1], y1 = density[i], y2 = density[i + 1];
  const double curv = y0 - 2.0 * y1 + y2;
  if (curv >= 0.0) return freqs[i];
  const double h = freqs[i + 1] - freqs[i];
  return freqs[i] + 0.5 * (y0 - y2) / curv * h;
}

/// Trapezoid integral over the grid.
inline double integrate(const std::vector<double>& freqs, const std::vector<double>& density) {
  double acc = 0.0;
  for (std::size_t i = 1; i < freqs.size(); ++i)
    acc += 0.5 * (density[i] + density[i - 1]) * (freqs[i] - freqs[i - 1]);
  return acc;
}

struct SpectrumResult {
  std::vector<double> freqs;
  std::vector<double> density;  // incoherent part, coherent delta peak removed
  double delta_obs = 0.0;
  double delta_rel = std::numeric_limits<double>::quiet_NaN();  // (delta_obs - delta) / delta
  bool delta_rel_defined = false;
  double coherent_weight = 0.0;    // |<a>|^2
  double incoherent_weight = 0.0;  // N - |<a>|^2
  bool fft_fallback = false;
  int dim = 0;
};

struct SpectrumOptions {
  std::optional<int> dim;
  DimPolicy dim_policy{};
  bool force_fft = false;
  bool check_grid = true;
  bool refine_grid = false;  // densify the grid instead of rejecting a too coarse step
  FftOptions fft{};
  DecompositionOptions decomposition{};
};

namespace detail {

inline void check_grid_covers(const FrequencyGrid& grid, const SystemParams& p, double narrowest) {
  const double half = 4.0 * std::abs(p.detuning) + 10.0 * p.pump;
  if (grid.lo > -half + 1e-12 * half || grid.hi < half - 1e-12 * half) {
    throw ConfigError("power_spectrum: grid must span at least +-" + std::to_string(half));
  }
  if (std::isfinite(narrowest) && grid.step() > narrowest / 10.0) {
    throw ConfigError("power_spectrum: grid step " + std::to_string(grid.step()) +
                      " coarser than narrowest decay rate / 10 (" + std::to_string(narrowest / 10.0) +
                      ")");
  }
}

}  // namespace detail

/// Steady-state spectrum of a on the given grid, from an already solved state.
inline SpectrumResult power_spectrum(const Liouvillian& l, const DensityMatrix& rho_ss,
                                     const FrequencyGrid& grid, const SpectrumOptions& o = {}) {
  const SystemParams& p = l.params();
  SpectrumResult r;
  r.dim = l.dim().value();
  r.freqs = grid.values();
  const Matrix a = annihilation(l.dim()).matrix();
  const Complex mean_a = (a * rho_ss.matrix()).trace();
  r.coherent_weight = std::norm(mean_a);
  r.incoherent_weight = amplitude(rho_ss) - r.coherent_weight;

  std::optional<SpectralDecomposition> dec;
  if (!o.force_fft) dec = decompose(l, rho_ss, o.decomposition);
  if (dec) {
    const double narrowest = dec->narrowest_rate();
    if (o.refine_grid && std::isfinite(narrowest) && grid.step() > narrowest / 10.0) {
      FrequencyGrid fine = grid;
      fine.n = static_cast<int>(std::ceil((grid.hi - grid.lo) / (0.95 * narrowest / 10.0))) + 1;
      r.freqs = fine.values();
    }
    if (o.check_grid) {
      const FrequencyGrid used{r.freqs.front(), r.freqs.back(), static_cast<int>(r.freqs.size())};
      detail::check_grid_covers(used, p, narrowest);
    }
    r.density.resize(r.freqs.size());
    for (std::size_t i = 0; i < r.freqs.size(); ++i) r.density[i] = dec->density(r.freqs[i]);
  } else {
    if (o.check_grid) detail::check_grid_covers(grid, p, std::numeric_limits<double>::infinity());
    r.density = fft_spectrum(l, rho_ss, grid, o.fft);
    r.fft_fallback = true;
  }
  r.delta_obs = find_peak(r.freqs, r.density);
  if (p.detuning != 0.0) {
    r.delta_rel = (r.delta_obs - p.detuning) / p.detuning;
    r.delta_rel_defined = true;
  }
  return r;
}

inline SpectrumResult power_spectrum(const SystemParams& p, const FrequencyGrid& grid,
                                     const SpectrumOptions& o = {}) {
  const FockDim dim = o.dim ? FockDim(*o.dim) : choose_dim(p, o.dim_policy).dim;
  const Liouvillian l = build_liouvillian(p, dim);
  const SteadyState ss = steady_state(l, o.dim_policy.solver);
  return power_spectrum(l, ss.rho, grid, o);
}

inline std::vector<Complex> correlation(const SystemParams& p, std::span<const double> taus,
                                        const DimPolicy& policy = {}) {
  const Liouvillian l = build_liouvillian(p, choose_dim(p, policy).dim);
  return correlation(l, steady_state(l, policy.solver).rho, taus);
}

}  // namespace qvdp
