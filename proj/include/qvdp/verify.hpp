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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qvdp/analytic.hpp"
#include "qvdp/liouvillian.hpp"
#include "qvdp/observables.hpp"
#include "qvdp/spectrum.hpp"
#include "qvdp/sweep/presets.hpp"
#include "qvdp/sweep/runner.hpp"
#include "qvdp/sweep/tolerance.hpp"

namespace qvdp::verify {

struct CheckResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::string measured;
  std::string expected;
  double seconds = 0.0;
};

struct VerifyOptions {
  sweep::ToleranceProfile profile{};
  bool corrupt_vectorization = false;  // build structural checks with the transpose dropped
  std::vector<std::string> only;       // empty: all checks
  std::function<void(const CheckResult&)> on_result;
};

namespace detail {

using sweep::format_number;

inline std::string fmt(double v) { return format_number(v); }

inline std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g%%", 100.0 * v);
  return buf;
}

struct Outcome {
  bool passed;
  std::string measured;
  std::string expected;
};

struct Ctx {
  const VerifyOptions& opts;
  double band(double tol) const { return tol * opts.profile.band_scale; }
};

inline SystemParams params(double g2, double k, double d, double w, double eta = 0.0) {
  return SystemParams{1.0, g2, k, d, w, eta};
}

inline DensityMatrix solve(const SystemParams& p, int* dim = nullptr) {
  const FockDim d = choose_dim(p).dim;
  if (dim) *dim = d.value();
  return steady_state(build_liouvillian(p, d)).rho;
}

inline double sync_at(const SystemParams& p, FockDim d) {
  return sync_measure(steady_state(build_liouvillian(p, d)).rho).S;
}

// One-sided three-point derivative of S in kappa at kappa = 0, fixed cutoff.
inline double ds_dkappa(SystemParams p, double h = 1e-3) {
  p.loss = 0.0;
  const FockDim d(choose_dim(p).dim.value() + 4);
  const double s0 = sync_at(p, d);
  p.loss = h;
  const double s1 = sync_at(p, d);
  p.loss = 2.0 * h;
  const double s2 = sync_at(p, d);
  return (-3.0 * s0 + 4.0 * s1 - s2) / (2.0 * h);
}

inline Liouvillian structural_liouvillian(const Ctx& c) {
  const SystemParams p = params(10.0, 0.5, 0.7, 0.4, 0.3);
  const auto conv = c.opts.corrupt_vectorization ? qvdp::detail::Vectorization::missing_transpose
                                                 : qvdp::detail::Vectorization::column_stacking;
  return qvdp::detail::build_liouvillian(p, FockDim(10), conv);
}

inline Matrix random_density(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
  Matrix rho = m * m.adjoint();
  return rho / rho.trace().real();
}

// ---- checks ----

inline Outcome structural_trace(const Ctx& c) {
  const double err = trace_preservation_error(structural_liouvillian(c));
  return {err < 1e-10, "max |column trace| " + fmt(err), "< 1e-10"};
}

inline Outcome structural_hermiticity(const Ctx& c) {
  std::mt19937_64 rng(7);
  std::vector<Matrix> probes;
  for (int i = 0; i < 4; ++i) probes.push_back(random_density(rng, 10));
  const double err = hermiticity_preservation_error(structural_liouvillian(c), probes);
  return {err < 1e-10, "max |L(X) - L(X)^dag| " + fmt(err), "< 1e-10"};
}

inline Outcome undriven_dql(const Ctx& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const DensityMatrix rho = solve(params(1e4, 0, 0, 0));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double tol = c.band(1e-3);
  const double e0 = std::abs(rho.population(0) - 2.0 / 3.0);
  const double e1 = std::abs(rho.population(1) - 1.0 / 3.0);
  const double n = amplitude(rho);
  const bool ok = e0 < tol && e1 < tol && std::abs(n - 1.0 / 3.0) < tol && secs < 1.0;
  return {ok,
          "rho00 " + fmt(rho.population(0)) + ", rho11 " + fmt(rho.population(1)) + ", N0 " +
              fmt(n) + ", " + fmt(secs) + " s",
          "(2/3, 1/3), N0 1/3 within " + fmt(tol) + ", < 1 s"};
}

inline Outcome eq6_noise(const Ctx& c) {
  double worst = 0.0;
  for (double k : {0.5, 1.0, 2.0, 5.0}) {
    const double n = amplitude(solve(params(1e4, k, 0, 0)));
    worst = std::max(worst, std::abs(n / (1.0 / (3.0 + k)) - 1.0));
  }
  return {worst < c.band(5e-3), "max rel error " + pct(worst), "< " + pct(c.band(5e-3))};
}

inline Outcome fig1_regimes(const Ctx& c) {
  const sweep::RunResult r = sweep::run_scenario(sweep::preset("fig1"), {1, c.opts.profile});
  const auto& out = r.config.outputs;
  auto col = [&](const char* name) {
    return static_cast<std::size_t>(std::find(out.begin(), out.end(), name) - out.begin());
  };
  const std::size_t in = col("N_numeric"), ie5 = col("N_eq5"), isse = col("N_sse"),
                    imf = col("N_meanfield");
  double eq5 = 0.0, sse = 0.0, mf = 0.0, eq5_at = 0.0;
  std::size_t eq5_bad = 0;
  bool rows_ok = r.failed == 0;
  for (const sweep::SweepRow& row : r.rows) {
    if (row.failed) continue;
    const double g2 = row.point.at(sweep::Param::gamma2_ratio);
    const double n = row.values[in];
    auto rel = [&](std::size_t i) { return std::abs(row.values[i] - n) / n; };
    if (g2 >= 10.0 * (1.0 - 1e-12)) {
      if (rel(ie5) > eq5) eq5_at = g2;
      eq5 = std::max(eq5, rel(ie5));
      if (rel(ie5) > c.band(0.02)) ++eq5_bad;
    }
    if (g2 <= 0.1 * (1.0 + 1e-12)) sse = std::max(sse, rel(isse));
    if (g2 <= 0.02) mf = std::max(mf, rel(imf));
  }
  const bool ok = rows_ok && eq5 <= c.band(0.02) && sse <= c.band(0.10) && mf <= c.band(0.10);
  return {ok,
          "ansatz max " + pct(eq5) + " at gamma2 " + fmt(eq5_at) + " (" + std::to_string(eq5_bad) +
              " points out of band); SSE max " + pct(sse) + "; mean-field max " + pct(mf),
          "ansatz <= " + pct(c.band(0.02)) + ", SSE <= " + pct(c.band(0.1)) + ", mean-field <= " +
              pct(c.band(0.1))};
}

inline Outcome arnold_slices(const Ctx& c) {
  double slice_worst = 0.0, max_distortion = 0.0;
  std::size_t failed = 0;
  for (const char* name : {"fig2a", "fig2b"}) {
    const auto r = sweep::run_scenario(sweep::preset(name), {1, c.opts.profile});
    const auto& out = r.config.outputs;
    const auto irel = std::find(out.begin(), out.end(), "S_rel_diff") - out.begin();
    const auto idist = std::find(out.begin(), out.end(), "distortion") - out.begin();
    failed += r.failed;
    for (const auto& row : r.rows) {
      if (row.failed) continue;
      slice_worst = std::max(slice_worst, row.values[irel]);
      max_distortion = std::max(max_distortion, row.values[idist]);
    }
  }
  const auto r = sweep::run_scenario(sweep::preset("appendix-arnold-diff"), {1, c.opts.profile});
  const auto& out = r.config.outputs;
  const auto irel = std::find(out.begin(), out.end(), "S_rel_diff") - out.begin();
  const auto idist = std::find(out.begin(), out.end(), "distortion") - out.begin();
  failed += r.failed;
  double region_worst = 0.0;
  std::size_t region = 0;
  for (const auto& row : r.rows) {
    if (row.failed || row.values[idist] >= 0.1) continue;
    ++region;
    region_worst = std::max(region_worst, row.values[irel]);
  }
  const bool ok = failed == 0 && max_distortion < 0.1 && slice_worst <= c.band(0.10) &&
                  region_worst <= c.band(0.12) && region > 0;
  return {ok,
          "slices max " + pct(slice_worst) + " (max distortion " + fmt(max_distortion) +
              "); eps region max " + pct(region_worst) + " over " + std::to_string(region) +
              " points",
          "slices <= " + pct(c.band(0.1)) + " with distortion < 0.1; region <= " +
              pct(c.band(0.12))};
}

inline Outcome sync_bound(const Ctx& c) {
  double best = 0.0, at_k = 0.0, at_w = 0.0;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const double k = 0.5 * i, w = 0.5 * j;
      const double s = sync_measure(solve(params(1e4, k, 0, w))).S;
      if (s > best) best = s, at_k = k, at_w = w;
    }
  const double bound = 1.0 / (2.0 * std::sqrt(2.0)) + 0.01;
  return {best <= bound,
          "max S " + fmt(best) + " at kappa " + fmt(at_k) + ", Omega " + fmt(at_w),
          "<= " + fmt(bound)};
}

inline Outcome noise_boost(const Ctx& c) {
  auto s_th = [](double k) {
    SystemParams p = params(100.0, k, 0, 0);
    p.drive = analytic::threshold_drive(p, 0.1);
    return sync_measure(solve(p)).S;
  };
  const double s0 = s_th(0.0), s05 = s_th(0.5);

  SystemParams p = params(1e4, 0, 0, 0);
  p.drive = analytic::threshold_drive(p, 0.1);
  const double fd = ds_dkappa(p);
  const double formula = analytic::boost_analysis(p).dS_dkappa_at_zero;
  const double rel = std::abs(fd / formula - 1.0);
  const bool ok = s05 > s0 && fd > 0.0 && rel <= c.band(0.05);
  return {ok,
          "S(0) " + fmt(s0) + ", S(0.5) " + fmt(s05) + "; dS/dkappa fd " + fmt(fd) +
              " vs formula " + fmt(formula) + " (" + pct(rel) + ")",
          "S(0.5) > S(0); fd > 0 within " + pct(c.band(0.05)) + " of formula"};
}

inline Outcome boost_impossible(const Ctx&) {
  double worst = -1e300;
  for (double w : {0.1, 0.5, 1.0}) worst = std::max(worst, ds_dkappa(params(0.5, 0, 0, w)));
  return {worst <= 0.0, "max dS/dkappa over Omega {0.1, 0.5, 1} " + fmt(worst), "<= 0"};
}

inline Outcome threshold_bound(const Ctx&) {
  bool ok = true;
  std::string bad;
  for (double k : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    const SystemParams p = params(100.0, k, 0, 0);
    const double b = (1.0 + k) / (2.0 * (3.0 + k));
    auto throws = [&](double eps) {
      try {
        analytic::threshold_drive(p, eps);
        return false;
      } catch (const UnattainableDistortion&) {
        return true;
      }
    };
    const bool below = !throws(b * (1.0 - 1e-9));
    const bool at = throws(b);
    const bool above = throws(b * (1.0 + 1e-9));
    if (!(below && at && above)) {
      ok = false;
      bad += " kappa " + fmt(k);
    }
  }
  const double b0 = analytic::distortion_bound(params(1.0, 0, 0, 0));
  ok = ok && std::abs(b0 - 1.0 / 6.0) < 1e-12;
  return {ok, "bound(kappa=0) " + fmt(b0) + (bad.empty() ? "; errors exactly at bound" : ";" + bad),
          "1/6 within 1e-12; error iff eps >= bound"};
}

inline Outcome mu_independence(const Ctx& c) {
  const SystemParams weak = params(1e4, 1, 1, 0.05);
  const SystemParams strong = params(1e4, 1, 1, 0.5);
  const double m1 = sync_measure(solve(weak)).mu;
  const double m2 = sync_measure(solve(strong)).mu;
  const double printed = analytic::printed_mean_direction(weak);
  const double spread = analytic::distance_mod_pi(m1, m2);
  const double d1 = analytic::distance_mod_pi(m1, -printed);
  const double d2 = analytic::distance_mod_pi(m2, -printed);
  const double tol = c.band(1e-2);
  return {std::abs(m1 - m2) < tol && d1 < tol && d2 < tol,
          "mu " + fmt(m1) + " / " + fmt(m2) + " (spread " + fmt(std::abs(m1 - m2)) +
              "), arctan form mismatch " + fmt(std::max(d1, d2)),
          "< " + fmt(tol) + " rad"};
}

inline Outcome cardioid_form(const Ctx& c) {
  const SystemParams p = params(1e4, 1, 0.5, 0.5);
  const DensityMatrix rho = solve(p);
  const analytic::ClosedSync cs = analytic::sync_closed(p, analytic::SyncLimit::deep_quantum_limit);
  double worst = 0.0;
  for (const PhaseSample& s : phase_distribution(rho, 1024))
    worst = std::max(worst, std::abs(s.p - cardioid(s.phi, cs.S, cs.mu)));
  const double ref = 1.0 / (2.0 * std::numbers::pi);
  return {worst < c.band(0.02) * ref, "max |P - cardioid| " + pct(worst / ref) + " of 1/2pi",
          "< " + pct(c.band(0.02)) + " of 1/2pi"};
}

inline Outcome mrl_oracle(const Ctx&) {
  std::mt19937_64 rng(20260);
  const int dims[] = {4, 8, 16};
  const int k = 4096;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int d = dims[i % 3];
    const Matrix m = random_density(rng, d);
    const DensityMatrix rho = DensityMatrix::validated(m);
    // Brute-force P(phi) from the full double sum, then the first circular moment.
    Complex moment = 0.0;
    for (int j = 0; j < k; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / k;
      Complex p = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) p += std::polar(1.0, (b - a) * phi) * m(a, b);
      moment += std::polar(1.0, phi) * p.real() / static_cast<double>(k);
    }
    worst = std::max(worst, std::abs(std::abs(moment) - sync_measure(rho).S));
  }
  return {worst < 1e-8, "max |S - MRL| over 50 states " + fmt(worst), "< 1e-08"};
}

inline Outcome squeeze_crossover(const Ctx& c) {
  const auto r = sweep::run_scenario(sweep::preset("fig4e-crossover"), {1, c.opts.profile});
  const auto& out = r.config.outputs;
  const auto ih = std::find(out.begin(), out.end(), "Delta_obs_harmonic") - out.begin();
  const auto is = std::find(out.begin(), out.end(), "Delta_obs_squeeze") - out.begin();
  if (r.failed) return {false, std::to_string(r.failed) + " failed rows", "no failures"};
  std::vector<double> g, h, s;
  for (const auto& row : r.rows) {
    g.push_back(row.point.at(sweep::Param::gamma2_ratio));
    h.push_back(std::abs(row.values[ih]));
    s.push_back(std::abs(row.values[is]));
  }
  const double hmax = *std::max_element(h.begin(), h.end());
  const double hmin = *std::min_element(h.begin(), h.end());
  bool monotone = true;
  for (std::size_t i = 1; i < s.size(); ++i) monotone = monotone && s[i] <= s[i - 1];
  const double ratio = s.back() / s.front();
  double cross = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double a = s[i - 1] - h[i - 1], b = s[i] - h[i];
    if (a > 0.0 && b <= 0.0) {
      const double t = a / (a - b);
      cross = std::exp(std::log(g[i - 1]) + t * (std::log(g[i]) - std::log(g[i - 1])));
      break;
    }
  }
  const bool ok = hmax / hmin < 3.0 && monotone && ratio < 0.05 && cross >= 8.0 && cross <= 20.0;
  return {ok,
          "harmonic max/min " + fmt(hmax / hmin) + "; squeeze " +
              (monotone ? "monotone" : "not monotone") + ", end/start " + fmt(ratio) +
              "; crossing at gamma2 " + fmt(cross),
          "< 3; monotone; < 0.05; crossing in [8, 20]"};
}

// Integral of S(omega) over the real line via omega = s tan(theta).
inline double total_power(const SpectralDecomposition& dec, double scale, int n = 400001) {
  const double lim = std::numbers::pi / 2.0;
  const double h = 2.0 * lim / (n + 1);
  double acc = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double th = -lim + i * h;
    const double c = std::cos(th);
    acc += dec.density(scale * std::tan(th)) * scale / (c * c);
  }
  return acc * h;
}

inline Outcome spectrum_crossval(const Ctx& c) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_fft = 0.0, worst_sum = 0.0;
  for (int draw = 0; draw < 10; ++draw) {
    const double g2 = std::pow(10.0, 2.0 * u(rng));
    const SystemParams p = params(g2, u(rng), -2.0 + 4.0 * u(rng), u(rng), 0.5 * u(rng));
    const Liouvillian l = build_liouvillian(p, choose_dim(p).dim);
    const DensityMatrix rho = steady_state(l).rho;
    const auto dec = decompose(l, rho);
    if (!dec) return {false, "decomposition rejected at draw " + std::to_string(draw), ""};
    const double step = std::min(0.01, 0.95 * dec->narrowest_rate() / 10.0);
    const FrequencyGrid grid = standard_grid(p, step);
    SpectrumOptions eo, fo;
    fo.force_fft = true;
    const SpectrumResult es = power_spectrum(l, rho, grid, eo);
    const SpectrumResult fs = power_spectrum(l, rho, grid, fo);
    double peak = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < es.density.size(); ++i) {
      peak = std::max(peak, es.density[i]);
      diff = std::max(diff, std::abs(es.density[i] - fs.density[i]));
    }
    worst_fft = std::max(worst_fft, diff / peak);
    const double expected = 2.0 * std::numbers::pi * es.incoherent_weight;
    const double total = total_power(*dec, 10.0);
    worst_sum = std::max(worst_sum, std::abs(total / expected - 1.0));
  }
  return {worst_fft <= c.band(0.01) && worst_sum <= c.band(0.02),
          "max |eigen - fft| " + pct(worst_fft) + " of peak; sum rule max " + pct(worst_sum),
          "<= " + pct(c.band(0.01)) + "; <= " + pct(c.band(0.02))};
}

inline Outcome determinism(const Ctx& c) {
  bool ok = true;
  std::string msg;
  for (const char* name : {"fig1", "fig2a"}) {
    const auto a = sweep::run_scenario(sweep::preset(name), {1, c.opts.profile});
    const auto b = sweep::run_scenario(sweep::preset(name), {3, c.opts.profile});
    const bool same = a.csv == b.csv;
    ok = ok && same;
    msg += std::string(msg.empty() ? "" : "; ") + name + (same ? " identical" : " differs") + " (" +
           std::to_string(a.csv.size()) + " bytes)";
  }
  return {ok, msg, "byte-identical across runs and worker counts"};
}

struct Check {
  const char* id;
  const char* title;
  Outcome (*fn)(const Ctx&);
};

inline const std::vector<Check>& checks() {
  static const std::vector<Check> all = {
      {"structural-trace", "Liouvillian preserves trace", structural_trace},
      {"structural-hermiticity", "Liouvillian preserves Hermiticity", structural_hermiticity},
      {"undriven-dql", "Undriven deep-quantum limit", undriven_dql},
      {"noise-amplitude", "Noise dependence of the undriven amplitude", eq6_noise},
      {"regime-validity", "Amplitude regime validity", fig1_regimes},
      {"arnold-slices", "Arnold slices against the noiseless closed form", arnold_slices},
      {"sync-bound", "Synchronization bound", sync_bound},
      {"noise-boost", "Noise boost", noise_boost},
      {"boost-impossible", "Boost impossibility below gamma2 = 3/4", boost_impossible},
      {"threshold-bound", "Threshold drive bound", threshold_bound},
      {"mu-independence", "Mean direction drive-independence", mu_independence},
      {"cardioid", "Cardioid phase distribution", cardioid_form},
      {"mrl-oracle", "MRL oracle equivalence", mrl_oracle},
      {"squeeze-crossover", "Squeezing crossover", squeeze_crossover},
      {"spectrum-crossval", "Spectrum cross-validation", spectrum_crossval},
      {"determinism", "Deterministic CSV", determinism},
  };
  return all;
}

}  // namespace detail

inline std::vector<std::string> check_ids() {
  std::vector<std::string> ids;
  for (const auto& c : detail::checks()) ids.emplace_back(c.id);
  return ids;
}

inline std::vector<CheckResult> run_verification(const VerifyOptions& opts = {}) {
  for (const std::string& id : opts.only) {
    const auto ids = check_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end())
      throw ConfigError("unknown check '" + id + "'");
  }
  std::vector<CheckResult> out;
  const detail::Ctx ctx{opts};
  for (const auto& c : detail::checks()) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), c.id) == opts.only.end())
      continue;
    CheckResult r{c.id, c.title};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const detail::Outcome o = c.fn(ctx);
      r.passed = o.passed;
      r.measured = o.measured;
      r.expected = o.expected;
    } catch (const std::exception& e) {
      r.passed = false;
      r.measured = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (opts.on_result) opts.on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

/// One table line: status, id, measured | expected.
inline std::string format_line(const CheckResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%-4s  %-22s %7.2fs  ", r.passed ? "PASS" : "FAIL", r.id.c_str(),
                r.seconds);
  return std::string(head) + r.measured + " | expected " + r.expected;
}

inline bool all_passed(const std::vector<CheckResult>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const CheckResult& r) { return r.passed; });
}

}  // namespace qvdp::verify
