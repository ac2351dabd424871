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
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qvdp/analytic.hpp"
#include "qvdp/error.hpp"
#include "qvdp/liouvillian.hpp"
#include "qvdp/observables.hpp"
#include "qvdp/spectrum.hpp"
#include "qvdp/sweep/scenario.hpp"
#include "qvdp/sweep/tolerance.hpp"

namespace qvdp::sweep {

struct SweepRow {
  Point point;
  std::vector<double> values;  // one per requested output
  int dim_used = 0;
  double residual = 0.0;
  bool failed = false;
  std::string error;
};

struct RunOptions {
  int workers = 1;
  ToleranceProfile profile{};
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct RunResult {
  ScenarioConfig config;
  std::vector<SweepRow> rows;
  std::size_t failed = 0;
  std::string csv;

  /// More than 10% of the grid failed.
  bool excessive_failures() const { return failed * 10 > rows.size(); }
};

// ---- csv formatting ----

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace detail {

// Comment text stays on one line.
inline std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

struct Solved {
  Liouvillian l;
  SteadyState ss;
};

class PointEvaluator {
 public:
  PointEvaluator(const ScenarioConfig& cfg, const ToleranceProfile& tol, SystemParams p)
      : cfg_(cfg), tol_(tol), p_(p) {}

  const SystemParams& params() const { return p_; }
  int dim_used() const { return dim_used_; }
  double residual() const { return residual_; }

  double value(const std::string& name) {
    using namespace qvdp::analytic;
    const SystemParams& p = p_;
    if (name == "N_numeric") return amplitude(driven().ss.rho);
    if (name == "S_numeric") return sync_measure(driven().ss.rho).S;
    if (name == "mu_numeric") {
      const SyncMeasure m = sync_measure(driven().ss.rho);
      if (!m.phase_defined) throw NotApplicable("mu undefined: S below threshold");
      return m.mu;
    }
    if (name == "coh01") return coherence(driven().ss.rho, 0, 1);
    if (name == "coh02") return coherence(driven().ss.rho, 0, 2);
    if (name == "coh12") return coherence(driven().ss.rho, 1, 2);
    if (name == "N0_numeric") return amplitude(undriven().ss.rho);
    if (name == "Delta_N") return amplitude(driven().ss.rho) - amplitude(undriven().ss.rho);
    if (name == "distortion") {
      const double n0 = amplitude(undriven().ss.rho);
      return std::abs(amplitude(driven().ss.rho) - n0) / n0;
    }
    if (name == "N_eq4") return amplitude_closed(p, AmplitudeModel::deep_quantum_limit);
    if (name == "N_eq5") return amplitude_closed(p, AmplitudeModel::undriven_ansatz);
    if (name == "N_eq6") return amplitude_closed(p, AmplitudeModel::undriven_deep_quantum_limit);
    if (name == "N_sse") return amplitude_closed(p, AmplitudeModel::system_size_expansion);
    if (name == "N_meanfield") return amplitude_closed(p, AmplitudeModel::mean_field);
    if (name == "S_ansatz") return ansatz_elements(p).sync();
    if (name == "S_dql") return sync_closed(p, SyncLimit::deep_quantum_limit).S;
    if (name == "S_noiseless") return sync_closed(p, SyncLimit::noiseless).S;
    if (name == "S_analytic") return s_analytic();
    if (name == "S_abs_diff") return std::abs(value("S_numeric") - s_analytic());
    if (name == "S_rel_diff") {
      const double ref = s_analytic();
      if (ref == 0.0) throw NotApplicable("S_rel_diff: analytical S is zero");
      return std::abs(value("S_numeric") - ref) / ref;
    }
    if (name == "mu_closed") {
      const ClosedSync c = sync_closed(p, SyncLimit::deep_quantum_limit);
      if (!c.phase_defined) throw NotApplicable("mu undefined: closed-form S is zero");
      return c.mu;
    }
    if (name == "Omega_th") return threshold_drive(p, cfg_.epsilon.value_or(0.1));
    if (name == "delta_obs") return spectrum(p).delta_obs;
    if (name == "Delta_obs") return relative(spectrum(p));
    SystemParams harmonic = p;
    harmonic.squeeze = 0.0;
    SystemParams squeeze = p;
    squeeze.drive = 0.0;
    if (name == "delta_obs_harmonic") return spectrum(harmonic).delta_obs;
    if (name == "Delta_obs_harmonic") return relative(spectrum(harmonic));
    if (name == "delta_obs_squeeze") return spectrum(squeeze).delta_obs;
    if (name == "Delta_obs_squeeze") return relative(spectrum(squeeze));
    throw ConfigError("unknown output '" + name + "'");
  }

 private:
  double s_analytic() const {
    using namespace qvdp::analytic;
    if (p_.loss == 0.0) return sync_closed(p_, SyncLimit::noiseless).S;
    return ansatz_elements(p_).sync();
  }

  static double relative(const SpectrumResult& r) {
    if (!r.delta_rel_defined) throw NotApplicable("Delta_obs undefined at delta = 0");
    return r.delta_rel;
  }

  DimPolicy policy() const {
    DimPolicy pol;
    pol.tol = tol_.dim_tol;
    return pol;
  }

  FockDim dim_for(const SystemParams& p) const {
    if (cfg_.dim_override) return FockDim(*cfg_.dim_override);
    return choose_dim(p, policy()).dim;
  }

  Solved solve(const SystemParams& p) {
    Liouvillian l = build_liouvillian(p, dim_for(p));
    SteadyState ss = steady_state(l, policy().solver);
    note(l.dim().value(), ss.residual);
    return Solved{std::move(l), std::move(ss)};
  }

  void note(int dim, double residual) {
    dim_used_ = std::max(dim_used_, dim);
    residual_ = std::max(residual_, residual);
  }

  const Solved& driven() {
    if (!driven_) driven_.emplace(solve(p_));
    return *driven_;
  }

  const Solved& undriven() {
    if (!undriven_) {
      SystemParams free = p_;
      free.drive = 0.0;
      free.squeeze = 0.0;
      undriven_.emplace(solve(free));
    }
    return *undriven_;
  }

  SpectrumResult spectrum(const SystemParams& p) {
    SpectrumOptions o;
    o.dim_policy = policy();
    o.refine_grid = true;
    const Liouvillian l = build_liouvillian(p, dim_for(p));
    const SteadyState ss = steady_state(l, o.dim_policy.solver);
    note(l.dim().value(), ss.residual);
    return power_spectrum(l, ss.rho, standard_grid(p, cfg_.spectrum_step), o);
  }

  const ScenarioConfig& cfg_;
  const ToleranceProfile& tol_;
  SystemParams p_;
  std::optional<Solved> driven_;
  std::optional<Solved> undriven_;
  int dim_used_ = 0;
  double residual_ = 0.0;
};

inline SweepRow evaluate_point(const ScenarioConfig& cfg, const ToleranceProfile& tol,
                               const Point& pt) {
  SweepRow row;
  row.point = pt;
  row.values.assign(cfg.outputs.size(), std::numeric_limits<double>::quiet_NaN());
  try {
    SystemParams p = to_system_params(pt);
    if (cfg.drive_mode == DriveMode::threshold) {
      p.drive = analytic::threshold_drive(p, *cfg.epsilon);
      row.point[Param::Omega_ratio] = p.drive;
    }
    p.validate();
    PointEvaluator ev(cfg, tol, p);
    for (std::size_t i = 0; i < cfg.outputs.size(); ++i) {
      row.values[i] = ev.value(cfg.outputs[i]);
      if (!std::isfinite(row.values[i])) throw Error(cfg.outputs[i] + " is not finite");
    }
    row.dim_used = ev.dim_used();
    row.residual = ev.residual();
    if (row.residual > tol.residual_max) {
      row.failed = true;
      row.error = "residual " + format_number(row.residual) + " above " +
                  format_number(tol.residual_max);
    }
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = one_line(e.what());
  }
  return row;
}

}  // namespace detail

inline std::vector<std::string> csv_columns(const ScenarioConfig& cfg) {
  std::vector<std::string> cols;
  for (Param p : kAllParams) cols.push_back(to_string(p));
  cols.insert(cols.end(), cfg.outputs.begin(), cfg.outputs.end());
  for (const char* c : {"dim_used", "residual", "failed", "error"}) cols.emplace_back(c);
  return cols;
}

inline std::string render_csv(const ScenarioConfig& cfg, const ToleranceProfile& tol,
                              const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "# preset: " << detail::one_line(cfg.name) << '\n';
  out << "# description: " << detail::one_line(cfg.description) << '\n';
  out << "# reconstructed: " << (cfg.reconstructed ? "true" : "false") << '\n';
  out << "# config_hash: fnv1a64:" << config_hash(cfg) << '\n';
  out << "# tolerance: profile=" << tol.name << " band_scale=" << format_number(tol.band_scale)
      << " residual_max=" << format_number(tol.residual_max)
      << " dim_tol=" << format_number(tol.dim_tol) << '\n';
  out << "# rows: " << rows.size() << '\n';

  const auto cols = csv_columns(cfg);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const SweepRow& r : rows) {
    bool first = true;
    for (Param p : kAllParams) {
      out << (first ? "" : ",") << format_number(r.point.at(p));
      first = false;
    }
    for (double v : r.values) out << ',' << format_number(v);
    out << ',' << r.dim_used << ',' << format_number(r.residual) << ',' << (r.failed ? 1 : 0)
        << ',' << csv_field(r.error) << '\n';
  }
  return out.str();
}

/// Evaluates every grid point on a bounded worker pool; rows come back in grid order.
inline RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {}) {
  cfg.validate();
  if (opts.workers < 1) throw ConfigError("run_scenario: workers must be >= 1");
  const std::vector<Point> pts = grid_points(cfg);

  RunResult res;
  res.config = cfg;
  res.rows.resize(pts.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mu;
  auto work = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) {
      res.rows[i] = detail::evaluate_point(cfg, opts.profile, pts[i]);
      const std::size_t d = ++done;
      if (opts.progress) {
        std::lock_guard lock(progress_mu);
        opts.progress(d, pts.size());
      }
    }
  };
  const int n = std::min<int>(opts.workers, static_cast<int>(pts.size()));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
  }

  res.failed = static_cast<std::size_t>(
      std::count_if(res.rows.begin(), res.rows.end(), [](const SweepRow& r) { return r.failed; }));
  res.csv = render_csv(cfg, opts.profile, res.rows);
  return res;
}

/// Writes DIR/<name>.csv and returns the path.
inline std::filesystem::path write_csv(const RunResult& res, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  const auto path = dir / (res.config.name + ".csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << res.csv;
  return path;
}

}  // namespace qvdp::sweep
