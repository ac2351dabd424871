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
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "qvdp/error.hpp"
#include "qvdp/params.hpp"

namespace qvdp::sweep {

/// Sweepable parameters, all in units of the pump rate gamma1.
enum class Param { gamma2_ratio, kappa_ratio, delta_ratio, Omega_ratio, eta_ratio };

inline constexpr std::array<Param, 5> kAllParams = {Param::gamma2_ratio, Param::kappa_ratio,
                                                    Param::delta_ratio, Param::Omega_ratio,
                                                    Param::eta_ratio};

inline std::string to_string(Param p) {
  switch (p) {
    case Param::gamma2_ratio: return "gamma2_ratio";
    case Param::kappa_ratio: return "kappa_ratio";
    case Param::delta_ratio: return "delta_ratio";
    case Param::Omega_ratio: return "Omega_ratio";
    case Param::eta_ratio: return "eta_ratio";
  }
  return "?";
}

inline Param param_from_string(const std::string& s) {
  for (Param p : kAllParams)
    if (to_string(p) == s) return p;
  throw ConfigError("unknown parameter '" + s +
                    "' (valid: gamma2_ratio, kappa_ratio, delta_ratio, Omega_ratio, eta_ratio)");
}

enum class Scale { linear, log };

struct Axis {
  Param param = Param::gamma2_ratio;
  double min = 0.0;
  double max = 1.0;
  int n = 2;
  Scale scale = Scale::linear;

  std::vector<double> values() const {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / (n - 1);
      v[i] = scale == Scale::log ? min * std::pow(max / min, t) : min + (max - min) * t;
    }
    v.front() = min;
    v.back() = max;
    return v;
  }
};

enum class DriveMode { fixed, threshold };

struct ScenarioConfig {
  std::string name;
  std::string description;
  bool reconstructed = false;
  std::vector<Axis> axes;         // outer axis first
  std::map<Param, double> fixed;  // unswept parameters; missing ones are 0
  std::vector<std::string> outputs;
  std::optional<double> epsilon;
  std::optional<int> dim_override;
  DriveMode drive_mode = DriveMode::fixed;  // threshold: Omega = Omega_th(kappa, delta, epsilon)
  double spectrum_step = 0.005;

  std::size_t row_count() const {
    std::size_t n = 1;
    for (const Axis& a : axes) n *= static_cast<std::size_t>(a.n);
    return n;
  }

  bool swept(Param p) const {
    return std::any_of(axes.begin(), axes.end(), [&](const Axis& a) { return a.param == p; });
  }

  void validate() const;
};

/// Observable columns a scenario may request.
inline const std::vector<std::string>& output_names() {
  static const std::vector<std::string> names = {
      "N_numeric", "S_numeric", "mu_numeric", "coh01", "coh02", "coh12",
      "N0_numeric", "Delta_N", "distortion",
      "N_eq4", "N_eq5", "N_eq6", "N_sse", "N_meanfield",
      "S_ansatz", "S_dql", "S_noiseless", "S_analytic", "S_abs_diff", "S_rel_diff", "mu_closed",
      "Omega_th",
      "delta_obs", "Delta_obs", "delta_obs_harmonic", "Delta_obs_harmonic",
      "delta_obs_squeeze", "Delta_obs_squeeze"};
  return names;
}

inline void ScenarioConfig::validate() const {
  const std::string where = "scenario '" + name + "': ";
  if (name.empty()) throw ConfigError("scenario: name must not be empty");
  if (axes.empty() || axes.size() > 2) throw ConfigError(where + "need 1 or 2 sweep axes");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const Axis& a = axes[i];
    const std::string an = to_string(a.param);
    if (a.n < 2) throw ConfigError(where + "axis " + an + " needs n >= 2");
    if (!std::isfinite(a.min) || !std::isfinite(a.max))
      throw ConfigError(where + "axis " + an + " bounds must be finite");
    if (a.scale == Scale::log && !(a.min > 0.0 && a.max > 0.0))
      throw ConfigError(where + "log axis " + an + " needs min > 0");
    if (fixed.count(a.param)) throw ConfigError(where + an + " is both swept and fixed");
    for (std::size_t k = 0; k < i; ++k)
      if (axes[k].param == a.param) throw ConfigError(where + an + " swept twice");
  }
  for (const auto& [p, v] : fixed)
    if (!std::isfinite(v)) throw ConfigError(where + to_string(p) + " must be finite");
  if (outputs.empty()) throw ConfigError(where + "no outputs requested");
  const auto& known = output_names();
  for (const std::string& o : outputs) {
    if (std::find(known.begin(), known.end(), o) == known.end())
      throw ConfigError(where + "unknown output '" + o + "'");
  }
  if (std::set<std::string>(outputs.begin(), outputs.end()).size() != outputs.size())
    throw ConfigError(where + "duplicate output");
  if (epsilon && !(*epsilon > 0.0)) throw ConfigError(where + "epsilon must be > 0");
  if (dim_override && *dim_override < 3) throw ConfigError(where + "dim_override must be >= 3");
  if (drive_mode == DriveMode::threshold) {
    if (!epsilon) throw ConfigError(where + "threshold drive mode needs epsilon");
    if (swept(Param::Omega_ratio) || fixed.count(Param::Omega_ratio))
      throw ConfigError(where + "threshold drive mode sets Omega_ratio itself");
  }
  if (!(spectrum_step > 0.0)) throw ConfigError(where + "spectrum_step must be > 0");
}

/// Parameter values of one grid point.
using Point = std::map<Param, double>;

inline SystemParams to_system_params(const Point& pt) {
  auto get = [&](Param p) {
    auto it = pt.find(p);
    return it == pt.end() ? 0.0 : it->second;
  };
  SystemParams s;
  s.pump = 1.0;
  s.two_photon_loss = get(Param::gamma2_ratio);
  s.loss = get(Param::kappa_ratio);
  s.detuning = get(Param::delta_ratio);
  s.drive = get(Param::Omega_ratio);
  s.squeeze = get(Param::eta_ratio);
  return s;
}

/// Grid points in row order: first axis outermost.
inline std::vector<Point> grid_points(const ScenarioConfig& c) {
  std::vector<Point> pts(1);
  for (Param p : kAllParams)
    if (!c.swept(p)) pts[0][p] = c.fixed.count(p) ? c.fixed.at(p) : 0.0;
  for (const Axis& a : c.axes) {
    std::vector<Point> next;
    next.reserve(pts.size() * a.n);
    for (const Point& base : pts)
      for (double v : a.values()) {
        Point q = base;
        q[a.param] = v;
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  return pts;
}

// ---- json ----

inline nlohmann::json to_json(const ScenarioConfig& c) {
  using nlohmann::json;
  json j;
  j["name"] = c.name;
  j["description"] = c.description;
  j["reconstructed"] = c.reconstructed;
  j["axes"] = json::array();
  for (const Axis& a : c.axes) {
    j["axes"].push_back({{"param", to_string(a.param)},
                         {"min", a.min},
                         {"max", a.max},
                         {"n", a.n},
                         {"scale", a.scale == Scale::log ? "log" : "linear"}});
  }
  j["fixed"] = json::object();
  for (const auto& [p, v] : c.fixed) j["fixed"][to_string(p)] = v;
  j["outputs"] = c.outputs;
  if (c.epsilon) j["epsilon"] = *c.epsilon;
  if (c.dim_override) j["dim_override"] = *c.dim_override;
  j["drive_mode"] = c.drive_mode == DriveMode::threshold ? "threshold" : "fixed";
  j["spectrum_step"] = c.spectrum_step;
  return j;
}

inline ScenarioConfig scenario_from_json(const nlohmann::json& j) {
  ScenarioConfig c;
  try {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    static const std::vector<std::string> known = {
        "name", "description", "reconstructed", "axes", "fixed", "outputs",
        "epsilon", "dim_override", "drive_mode", "spectrum_step"};
    for (const auto& [k, v] : j.items()) {
      if (std::find(known.begin(), known.end(), k) == known.end())
        throw ConfigError("config: unknown key '" + k + "'");
    }
    c.name = j.at("name").get<std::string>();
    c.description = j.value("description", std::string{});
    c.reconstructed = j.value("reconstructed", false);
    for (const auto& ja : j.at("axes")) {
      Axis a;
      a.param = param_from_string(ja.at("param").get<std::string>());
      a.min = ja.at("min").get<double>();
      a.max = ja.at("max").get<double>();
      a.n = ja.at("n").get<int>();
      const std::string scale = ja.value("scale", std::string("linear"));
      if (scale == "log") a.scale = Scale::log;
      else if (scale == "linear") a.scale = Scale::linear;
      else throw ConfigError("config: axis scale must be linear or log, got '" + scale + "'");
      c.axes.push_back(a);
    }
    if (j.contains("fixed")) {
      for (const auto& [k, v] : j.at("fixed").items()) c.fixed[param_from_string(k)] = v.get<double>();
    }
    c.outputs = j.at("outputs").get<std::vector<std::string>>();
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("dim_override")) c.dim_override = j.at("dim_override").get<int>();
    const std::string mode = j.value("drive_mode", std::string("fixed"));
    if (mode == "threshold") c.drive_mode = DriveMode::threshold;
    else if (mode != "fixed") throw ConfigError("config: drive_mode must be fixed or threshold");
    c.spectrum_step = j.value("spectrum_step", 0.005);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return scenario_from_json(j);
}

/// 64-bit FNV-1a of the canonical (sorted-key, compact) json.
inline std::string config_hash(const ScenarioConfig& c) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : to_json(c).dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qvdp::sweep
