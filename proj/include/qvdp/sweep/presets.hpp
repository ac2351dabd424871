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

#include <string>
#include <vector>

#include "qvdp/error.hpp"
#include "qvdp/sweep/scenario.hpp"

namespace qvdp::sweep {

namespace detail {

inline Axis lin(Param p, double lo, double hi, int n) { return {p, lo, hi, n, Scale::linear}; }
inline Axis logax(Param p, double lo, double hi, int n) { return {p, lo, hi, n, Scale::log}; }

inline ScenarioConfig arnold_tongue(std::string name, std::string description,
                                    std::vector<std::string> outputs) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.description = std::move(description);
  c.reconstructed = true;
  c.axes = {lin(Param::Omega_ratio, 0.1, 2.0, 20), lin(Param::delta_ratio, -2.0, 2.0, 41)};
  c.fixed = {{Param::gamma2_ratio, 100.0}, {Param::kappa_ratio, 0.0}, {Param::eta_ratio, 0.0}};
  c.outputs = std::move(outputs);
  c.epsilon = 0.1;
  return c;
}

inline ScenarioConfig arnold_slices(std::string name, double gamma2) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.description = "Arnold tongue slices: S against detuning for three drive strengths";
  c.reconstructed = true;
  c.axes = {lin(Param::Omega_ratio, 0.1, 0.5, 3), lin(Param::delta_ratio, -2.0, 2.0, 41)};
  c.fixed = {{Param::gamma2_ratio, gamma2}, {Param::kappa_ratio, 0.0}, {Param::eta_ratio, 0.0}};
  c.outputs = {"S_numeric", "S_noiseless", "S_dql", "S_abs_diff", "S_rel_diff", "N_numeric",
               "distortion"};
  c.epsilon = 0.1;
  return c;
}

inline ScenarioConfig sync_map(std::string name, double gamma2) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.description = "S over drive strength and noise, with the threshold drive overlay";
  c.reconstructed = true;
  c.axes = {lin(Param::kappa_ratio, 0.0, 5.0, 21), lin(Param::Omega_ratio, 0.0, 3.0, 21)};
  c.fixed = {{Param::gamma2_ratio, gamma2}, {Param::delta_ratio, 0.0}, {Param::eta_ratio, 0.0}};
  c.outputs = {"S_numeric", "N_numeric", "Omega_th"};
  c.epsilon = 0.1;
  return c;
}

inline std::vector<ScenarioConfig> build_presets() {
  std::vector<ScenarioConfig> out;

  ScenarioConfig fig1;
  fig1.name = "fig1";
  fig1.description = "Undriven noiseless amplitude against damping ratio with analytical comparators";
  fig1.axes = {logax(Param::gamma2_ratio, 1e-2, 1e3, 21)};
  fig1.fixed = {{Param::kappa_ratio, 0.0}, {Param::delta_ratio, 0.0}, {Param::Omega_ratio, 0.0},
                {Param::eta_ratio, 0.0}};
  fig1.outputs = {"N_numeric", "N_meanfield", "N_sse", "N_eq5"};
  out.push_back(fig1);

  out.push_back(arnold_slices("fig2a", 100.0));
  out.push_back(arnold_slices("fig2b", 1000.0));
  out.push_back(sync_map("fig3a", 1.0));
  out.push_back(sync_map("fig3b", 100.0));

  ScenarioConfig coh;
  coh.name = "fig4ab-coherences";
  coh.description = "Coherences and S against noise at threshold drive, resonant";
  coh.axes = {logax(Param::gamma2_ratio, 1.0, 100.0, 2), lin(Param::kappa_ratio, 0.0, 5.0, 26)};
  coh.fixed = {{Param::delta_ratio, 0.0}, {Param::eta_ratio, 0.0}};
  coh.outputs = {"coh01", "coh02", "coh12", "S_numeric", "Omega_th"};
  coh.epsilon = 0.1;
  coh.drive_mode = DriveMode::threshold;
  out.push_back(coh);

  ScenarioConfig h;
  h.name = "fig4c-harmonic-entrainment";
  h.description = "Spectral peak against harmonic drive strength";
  h.reconstructed = true;
  h.axes = {logax(Param::gamma2_ratio, 1.0, 100.0, 2), lin(Param::Omega_ratio, 0.0, 2.0, 21)};
  h.fixed = {{Param::kappa_ratio, 0.0}, {Param::delta_ratio, 1.0}, {Param::eta_ratio, 0.0}};
  h.outputs = {"delta_obs", "Delta_obs"};
  out.push_back(h);

  ScenarioConfig sq;
  sq.name = "fig4d-squeeze-entrainment";
  sq.description = "Spectral peak against squeeze drive strength";
  sq.reconstructed = true;
  sq.axes = {logax(Param::gamma2_ratio, 1.0, 1000.0, 4), lin(Param::eta_ratio, 0.0, 2.0, 21)};
  sq.fixed = {{Param::kappa_ratio, 0.0}, {Param::delta_ratio, 1.0}, {Param::Omega_ratio, 0.0}};
  sq.outputs = {"delta_obs", "Delta_obs"};
  out.push_back(sq);

  ScenarioConfig x;
  x.name = "fig4e-crossover";
  x.description = "Relative entrainment of harmonic and squeeze drives against damping ratio";
  x.reconstructed = true;
  x.axes = {logax(Param::gamma2_ratio, 1.0, 1000.0, 25)};
  x.fixed = {{Param::kappa_ratio, 0.0}, {Param::delta_ratio, 1.0}, {Param::Omega_ratio, 1.1},
             {Param::eta_ratio, 1.1}};
  x.outputs = {"delta_obs_harmonic", "Delta_obs_harmonic", "delta_obs_squeeze",
               "Delta_obs_squeeze"};
  out.push_back(x);

  out.push_back(arnold_tongue("appendix-arnold-diff",
                              "Difference between numerical and analytical Arnold tongues",
                              {"S_numeric", "S_noiseless", "S_abs_diff", "S_rel_diff",
                               "distortion"}));
  out.push_back(arnold_tongue("appendix-distortion", "Limit-cycle distortion over the Arnold tongue",
                              {"N_numeric", "N0_numeric", "Delta_N", "distortion"}));
  out.push_back(arnold_tongue("appendix-coh02", "|rho02| over the Arnold tongue",
                              {"coh02", "distortion"}));
  out.push_back(arnold_tongue("appendix-coh12", "|rho12| over the Arnold tongue",
                              {"coh12", "distortion"}));
  return out;
}

}  // namespace detail

inline const std::vector<ScenarioConfig>& presets() {
  static const std::vector<ScenarioConfig> all = detail::build_presets();
  return all;
}

inline std::vector<std::string> list_presets() {
  std::vector<std::string> names;
  for (const ScenarioConfig& c : presets()) names.push_back(c.name);
  return names;
}

inline const ScenarioConfig& preset(const std::string& name) {
  for (const ScenarioConfig& c : presets())
    if (c.name == name) return c;
  std::string valid;
  for (const std::string& n : list_presets()) valid += (valid.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset '" + name + "' (valid: " + valid + ")");
}

}  // namespace qvdp::sweep
