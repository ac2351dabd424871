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

#include <set>
#include <sstream>
#include <string>

#include "qvdp/sweep/presets.hpp"
#include "qvdp/sweep/runner.hpp"

namespace qvdp::sweep {
namespace {

ScenarioConfig small() {
  ScenarioConfig c;
  c.name = "small";
  c.axes = {{Param::Omega_ratio, 0.1, 0.3, 3, Scale::linear},
            {Param::delta_ratio, -1.0, 1.0, 4, Scale::linear}};
  c.fixed = {{Param::gamma2_ratio, 50.0}};
  c.outputs = {"N_numeric", "S_numeric", "S_noiseless", "S_rel_diff", "coh01"};
  return c;
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

TEST(Axis, LinearAndLogValues) {
  const Axis lin{Param::delta_ratio, -2.0, 2.0, 5, Scale::linear};
  EXPECT_EQ(lin.values(), (std::vector<double>{-2.0, -1.0, 0.0, 1.0, 2.0}));
  const auto lg = Axis{Param::gamma2_ratio, 1e-2, 1e3, 21, Scale::log}.values();
  EXPECT_EQ(lg.front(), 1e-2);
  EXPECT_EQ(lg.back(), 1e3);
  EXPECT_NEAR(lg[4], 0.1, 1e-15);
}

TEST(Scenario, GridOrderIsOuterAxisMajor) {
  const auto pts = grid_points(small());
  ASSERT_EQ(pts.size(), 12u);
  EXPECT_EQ(pts[0].at(Param::Omega_ratio), 0.1);
  EXPECT_EQ(pts[1].at(Param::Omega_ratio), 0.1);
  EXPECT_EQ(pts[1].at(Param::delta_ratio), -1.0 + 2.0 / 3.0);
  EXPECT_EQ(pts[4].at(Param::Omega_ratio), 0.2);
  EXPECT_EQ(pts[11].at(Param::gamma2_ratio), 50.0);
  EXPECT_EQ(pts[11].at(Param::kappa_ratio), 0.0);
}

TEST(Scenario, ValidationErrors) {
  auto expect_bad = [](auto mutate) {
    ScenarioConfig c = small();
    mutate(c);
    EXPECT_THROW(c.validate(), ConfigError);
  };
  expect_bad([](ScenarioConfig& c) { c.axes.clear(); });
  expect_bad([](ScenarioConfig& c) { c.axes.push_back({Param::eta_ratio, 0, 1, 2, Scale::linear}); });
  expect_bad([](ScenarioConfig& c) { c.axes[0].n = 1; });
  expect_bad([](ScenarioConfig& c) { c.axes[0].scale = Scale::log; c.axes[0].min = 0.0; });
  expect_bad([](ScenarioConfig& c) { c.axes[1].param = Param::Omega_ratio; });
  expect_bad([](ScenarioConfig& c) { c.fixed[Param::delta_ratio] = 1.0; });
  expect_bad([](ScenarioConfig& c) { c.outputs.push_back("bogus"); });
  expect_bad([](ScenarioConfig& c) { c.outputs.clear(); });
  expect_bad([](ScenarioConfig& c) { c.dim_override = 2; });
  expect_bad([](ScenarioConfig& c) { c.drive_mode = DriveMode::threshold; });
  expect_bad([](ScenarioConfig& c) { c.name.clear(); });
}

TEST(Scenario, JsonRoundTripPreservesHash) {
  for (const ScenarioConfig& c : presets()) {
    const ScenarioConfig back = scenario_from_json(nlohmann::json::parse(to_json(c).dump(2)));
    EXPECT_EQ(config_hash(back), config_hash(c)) << c.name;
    EXPECT_EQ(back.row_count(), c.row_count());
  }
  ScenarioConfig other = small();
  other.fixed[Param::gamma2_ratio] = 51.0;
  EXPECT_NE(config_hash(other), config_hash(small()));
}

TEST(Scenario, JsonErrorsAreConfigErrors) {
  auto j = to_json(small());
  j["axes"][0]["scale"] = "cubic";
  EXPECT_THROW(scenario_from_json(j), ConfigError);
  j = to_json(small());
  j["surprise"] = 1;
  EXPECT_THROW(scenario_from_json(j), ConfigError);
  j = to_json(small());
  j.erase("outputs");
  EXPECT_THROW(scenario_from_json(j), ConfigError);
  j = to_json(small());
  j["fixed"]["gamma3_ratio"] = 1.0;
  EXPECT_THROW(scenario_from_json(j), ConfigError);
  EXPECT_THROW(load_scenario("/nonexistent/config.json"), ConfigError);
}

TEST(Presets, ThirteenNamed) {
  const auto names = list_presets();
  EXPECT_EQ(names.size(), 13u);
  const std::set<std::string> expected = {
      "fig1", "fig2a", "fig2b", "fig3a", "fig3b", "fig4ab-coherences",
      "fig4c-harmonic-entrainment", "fig4d-squeeze-entrainment", "fig4e-crossover",
      "appendix-arnold-diff", "appendix-distortion", "appendix-coh02", "appendix-coh12"};
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()), expected);
  for (const auto& c : presets()) EXPECT_NO_THROW(c.validate()) << c.name;
}

TEST(Presets, UnknownNameListsValid) {
  try {
    preset("fig9");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("fig4e-crossover"), std::string::npos);
  }
}

TEST(Presets, Fig1Columns) {
  const auto& c = preset("fig1");
  EXPECT_EQ(c.outputs, (std::vector<std::string>{"N_numeric", "N_meanfield", "N_sse", "N_eq5"}));
  EXPECT_EQ(c.axes[0].scale, Scale::log);
  EXPECT_EQ(c.axes[0].min, 1e-2);
  EXPECT_EQ(c.axes[0].max, 1e3);
  const auto& f3 = preset("fig3b");
  EXPECT_EQ(f3.fixed.at(Param::gamma2_ratio), 100.0);
  EXPECT_NE(std::find(f3.outputs.begin(), f3.outputs.end(), "Omega_th"), f3.outputs.end());
  EXPECT_TRUE(f3.reconstructed);
}

TEST(Csv, Formatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(Run, RowsHeaderAndMetadata) {
  const RunResult r = run_scenario(small(), {2});
  EXPECT_EQ(r.rows.size(), 12u);
  EXPECT_EQ(r.failed, 0u);
  EXPECT_EQ(r.csv.find("# preset: small\n"), 0u);
  EXPECT_NE(r.csv.find("# config_hash: fnv1a64:" + config_hash(small())), std::string::npos);
  EXPECT_NE(r.csv.find("# tolerance: profile=default"), std::string::npos);
  EXPECT_EQ(r.csv.find('\r'), std::string::npos);
  const auto lines = data_lines(r.csv);
  ASSERT_EQ(lines.size(), 13u);
  EXPECT_EQ(lines[0],
            "gamma2_ratio,kappa_ratio,delta_ratio,Omega_ratio,eta_ratio,N_numeric,S_numeric,"
            "S_noiseless,S_rel_diff,coh01,dim_used,residual,failed,error");
  for (const SweepRow& row : r.rows) {
    EXPECT_LT(row.residual, 1e-8);
    EXPECT_GE(row.dim_used, 3);
    for (double v : row.values) EXPECT_TRUE(std::isfinite(v));
  }
}

TEST(Run, DeterministicAcrossWorkerCounts) {
  const std::string a = run_scenario(small(), {1}).csv;
  const std::string b = run_scenario(small(), {4}).csv;
  const std::string c = run_scenario(small(), {3}).csv;
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(Run, FailedRowsAreFlagged) {
  ScenarioConfig c;
  c.name = "gain";
  // gamma2 = 0 with kappa < gamma1 has no steady state; kappa > gamma1 is fine.
  c.axes = {{Param::kappa_ratio, 0.5, 3.0, 2, Scale::linear}};
  c.fixed = {{Param::gamma2_ratio, 0.0}};
  c.outputs = {"N_numeric"};
  const RunResult r = run_scenario(c);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_TRUE(r.rows[0].failed);
  EXPECT_FALSE(r.rows[1].failed);
  EXPECT_TRUE(r.excessive_failures());
  const auto lines = data_lines(r.csv);
  EXPECT_NE(lines[1].find(",1,"), std::string::npos);
  EXPECT_NE(lines[1].find("net single-photon gain"), std::string::npos);
}

TEST(Run, ThresholdDriveMode) {
  ScenarioConfig c;
  c.name = "th";
  c.axes = {{Param::kappa_ratio, 0.0, 1.0, 2, Scale::linear}};
  c.fixed = {{Param::gamma2_ratio, 1e4}};
  c.outputs = {"N_numeric", "N0_numeric", "Delta_N", "Omega_th"};
  c.epsilon = 0.1;
  c.drive_mode = DriveMode::threshold;
  const RunResult r = run_scenario(c);
  ASSERT_EQ(r.failed, 0u);
  for (const SweepRow& row : r.rows) {
    EXPECT_DOUBLE_EQ(row.point.at(Param::Omega_ratio), row.values[3]);
    EXPECT_NEAR(row.values[2], 0.1, 1e-3);
  }
}

TEST(Run, DimOverrideAndSpectrumOutputs) {
  ScenarioConfig c;
  c.name = "spec";
  c.axes = {{Param::eta_ratio, 0.0, 0.5, 2, Scale::linear}};
  c.fixed = {{Param::gamma2_ratio, 10.0}, {Param::delta_ratio, 1.0}};
  c.outputs = {"delta_obs", "Delta_obs"};
  c.dim_override = 12;
  const RunResult r = run_scenario(c);
  ASSERT_EQ(r.failed, 0u);
  EXPECT_EQ(r.rows[0].dim_used, 12);
  EXPECT_NEAR(r.rows[0].values[1], 0.0, 1e-3);  // undriven: no entrainment
  EXPECT_LT(r.rows[1].values[1], 0.0);
}

TEST(Run, WriteCsv) {
  const auto dir = std::filesystem::temp_directory_path() / "qvdp_sweep_test";
  std::filesystem::remove_all(dir);
  const RunResult r = run_scenario(small());
  const auto path = write_csv(r, dir);
  EXPECT_EQ(path.filename(), "small.csv");
  std::ifstream in(path, std::ios::binary);
  const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(content, r.csv);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace qvdp::sweep
