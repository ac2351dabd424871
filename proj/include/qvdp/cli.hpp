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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qvdp/error.hpp"
#include "qvdp/sweep/presets.hpp"
#include "qvdp/sweep/runner.hpp"
#include "qvdp/sweep/scenario.hpp"
#include "qvdp/sweep/tolerance.hpp"
#include "qvdp/verify.hpp"

namespace qvdp::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kConfigError = 2,
  kSolverFailures = 3,
};

inline constexpr const char* kOutDirEnv = "QVDP_OUT_DIR";

namespace detail {

inline sweep::ScenarioConfig resolve_target(const std::string& target) {
  const auto names = sweep::list_presets();
  if (std::find(names.begin(), names.end(), target) != names.end()) return sweep::preset(target);
  if (std::filesystem::exists(target)) return sweep::load_scenario(target);
  sweep::preset(target);  // throws with the list of valid names
  return {};
}

}  // namespace detail

/// Entry point of the qvdp command line tool.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Driven quantum van der Pol oscillator: steady states, synchronization, spectra"};
  app.require_subcommand(1);

  std::string target, out_dir, tol_name = "default";
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::optional<int> dim;
  auto* run_cmd = app.add_subcommand("run", "Run a preset or config file and write its CSV");
  run_cmd->add_option("target", target, "Preset name or path to a JSON config")->required();
  run_cmd->add_option("--out", out_dir, std::string("Output directory (default: $") + kOutDirEnv + ")");
  run_cmd->add_option("--workers", workers, "Parallel workers")->check(CLI::PositiveNumber);
  run_cmd->add_option("--dim", dim, "Fixed Fock cutoff instead of automatic selection");
  run_cmd->add_option("--tol", tol_name, "Tolerance profile: default | loose");

  app.add_subcommand("list", "List built-in presets");

  std::string verify_tol = "default";
  std::vector<std::string> only;
  bool corrupt = false;
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance checks");
  verify_cmd->add_option("--tol", verify_tol, "Tolerance profile: default | loose");
  verify_cmd->add_option("--check", only, "Run only the named checks");
  verify_cmd->add_flag("--corrupt-vectorization", corrupt,
                       "Drop the transpose in the superoperator build (harness self-test)");

  std::string export_name;
  auto* export_cmd = app.add_subcommand("export-preset", "Print a preset as an editable JSON config");
  export_cmd->add_option("name", export_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (app.got_subcommand("list")) {
      for (const auto& c : sweep::presets()) {
        out << c.name << (c.reconstructed ? "  [reconstructed]" : "") << "  " << c.description
            << '\n';
      }
      return kOk;
    }

    if (app.got_subcommand("export-preset")) {
      out << sweep::to_json(sweep::preset(export_name)).dump(2) << '\n';
      return kOk;
    }

    if (app.got_subcommand("verify")) {
      verify::VerifyOptions o;
      o.profile = sweep::profile_by_name(verify_tol);
      o.only = only;
      o.corrupt_vectorization = corrupt;
      o.on_result = [&](const verify::CheckResult& r) { out << verify::format_line(r) << std::endl; };
      const auto results = verify::run_verification(o);
      std::size_t failed = 0;
      for (const auto& r : results) failed += !r.passed;
      out << results.size() - failed << "/" << results.size() << " checks passed (profile "
          << o.profile.name << ")\n";
      return failed ? kVerificationFailed : kOk;
    }

    // run
    if (out_dir.empty()) {
      const char* env = std::getenv(kOutDirEnv);
      if (!env || !*env)
        throw ConfigError(std::string("run: no --out given and $") + kOutDirEnv + " is not set");
      out_dir = env;
    }
    sweep::ScenarioConfig cfg = detail::resolve_target(target);
    if (dim) cfg.dim_override = *dim;
    cfg.validate();
    sweep::RunOptions ro;
    ro.workers = workers;
    ro.profile = sweep::profile_by_name(tol_name);
    const sweep::RunResult res = sweep::run_scenario(cfg, ro);
    const auto path = sweep::write_csv(res, out_dir);
    out << path.string() << ": " << res.rows.size() << " rows, " << res.failed << " failed\n";
    if (res.excessive_failures()) {
      err << "error: " << res.failed << " of " << res.rows.size()
          << " grid points failed (more than 10%)\n";
      return kSolverFailures;
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace qvdp::cli
