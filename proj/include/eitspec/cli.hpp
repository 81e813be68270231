// Copyright 2026 The eitspec Authors
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

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include "eitspec/calibration.hpp"
#include "eitspec/model.hpp"

namespace eitspec {

// Fully resolved command line. Physical parameters are stored in rad/s; the
// command line and output files use linear kHz.
struct RunConfig {
  std::string mode;              // simulate, map, fit, classify,
                                 // fluctuation-study, calibrate
  std::string calibrate_target;  // probe, kappa-q, sideband, max-q

  ModelParams params;
  // Names of parameter flags given explicitly; these override values read
  // from a trace's metadata block.
  std::vector<std::string> explicit_params;
  HilbertConfig hilbert;

  // Probe sweep in rad/s; points == 0 selects default_sweep.
  double delta_min = 0.0;
  double delta_max = 0.0;
  std::size_t points = 0;
  // Sideband detuning sweep for `map`, rad/s.
  double delta_sb_min = 0.0;
  double delta_sb_max = 0.0;
  std::size_t delta_sb_points = 5;

  std::string model = "auto";  // fit: eit, ats, lorentzian, master, fano, auto
  std::vector<std::string> free = {"kappa", "gamma", "omega_sb", "delta_sb"};
  std::string guess = "start";  // master fit seed: start or auto

  std::string input;
  std::string output;
  std::uint64_t seed = 0;
  double noise = 0.0;  // absolute population noise added by simulate
  bool timestamp = true;

  std::string trend = "both";
  std::vector<double> etas = {0.0, 0.1, 0.2, 0.3};
  int n_sweeps = 100;

  PulseSpec pulse;
  double theta = std::numbers::pi;
  double g_mhz = 58.0;
  double detuning_mhz = 3823.0;
  double drive_mhz = 100.0;
  double kappa_q_hz = 104.0;
  double resonance_ghz = 10.0;
  double margin = 0.1;
};

enum ExitCode { kExitOk = 0, kExitNumerical = 1, kExitUsage = 2 };

// Parses argv (including a --config file) into a RunConfig. Returns
// kExitOk on success; prints help or a usage diagnostic to out/err and
// returns the corresponding exit code otherwise (help yields kExitOk with
// config.mode empty).
int parse_command_line(int argc, const char* const* argv, RunConfig& config,
                       std::ostream& out, std::ostream& err);

// Executes one mode. Numerical failures are reported on err and yield
// kExitNumerical.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_command_line followed by run.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace eitspec
