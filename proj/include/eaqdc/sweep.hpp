/* Copyright 2026 The EAQDC-Sim Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef EAQDC_SWEEP_HPP
#define EAQDC_SWEEP_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eaqdc/predictions.hpp"
#include "eaqdc/spin_system.hpp"

namespace eaqdc {

// Evaluation pipelines, from closed forms down to the noisy machine.
enum class Mode {
  analytic_qm,   // Table of closed-form quantum intensities
  analytic_hv,   // hidden-variable closed forms
  circuit,       // ideal gate-by-gate state vector
  pulse_ideal,   // compiled hard pulses + delays, no noise
  pulse_shaped,  // shaped pulses for phase shifter / ancilla rotation / swap
  pulse_noisy    // shaped mode + relaxation + rf amplitude noise
};

std::string to_string(Mode mode);
std::optional<Mode> mode_from_string(const std::string& name);

struct SweepSpec {
  std::vector<double> alphas;  // default: 6 values, 0 .. pi/2
  std::vector<double> phis;    // default: 13 equally spaced on [0, 2 pi]
  std::vector<Mode> modes = {Mode::analytic_qm, Mode::analytic_hv, Mode::circuit};
  int repeats = 4;
  std::uint64_t seed = 20260817ull;
  double eta = 0.5;
  // Noise knobs for pulse_noisy; t2_scale multiplies the damping rates.
  double t2_scale = 1.0;
  double amp_noise = 0.01;

  static SweepSpec defaults();
};

struct SweepRow {
  Mode mode{};
  double alpha = 0.0;
  double phi = 0.0;
  int repeat = 0;
  double i_c0 = 0.0;
  double i_c1 = 0.0;
  bool flagged = false;      // pipeline failure; values not trustworthy
  std::string note;          // failure description when flagged
};

struct VisibilityRow {
  Mode mode{};
  double alpha = 0.0;
  double v_c0 = 0.0;
  double v_c1 = 0.0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;              // canonical order: mode, a, phi, rep
  std::vector<VisibilityRow> visibilities; // per (mode, alpha), repeat-averaged
  // Per-cell standard deviation of i_c0 across repeats, keyed like rows.
  std::vector<double> cell_std;
  bool any_flagged = false;
};

// Deterministic for a fixed seed: noisy cells draw from per-cell RNGs
// seeded by (seed, mode, alpha index, phi index, repeat). Cells run in
// parallel; deterministic modes compute once per (alpha, phi) and replicate
// across repeats so the row schema stays uniform.
SweepResult run_sweep(const SweepSpec& spec, const SpinSystem& system);

// Stable column order: mode,alpha,phi,repeat,i_c0,i_c1. Visibility summary
// is a separate table with its own header.
std::string sweep_csv(const SweepResult& result);
std::string visibility_csv(const SweepResult& result);

// JSON export; parse(serialize(x)) followed by serialize is byte-identical.
std::string sweep_json(const SweepResult& result);
SweepResult sweep_from_json(const std::string& text);

// Config file: spin system constants, grids, noise knobs. Unknown keys are
// rejected with the offending key in the message.
struct AppConfig {
  SpinSystem system;
  SweepSpec sweep;
};
AppConfig load_config(const std::string& path);
AppConfig parse_config(const std::string& text, const std::string& origin);
std::string default_config_text();

}  // namespace eaqdc

#endif  // EAQDC_SWEEP_HPP
