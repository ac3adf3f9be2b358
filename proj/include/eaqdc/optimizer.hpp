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
#ifndef EAQDC_OPTIMIZER_HPP
#define EAQDC_OPTIMIZER_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "eaqdc/pulse.hpp"
#include "eaqdc/quantum.hpp"
#include "eaqdc/spin_system.hpp"

namespace eaqdc {

// Propagator of a shaped pulse under control + drift: the ordered product
// of segment exponentials. Couplings stay on unless couplings_on is false
// (isolated-spin checks); offsets enter only when explicit_offsets is set.
CMat pulse_propagator(const ShapedPulse& pulse, const SpinSystem& system,
                      bool couplings_on = true, bool explicit_offsets = false);

struct OptimizeParams {
  int segments = 100;
  double dt_s = 10e-6;
  double threshold = 0.995;
  int budget = 150;            // gradient-ascent iteration budget
  double max_amp_hz = 25e3;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  int restarts = 2;            // random-restart coordinate-search fallback
  std::vector<int> channels = {0};
  // Seed waveform; grown/truncated to `segments`. When absent the search
  // starts from a small random waveform.
  std::optional<ShapedPulse> init;
};

struct OptimizationRun {
  CMat target;
  int segments = 0;
  double dt_s = 0.0;
  double max_amp_hz = 0.0;
  int budget = 0;
  double fidelity = 0.0;
  bool converged = false;      // fidelity >= threshold
  int iterations = 0;
  std::vector<double> history; // best-so-far per iteration, non-decreasing
  ShapedPulse pulse;
};

// Maximizes hs_fidelity(target, pulse_propagator(pulse)) over per-segment
// in-phase/quadrature controls, deterministic for a fixed seed. Gradient
// ascent with finite differences and cached prefix/suffix products; a
// seeded coordinate search restarts the climb if ascent stalls below the
// threshold. Returns the best pulse found regardless of convergence.
OptimizationRun optimize(const CMat& target, const SpinSystem& system,
                         const OptimizeParams& params);

// Deterministic waveform templates used to seed the search. Both refocus
// unwanted couplings with pi bursts at the quarter points of the timeline
// and realize the wanted rotations as amplitude bursts.
ShapedPulse render_single_qubit(const Mat2& target, int channel,
                                const SpinSystem& system, int segments,
                                double dt_s, double max_amp_hz);
ShapedPulse render_swap(int a, int b, const SpinSystem& system, int segments,
                        double dt_s, double max_amp_hz);

// Euler angles (a, b, c) with u ~ Ry(a) Rx(b) Ry(c) up to global phase.
std::array<double, 3> yxy_euler(const Mat2& u);

}  // namespace eaqdc

#endif  // EAQDC_OPTIMIZER_HPP
