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
#ifndef EAQDC_PULSE_HPP
#define EAQDC_PULSE_HPP

#include <array>
#include <string>
#include <variant>
#include <vector>

namespace eaqdc {

// Index of the coupling term acting on spins {i, j} in the fixed 3-spin
// order (0,1), (0,2), (1,2).
int coupling_index(int i, int j);

// Rectangular rf pulse: rotation e^{-i theta (cos(phase) sx + sin(phase) sy)/2}
// applied to every target spin. Instantaneous unless finite-pulse evolution
// is enabled and duration_s > 0.
struct HardPulse {
  std::vector<int> targets;
  double angle = 0.0;      // flip angle theta, rad
  double phase = 0.0;      // rotation-axis azimuth from +x, rad
  double duration_s = 0.0; // nominal rf duration
};

// Free evolution. `active` selects which coupling terms act, in
// coupling_index order; offsets are refocused unless the evolution options
// enable them explicitly.
struct Delay {
  double duration_s = 0.0;
  std::array<bool, 3> active = {true, true, true};
};

// Idealized pulsed-field-gradient crusher: erases every off-diagonal entry.
// Exact for this system because the three nuclei are heteronuclear, so no
// coherence is gradient-immune.
struct GradientCrush {};

// One piecewise-constant step of a shaped pulse: per-channel rf amplitude
// and phase, applied for dt_s while the couplings stay active.
struct ShapedSegment {
  double dt_s = 0.0;
  std::vector<double> amp_hz;     // one entry per pulse channel
  std::vector<double> phase_rad;  // one entry per pulse channel
};

// Strongly modulated pulse on one or more channels. Multi-channel shapes
// are required for two-qubit targets: a single driven spin plus always-on
// ZZ couplings conserves the spectators' z-basis block structure, so e.g.
// SWAP is unreachable on one channel.
struct ShapedPulse {
  std::vector<int> channels;
  std::vector<ShapedSegment> segments;
  std::string label;

  double duration_s() const;

  // Textual segment table (index, then amplitude/phase per channel, then
  // dt), round-trippable.
  std::string to_table() const;
  static ShapedPulse from_table(const std::string& table);
};

using PulseEvent = std::variant<HardPulse, Delay, GradientCrush, ShapedPulse>;

struct PulseProgram {
  std::vector<PulseEvent> events;

  PulseProgram& push(PulseEvent event);
  PulseProgram& append(const PulseProgram& other);

  // Number of rf pulses: hard and shaped events count one each.
  int pulse_count() const;
  // Sum of event durations (delays, shaped segments, nominal rf durations).
  double total_duration_s() const;

  // Line-oriented event listing with fixed formatting, suitable for golden
  // files.
  std::string dump() const;
};

// Throws std::invalid_argument if an event is malformed: negative duration,
// target outside [0, n_spins), empty shaped pulse, or segment arity not
// matching the channel list.
void validate(const PulseProgram& program, int n_spins = 3);

}  // namespace eaqdc

#endif  // EAQDC_PULSE_HPP
