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
#ifndef EAQDC_SPIN_SYSTEM_HPP
#define EAQDC_SPIN_SYSTEM_HPP

#include <array>
#include <random>
#include <string>

#include "eaqdc/pulse.hpp"
#include "eaqdc/quantum.hpp"

namespace eaqdc {

// Three-spin molecule in the rotating frame. Spin 0 is the work qubit.
// Internal Hamiltonian (rad/s):
//   H = -sum_i w_i sz_i + sum_{i<j} (pi J_ij / 2) sz_i sz_j,  w_i = 2 pi offset_i.
// All terms are diagonal, so free evolution is a pure phase map.
struct SpinSystem {
  std::array<std::string, 3> labels = {"A", "B", "C"};
  std::array<double, 3> offset_hz = {0.0, 0.0, 0.0};
  // Symmetric, zero diagonal, Hz. j(i,j) reads it; set_j keeps the symmetry.
  std::array<std::array<double, 3>, 3> j_hz{};
  std::array<double, 3> t1_s = {1.0, 1.0, 1.0};
  std::array<double, 3> t2_s = {0.5, 0.5, 0.5};
  std::array<double, 3> weights = {1.0, 1.0, 1.0};
  // Metadata only: the rotating frame removes the carrier frequencies.
  std::array<double, 3> larmor_mhz = {0.0, 0.0, 0.0};

  double j(int i, int k) const;
  void set_j(int i, int k, double hz);

  // Throws std::invalid_argument on asymmetric J, nonzero J diagonal, or
  // t1 < t2 / nonpositive relaxation times.
  void validate() const;
};

// Work-qubit / control / ancilla system used throughout: 13C, 1H, 19F with
// J01 = 160.8 Hz, J12 = 47.6 Hz, J02 = -192.48 Hz. Relaxation times are
// representative liquid-state values, not measured constants.
SpinSystem default_system();

struct EvolveOptions {
  bool relaxation = false;
  // When true, hard pulses with duration_s > 0 evolve under control+drift
  // for their duration instead of acting instantaneously.
  bool finite_pulses = false;
  // When true, delays keep the offset terms; default models ideal
  // refocusing of chemical shifts.
  bool explicit_offsets = false;
  // Scales the pure-dephasing rate 1/T2 - 1/(2 T1) of every spin; 0 leaves
  // only the amplitude-damping floor, 1 reproduces the nominal T2.
  double t2_scale = 1.0;
  // Fractional rf amplitude miscalibration: each pulse's flip angle (or
  // shaped amplitude) is scaled by 1 + N(0, amp_noise). Requires rng.
  double amp_noise = 0.0;
  // Fraction of every hard pulse's rotation leaking onto non-target spins.
  double cross_talk = 0.0;
  std::mt19937_64* rng = nullptr;
};

// Traceless deviation matrix sum_i weights_i * Iz_i, diagonal.
DensityMatrix thermal_state(const SpinSystem& system);

// Applies the program events in order. Relaxation, when enabled, damps the
// state after every timed event: each spin contributes an
// amplitude-damping action at 1/T1 (populations toward equilibrium,
// coherences across its flip at the mandatory 1/(2 T1) floor) plus pure
// dephasing at the excess rate 1/T2 - 1/(2 T1), scaled by t2_scale.
DensityMatrix evolve(const DensityMatrix& state, const PulseProgram& program,
                     const SpinSystem& system, const EvolveOptions& options = {});

// Ordered product of the event propagators, ignoring relaxation and noise.
// Throws std::invalid_argument if the program contains a GradientCrush,
// which has no unitary representation.
CMat program_unitary(const PulseProgram& program, const SpinSystem& system,
                     const EvolveOptions& options = {});

// Propagator of a single delay (diagonal) or hard pulse, used by tests.
CMat delay_propagator(const Delay& delay, const SpinSystem& system,
                      bool explicit_offsets = false);

// Diagonal internal Hamiltonian (rad/s) restricted to the listed couplings,
// order (0,1), (0,2), (1,2); offsets enter only when requested.
CMat drift_hamiltonian(const SpinSystem& system, const std::array<bool, 3>& active,
                       bool include_offsets);

// Hermitian generator of one shaped-pulse segment: drift plus the rf term
// 2 pi amp (cos(phase) sx + sin(phase) sy) / 2 on every channel. amp_scale
// models a miscalibrated transmitter.
CMat shaped_segment_hamiltonian(const ShapedPulse& pulse, std::size_t segment,
                                const SpinSystem& system, bool couplings_on = true,
                                bool explicit_offsets = false, double amp_scale = 1.0);

// Spatial-averaging preparation: rotations, isolated J-coupling echoes, and
// three gradient crushes that turn the thermal state into a pseudo-pure
// |000>. Pulse angles are fixed by the closed-form population bookkeeping
// in the implementation.
PulseProgram pps_program(const SpinSystem& system);

// Runs pps_program on thermal_state and checks the result is proportional
// to |000><000| - I/8 (diagonal pattern (7,-1,...,-1), positive scale).
// Throws std::runtime_error listing the achieved diagonal on failure.
DensityMatrix prepare_pps(const SpinSystem& system);

}  // namespace eaqdc

#endif  // EAQDC_SPIN_SYSTEM_HPP
