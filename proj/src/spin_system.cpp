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
#include "eaqdc/spin_system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace eaqdc {

namespace {

constexpr int kDim = 8;
constexpr int kSpins = 3;
constexpr std::array<std::pair<int, int>, 3> kPairs = {{{0, 1}, {0, 2}, {1, 2}}};

int bit_of(int index, int spin) { return (index >> (kSpins - 1 - spin)) & 1; }

// sigma_z eigenvalue of `spin` in basis state `index`.
double sz_of(int index, int spin) { return bit_of(index, spin) ? -1.0 : 1.0; }

// Diagonal of H = -sum_i w_i sz_i + sum_{i<j} (pi J_ij / 2) sz_i sz_j, rad/s.
Eigen::VectorXd drift_energies(const SpinSystem& sys,
                               const std::array<bool, 3>& active, bool offsets) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(kDim);
  for (int idx = 0; idx < kDim; ++idx) {
    double v = 0.0;
    if (offsets)
      for (int i = 0; i < kSpins; ++i)
        v -= 2.0 * kPi * sys.offset_hz[i] * sz_of(idx, i);
    for (int p = 0; p < 3; ++p) {
      if (!active[p]) continue;
      v += 0.5 * kPi * sys.j(kPairs[p].first, kPairs[p].second) *
           sz_of(idx, kPairs[p].first) * sz_of(idx, kPairs[p].second);
    }
    e(idx) = v;
  }
  return e;
}

CMat hard_pulse_unitary(const HardPulse& hp, double amp_scale, double cross_talk) {
  std::array<bool, 3> hit{};
  for (int t : hp.targets) hit[t] = true;
  CMat u = CMat::Identity(kDim, kDim);
  for (int s = 0; s < kSpins; ++s) {
    const double theta =
        hit[s] ? hp.angle * amp_scale : hp.angle * amp_scale * cross_talk;
    if (theta == 0.0) continue;
    u = embed_unitary(gates::rot_matrix(theta, hp.phase), {s}, kSpins) * u;
  }
  return u;
}

// Control + drift generator of a finite-duration hard pulse. The rf field
// is constant and sized so the on-resonance flip angle matches hp.angle.
CMat finite_pulse_hamiltonian(const HardPulse& hp, const SpinSystem& sys,
                              bool explicit_offsets, double amp_scale,
                              double cross_talk) {
  std::array<bool, 3> hit{};
  for (int t : hp.targets) hit[t] = true;
  CMat h = CMat::Zero(kDim, kDim);
  h.diagonal() =
      drift_energies(sys, {true, true, true}, explicit_offsets).cast<cxd>();
  const double rate = hp.angle / hp.duration_s;  // rad/s on resonance
  for (int s = 0; s < kSpins; ++s) {
    const double w1 = (hit[s] ? rate : rate * cross_talk) * amp_scale;
    if (w1 == 0.0) continue;
    const Mat2 ctrl = 0.5 * w1 *
                      (std::cos(hp.phase) * pauli_x() + std::sin(hp.phase) * pauli_y());
    h += embed_unitary(ctrl, {s}, kSpins);
  }
  return h;
}

// Per-spin relaxation channel. Each spin contributes a symmetric
// amplitude-damping action (rate 1/T1): the population difference across
// its bit flip relaxes toward the thermal deviation pattern (deviation
// states) or toward zero (proper states, the high-temperature limit),
// same-bit coherence blocks mix pairwise with the same weights, and
// flipped-bit coherences pick up the mandatory 1/(2 T1) decay. t2_scale
// tunes only the pure dephasing in excess of that floor, so the composed
// map stays positive for every lever setting.
void apply_relaxation(CMat& rho, double t, const SpinSystem& sys,
                      const EvolveOptions& opt, bool deviation) {
  if (t <= 0.0) return;
  for (int r = 0; r < kDim; ++r)
    for (int c = 0; c < kDim; ++c) {
      if (r == c) continue;
      double rate = 0.0;
      for (int k = 0; k < kSpins; ++k)
        if (bit_of(r, k) != bit_of(c, k)) {
          const double floor_rate = 0.5 / sys.t1_s[k];
          const double pure = std::max(0.0, 1.0 / sys.t2_s[k] - floor_rate);
          rate += floor_rate + opt.t2_scale * pure;
        }
      rho(r, c) *= std::exp(-t * rate);
    }
  Eigen::VectorXd th = Eigen::VectorXd::Zero(kDim);
  if (deviation)
    for (int idx = 0; idx < kDim; ++idx)
      for (int i = 0; i < kSpins; ++i)
        th(idx) += 0.5 * sys.weights[i] * sz_of(idx, i);
  for (int k = 0; k < kSpins; ++k) {
    const double f = std::exp(-t / sys.t1_s[k]);
    const int mask = 1 << (kSpins - 1 - k);
    for (int r = 0; r < kDim; ++r) {
      if (r & mask) continue;
      for (int c = 0; c < kDim; ++c) {
        if (c & mask) continue;
        const int r1 = r | mask, c1 = c | mask;
        const cxd lo = rho(r, c), hi = rho(r1, c1);
        const double bias =
            (r == c) ? 0.5 * (th(r) - th(r1)) * (1.0 - f) : 0.0;
        rho(r, c) = 0.5 * ((1.0 + f) * lo + (1.0 - f) * hi) + bias;
        rho(r1, c1) = 0.5 * ((1.0 - f) * lo + (1.0 + f) * hi) - bias;
      }
    }
  }
}

double draw_amp_scale(const EvolveOptions& opt) {
  if (opt.amp_noise <= 0.0) return 1.0;
  std::normal_distribution<double> dist(0.0, opt.amp_noise);
  return 1.0 + dist(*opt.rng);
}

void push_zz_echo(PulseProgram& prog, double total_s, int spectator) {
  prog.push(Delay{total_s / 2, {true, true, true}});
  prog.push(HardPulse{{spectator}, kPi, 0.0});
  prog.push(Delay{total_s / 2, {true, true, true}});
  prog.push(HardPulse{{spectator}, kPi, 0.0});
}

}  // namespace

double SpinSystem::j(int i, int k) const {
  if (i < 0 || k < 0 || i >= kSpins || k >= kSpins)
    throw std::invalid_argument("SpinSystem::j: spin index out of range");
  return j_hz[i][k];
}

void SpinSystem::set_j(int i, int k, double hz) {
  if (i == k || i < 0 || k < 0 || i >= kSpins || k >= kSpins)
    throw std::invalid_argument("SpinSystem::set_j: need two distinct spins");
  j_hz[i][k] = hz;
  j_hz[k][i] = hz;
}

void SpinSystem::validate() const {
  for (int i = 0; i < kSpins; ++i) {
    if (j_hz[i][i] != 0.0)
      throw std::invalid_argument("SpinSystem: self-coupling must be zero");
    for (int k = 0; k < kSpins; ++k)
      if (j_hz[i][k] != j_hz[k][i])
        throw std::invalid_argument("SpinSystem: J matrix must be symmetric");
    if (!(t1_s[i] > 0.0) || !(t2_s[i] > 0.0))
      throw std::invalid_argument("SpinSystem: relaxation times must be positive");
    if (t2_s[i] > t1_s[i])
      throw std::invalid_argument("SpinSystem: requires T2 <= T1");
    if (!(weights[i] > 0.0))
      throw std::invalid_argument("SpinSystem: weights must be positive");
  }
}

SpinSystem default_system() {
  SpinSystem sys;
  sys.labels = {"13C", "1H", "19F"};
  sys.set_j(0, 1, 160.8);
  sys.set_j(1, 2, 47.6);
  sys.set_j(0, 2, -192.48);
  // Representative liquid-state relaxation and carrier metadata, not
  // measured constants of the molecule.
  sys.t1_s = {5.0, 3.5, 4.0};
  sys.t2_s = {0.3, 0.5, 0.4};
  sys.larmor_mhz = {100.6, 400.1, 376.5};
  return sys;
}

DensityMatrix thermal_state(const SpinSystem& system) {
  system.validate();
  CMat m = CMat::Zero(kDim, kDim);
  for (int idx = 0; idx < kDim; ++idx) {
    double v = 0.0;
    for (int i = 0; i < kSpins; ++i) v += 0.5 * system.weights[i] * sz_of(idx, i);
    m(idx, idx) = v;
  }
  return DensityMatrix(m, /*deviation=*/true);
}

CMat drift_hamiltonian(const SpinSystem& system, const std::array<bool, 3>& active,
                       bool include_offsets) {
  CMat h = CMat::Zero(kDim, kDim);
  h.diagonal() = drift_energies(system, active, include_offsets).cast<cxd>();
  return h;
}

CMat delay_propagator(const Delay& delay, const SpinSystem& system,
                      bool explicit_offsets) {
  const Eigen::VectorXd e = drift_energies(system, delay.active, explicit_offsets);
  CMat u = CMat::Zero(kDim, kDim);
  for (int idx = 0; idx < kDim; ++idx)
    u(idx, idx) = std::exp(cxd(0, -e(idx) * delay.duration_s));
  return u;
}

CMat shaped_segment_hamiltonian(const ShapedPulse& pulse, std::size_t segment,
                                const SpinSystem& system, bool couplings_on,
                                bool explicit_offsets, double amp_scale) {
  if (segment >= pulse.segments.size())
    throw std::out_of_range("shaped_segment_hamiltonian: segment index");
  const ShapedSegment& seg = pulse.segments[segment];
  const std::array<bool, 3> active = couplings_on
                                         ? std::array<bool, 3>{true, true, true}
                                         : std::array<bool, 3>{false, false, false};
  CMat h = drift_hamiltonian(system, active, explicit_offsets);
  for (std::size_t k = 0; k < pulse.channels.size(); ++k) {
    const double w1 = 2.0 * kPi * seg.amp_hz[k] * amp_scale;
    if (w1 == 0.0) continue;
    const Mat2 ctrl = 0.5 * w1 *
                      (std::cos(seg.phase_rad[k]) * pauli_x() +
                       std::sin(seg.phase_rad[k]) * pauli_y());
    h += embed_unitary(ctrl, {pulse.channels[k]}, kSpins);
  }
  return h;
}

DensityMatrix evolve(const DensityMatrix& state, const PulseProgram& program,
                     const SpinSystem& system, const EvolveOptions& options) {
  system.validate();
  validate(program, kSpins);
  if (state.dim() != kDim)
    throw std::invalid_argument("evolve: three-spin states only");
  if (options.amp_noise > 0.0 && options.rng == nullptr)
    throw std::invalid_argument("evolve: amp_noise requires an rng");
  CMat rho = state.matrix();
  const bool deviation = state.is_deviation();
  auto conjugate = [&rho](const CMat& u) { rho = u * rho * u.adjoint(); };
  auto relax = [&](double t) {
    if (options.relaxation) apply_relaxation(rho, t, system, options, deviation);
  };
  for (const PulseEvent& e : program.events) {
    if (const auto* hp = std::get_if<HardPulse>(&e)) {
      const double scale = draw_amp_scale(options);
      if (options.finite_pulses && hp->duration_s > 0.0) {
        conjugate(herm_propagator(
            finite_pulse_hamiltonian(*hp, system, options.explicit_offsets, scale,
                                     options.cross_talk),
            hp->duration_s));
        relax(hp->duration_s);
      } else {
        conjugate(hard_pulse_unitary(*hp, scale, options.cross_talk));
      }
    } else if (const auto* d = std::get_if<Delay>(&e)) {
      conjugate(delay_propagator(*d, system, options.explicit_offsets));
      relax(d->duration_s);
    } else if (std::holds_alternative<GradientCrush>(e)) {
      rho = CMat(rho.diagonal().asDiagonal());
    } else if (const auto* sp = std::get_if<ShapedPulse>(&e)) {
      const double scale = draw_amp_scale(options);
      for (std::size_t s = 0; s < sp->segments.size(); ++s) {
        conjugate(herm_propagator(
            shaped_segment_hamiltonian(*sp, s, system, true,
                                       options.explicit_offsets, scale),
            sp->segments[s].dt_s));
        relax(sp->segments[s].dt_s);
      }
    }
  }
  return DensityMatrix(rho, deviation);
}

CMat program_unitary(const PulseProgram& program, const SpinSystem& system,
                     const EvolveOptions& options) {
  system.validate();
  validate(program, kSpins);
  CMat u = CMat::Identity(kDim, kDim);
  for (const PulseEvent& e : program.events) {
    if (const auto* hp = std::get_if<HardPulse>(&e)) {
      if (options.finite_pulses && hp->duration_s > 0.0)
        u = herm_propagator(
                finite_pulse_hamiltonian(*hp, system, options.explicit_offsets,
                                         1.0, options.cross_talk),
                hp->duration_s) *
            u;
      else
        u = hard_pulse_unitary(*hp, 1.0, options.cross_talk) * u;
    } else if (const auto* d = std::get_if<Delay>(&e)) {
      u = delay_propagator(*d, system, options.explicit_offsets) * u;
    } else if (std::holds_alternative<GradientCrush>(e)) {
      throw std::invalid_argument("program_unitary: gradient crush is not unitary");
    } else if (const auto* sp = std::get_if<ShapedPulse>(&e)) {
      for (std::size_t s = 0; s < sp->segments.size(); ++s)
        u = herm_propagator(shaped_segment_hamiltonian(
                                *sp, s, system, true, options.explicit_offsets),
                            sp->segments[s].dt_s) *
            u;
    }
  }
  return u;
}

// Population bookkeeping behind the fixed angles, with I-product terms
// (Iz = sz/2). The target |000><000| - I/8 expands as
//   (1/4) [sum Iz_i + sum 2 Iz_i Iz_j + 4 Iz_1 Iz_2 Iz_3],
// so every product term must land on the same coefficient. Stage I parks
// spin 2 at cos(gamma) = 1/4 and splits spin 1 polarization between Iz and
// 2 Iz Iz via cos(delta) cos(zeta) = sin(delta) |sin(zeta)| = 1/4
// (delta = 5 pi / 12, zeta = -+ pi / 12). Stage II tips spin 0 by
// arccos(1/sqrt(3)), evolves it under each of its couplings to a +-pi/3
// ZZ angle (echoes isolate one coupling at a time), and closes with an
// equal rotation about the equatorial azimuth 30 deg (210 deg when the
// coupling signs multiply to -1), which equalizes all four spin-0 terms.
PulseProgram pps_program(const SpinSystem& system) {
  system.validate();
  const double j12 = system.j(0, 1);
  const double j13 = system.j(0, 2);
  const double j23 = system.j(1, 2);
  if (std::abs(j12) < 1e-9 || std::abs(j13) < 1e-9 || std::abs(j23) < 1e-9)
    throw std::invalid_argument("pps_program: requires all three couplings");

  PulseProgram prog;
  auto pulse = [&prog](int spin, double angle, double phase) {
    prog.push(HardPulse{{spin}, angle, phase});
  };

  const double wmin = *std::min_element(system.weights.begin(), system.weights.end());
  const double wmax = *std::max_element(system.weights.begin(), system.weights.end());
  if (wmax - wmin > 1e-12) {
    // Equalize the three polarizations first so the fixed-angle stages see
    // a uniform ladder; costs one extra crush.
    for (int s = 0; s < kSpins; ++s)
      if (system.weights[s] > wmin * (1.0 + 1e-12))
        pulse(s, std::acos(wmin / system.weights[s]), 0.0);
    prog.push(GradientCrush{});
  }

  // Stage I: spins 1 and 2 (control / ancilla pair).
  pulse(2, std::acos(0.25), 0.0);
  prog.push(GradientCrush{});
  pulse(1, 5.0 * kPi / 12.0, 0.0);
  push_zz_echo(prog, 1.0 / (2.0 * std::abs(j23)), /*spectator=*/0);
  const double zeta = (j23 > 0 ? -1.0 : 1.0) * kPi / 12.0;
  pulse(1, zeta, kPi / 2.0);
  prog.push(GradientCrush{});

  // Stage II: spin 0 (work qubit).
  const double magic = std::acos(1.0 / std::sqrt(3.0));
  pulse(0, magic, kPi / 2.0);
  push_zz_echo(prog, j12 > 0 ? 1.0 / (3.0 * j12) : 2.0 / (3.0 * -j12),
               /*spectator=*/2);
  push_zz_echo(prog, j13 > 0 ? 1.0 / (3.0 * j13) : 2.0 / (3.0 * -j13),
               /*spectator=*/1);
  const double sign_product = (j12 > 0 ? 1.0 : -1.0) * (j13 > 0 ? 1.0 : -1.0);
  const double azimuth = std::atan2(sign_product * 0.5, sign_product * std::sqrt(3.0) / 2.0);
  pulse(0, magic, azimuth);
  prog.push(GradientCrush{});
  return prog;
}

DensityMatrix prepare_pps(const SpinSystem& system) {
  const DensityMatrix out = evolve(thermal_state(system), pps_program(system), system);
  Eigen::VectorXd target(kDim);
  target << 7, -1, -1, -1, -1, -1, -1, -1;
  target /= 8.0;
  const Eigen::VectorXd d = out.populations();
  const double scale = d.dot(target) / target.squaredNorm();
  const double residual = (d - scale * target).lpNorm<Eigen::Infinity>();
  CMat off = out.matrix();
  off.diagonal().setZero();
  const double off_max = off.cwiseAbs().maxCoeff();
  if (scale <= 1e-6 || residual > 1e-9 || off_max > 1e-12) {
    std::ostringstream msg;
    msg << "prepare_pps: preparation failed; achieved diagonal:";
    for (int i = 0; i < kDim; ++i) msg << ' ' << d(i);
    msg << " (scale " << scale << ", residual " << residual << ", off-diagonal "
        << off_max << ")";
    throw std::runtime_error(msg.str());
  }
  return out;
}

}  // namespace eaqdc
