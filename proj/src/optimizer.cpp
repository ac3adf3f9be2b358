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
#include "eaqdc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eaqdc {

namespace {

constexpr int kSpins = 3;
constexpr Eigen::Index kDim = 8;

// Parameter layout: segment-major Cartesian controls,
// p[(seg * n_channels + ch) * 2 + {0, 1}] = {in-phase, quadrature} in Hz.
struct SearchSpace {
  std::vector<int> channels;
  int segments = 0;
  double dt_s = 0.0;
  double max_amp_hz = 0.0;
  CMat drift;  // cached, all couplings on, offsets refocused

  std::size_t size() const {
    return static_cast<std::size_t>(segments) * channels.size() * 2;
  }

  CMat segment_propagator(const std::vector<double>& p, int seg) const {
    CMat h = drift;
    for (std::size_t ch = 0; ch < channels.size(); ++ch) {
      const std::size_t base = (seg * channels.size() + ch) * 2;
      const double cx = p[base], cy = p[base + 1];
      if (cx == 0.0 && cy == 0.0) continue;
      const Mat2 ctrl = kPi * (cx * pauli_x() + cy * pauli_y());
      h += embed_unitary(ctrl, {channels[ch]}, kSpins);
    }
    return herm_propagator(h, dt_s);
  }

  ShapedPulse to_pulse(const std::vector<double>& p, std::string label) const {
    ShapedPulse pulse;
    pulse.channels = channels;
    pulse.label = std::move(label);
    pulse.segments.reserve(segments);
    for (int s = 0; s < segments; ++s) {
      ShapedSegment seg;
      seg.dt_s = dt_s;
      for (std::size_t ch = 0; ch < channels.size(); ++ch) {
        const std::size_t base = (s * channels.size() + ch) * 2;
        seg.amp_hz.push_back(std::hypot(p[base], p[base + 1]));
        seg.phase_rad.push_back(
            seg.amp_hz.back() > 0.0 ? std::atan2(p[base + 1], p[base]) : 0.0);
      }
      pulse.segments.push_back(std::move(seg));
    }
    return pulse;
  }

  void clamp(std::vector<double>& p) const {
    for (std::size_t i = 0; i < p.size(); i += 2) {
      const double r = std::hypot(p[i], p[i + 1]);
      if (r > max_amp_hz) {
        p[i] *= max_amp_hz / r;
        p[i + 1] *= max_amp_hz / r;
      }
    }
  }
};

double objective(const SearchSpace& space, const std::vector<double>& p,
                 const CMat& target) {
  CMat u = CMat::Identity(kDim, kDim);
  for (int s = 0; s < space.segments; ++s) u = space.segment_propagator(p, s) * u;
  return hs_fidelity(target, u);
}

// Writes a rotation burst into consecutive Cartesian parameters starting at
// segment `start`, splitting the flip angle across segments at up to the
// amplitude cap. Returns one past the last segment used.
int fill_burst(std::vector<double>& p, const SearchSpace& space, int channel_pos,
               int start, double angle, double phase) {
  if (angle < 0) {
    angle = -angle;
    phase += kPi;
  }
  const double per_segment = 2.0 * kPi * space.max_amp_hz * space.dt_s;
  int seg = start;
  while (angle > 1e-12) {
    if (seg >= space.segments)
      throw std::invalid_argument("render: rotation bursts exceed the timeline");
    const double chunk = std::min(angle, per_segment);
    const double amp = chunk / (2.0 * kPi * space.dt_s);
    const std::size_t base = (seg * space.channels.size() + channel_pos) * 2;
    p[base] = amp * std::cos(phase);
    p[base + 1] = amp * std::sin(phase);
    angle -= chunk;
    ++seg;
  }
  return seg;
}

int burst_segments(const SearchSpace& space, double angle) {
  const double per_segment = 2.0 * kPi * space.max_amp_hz * space.dt_s;
  return static_cast<int>(std::ceil(std::abs(angle) / per_segment - 1e-12));
}

SearchSpace make_space(const SpinSystem& system, const std::vector<int>& channels,
                       int segments, double dt_s, double max_amp_hz) {
  if (segments < 1 || dt_s <= 0.0 || max_amp_hz <= 0.0)
    throw std::invalid_argument("optimizer: invalid segment grid");
  if (channels.empty())
    throw std::invalid_argument("optimizer: needs at least one channel");
  for (int c : channels)
    if (c < 0 || c >= kSpins)
      throw std::invalid_argument("optimizer: channel outside the register");
  for (std::size_t i = 0; i < channels.size(); ++i)
    for (std::size_t j = i + 1; j < channels.size(); ++j)
      if (channels[i] == channels[j])
        throw std::invalid_argument("optimizer: duplicate channel");
  SearchSpace space;
  space.channels = channels;
  space.segments = segments;
  space.dt_s = dt_s;
  space.max_amp_hz = max_amp_hz;
  space.drift = drift_hamiltonian(system, {true, true, true}, false);
  return space;
}

}  // namespace

CMat pulse_propagator(const ShapedPulse& pulse, const SpinSystem& system,
                      bool couplings_on, bool explicit_offsets) {
  CMat u = CMat::Identity(kDim, kDim);
  for (std::size_t s = 0; s < pulse.segments.size(); ++s)
    u = herm_propagator(
            shaped_segment_hamiltonian(pulse, s, system, couplings_on,
                                       explicit_offsets),
            pulse.segments[s].dt_s) *
        u;
  return u;
}

std::array<double, 3> yxy_euler(const Mat2& u) {
  if (!is_unitary(u, 1e-9))
    throw std::invalid_argument("yxy_euler: input must be unitary");
  const cxd det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const cxd root = std::exp(cxd(0, std::arg(det) / 2));
  const Mat2 v = u / root;
  const double ch = std::hypot(std::real(v(0, 0)), std::real(v(1, 0)));
  const double sh = std::hypot(std::imag(v(0, 0)), std::imag(v(1, 0)));
  const double b = 2.0 * std::atan2(sh, ch);
  const double mean =
      ch > 1e-12 ? std::atan2(std::real(v(1, 0)), std::real(v(0, 0))) : 0.0;
  const double diff =
      sh > 1e-12 ? std::atan2(std::imag(v(0, 0)), -std::imag(v(1, 0))) : 0.0;
  return {mean + diff, b, mean - diff};
}

ShapedPulse render_single_qubit(const Mat2& target, int channel,
                                const SpinSystem& system, int segments,
                                double dt_s, double max_amp_hz) {
  SearchSpace space = make_space(system, {channel}, segments, dt_s, max_amp_hz);
  std::vector<double> p(space.size(), 0.0);

  // Echo bursts at the quarter points refocus both couplings of the driven
  // spin over the full window and compose to the identity (up to phase).
  // The undriven pair keeps evolving; that coupling bounds the fidelity of
  // any single-channel shape.
  const std::array<double, 3> euler = yxy_euler(target);
  int tail = segments;
  tail -= burst_segments(space, euler[0]);
  const int start_a = tail;
  tail -= burst_segments(space, euler[1]);
  const int start_b = tail;
  tail -= burst_segments(space, euler[2]);
  const int start_c = tail;
  if (start_c < 3 * segments / 4 + burst_segments(space, kPi))
    throw std::invalid_argument("render_single_qubit: timeline too short");

  fill_burst(p, space, 0, segments / 4, kPi, 0.0);
  fill_burst(p, space, 0, 3 * segments / 4, kPi, 0.0);
  fill_burst(p, space, 0, start_c, euler[2], kPi / 2);  // Ry first in time
  fill_burst(p, space, 0, start_b, euler[1], 0.0);
  fill_burst(p, space, 0, start_a, euler[0], kPi / 2);
  return space.to_pulse(p, "single");
}

ShapedPulse render_swap(int a, int b, const SpinSystem& system, int segments,
                        double dt_s, double max_amp_hz) {
  if (a == b) throw std::invalid_argument("render_swap: need two distinct spins");
  SearchSpace space = make_space(system, {a, b}, segments, dt_s, max_amp_hz);
  if (std::abs(system.j(a, b)) < 1e-9)
    throw std::invalid_argument("render_swap: spins are uncoupled");
  std::vector<double> p(space.size(), 0.0);

  // SWAP ~ exp(-i g (ZZ + XX + YY)) for g = +-pi/4: three sections that each
  // accumulate the pair coupling, conjugated into XX and YY by simultaneous
  // pi/2 bursts. Simultaneous pi bursts on both spins halve each section:
  // they commute with the wanted ZZ term and refocus the couplings to the
  // undriven spin. The free time is compressed uniformly to fit the grid;
  // the fidelity cost of g below pi/4 stays small and the search recovers
  // most of it.
  const int seg_pi = burst_segments(space, kPi);
  const int seg_half = burst_segments(space, kPi / 2);
  const int burst_total = 6 * seg_pi + 4 * seg_half;
  if (segments <= burst_total + 6)
    throw std::invalid_argument("render_swap: timeline too short");
  const int free_half = (segments - burst_total) / 6;

  int seg = 0;
  auto both_burst = [&](double angle, double phase) {
    const int next = fill_burst(p, space, 0, seg, angle, phase);
    fill_burst(p, space, 1, seg, angle, phase);
    seg = next;
  };
  auto echoed_free = [&]() {
    seg += free_half;
    both_burst(kPi, 0.0);
    seg += free_half;
    both_burst(kPi, 0.0);
  };

  echoed_free();                 // ZZ section
  both_burst(kPi / 2, kPi / 2);  // into the XX frame
  echoed_free();
  both_burst(-kPi / 2, kPi / 2);
  both_burst(-kPi / 2, 0.0);     // into the YY frame
  echoed_free();
  both_burst(kPi / 2, 0.0);
  return space.to_pulse(p, "swap");
}

OptimizationRun optimize(const CMat& target, const SpinSystem& system,
                         const OptimizeParams& params) {
  if (target.rows() != kDim || target.cols() != kDim || !is_unitary(target, 1e-9))
    throw std::invalid_argument("optimize: target must be an 8x8 unitary");
  if (params.threshold <= 0.0 || params.threshold > 1.0)
    throw std::invalid_argument("optimize: threshold must lie in (0, 1]");
  SearchSpace space = make_space(system, params.channels, params.segments,
                                 params.dt_s, params.max_amp_hz);
  std::mt19937_64 rng(params.seed);

  std::vector<double> p(space.size(), 0.0);
  if (params.init) {
    if (params.init->channels != params.channels)
      throw std::invalid_argument("optimize: init channels must match params");
    const std::size_t copy =
        std::min<std::size_t>(params.init->segments.size(),
                              static_cast<std::size_t>(params.segments));
    for (std::size_t s = 0; s < copy; ++s) {
      const ShapedSegment& seg = params.init->segments[s];
      for (std::size_t ch = 0; ch < params.channels.size(); ++ch) {
        const std::size_t base = (s * params.channels.size() + ch) * 2;
        p[base] = seg.amp_hz[ch] * std::cos(seg.phase_rad[ch]);
        p[base + 1] = seg.amp_hz[ch] * std::sin(seg.phase_rad[ch]);
      }
    }
  } else {
    std::uniform_real_distribution<double> amp(0.0, params.max_amp_hz / 20.0);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
    for (std::size_t i = 0; i < p.size(); i += 2) {
      const double r = amp(rng), t = ph(rng);
      p[i] = r * std::cos(t);
      p[i + 1] = r * std::sin(t);
    }
  }
  space.clamp(p);

  OptimizationRun run;
  run.target = target;
  run.segments = params.segments;
  run.dt_s = params.dt_s;
  run.max_amp_hz = params.max_amp_hz;
  run.budget = params.budget;

  std::vector<double> best = p;
  double best_f = objective(space, p, target);
  run.history.push_back(best_f);

  const double fd_step = 1e-3 * params.max_amp_hz;
  double learning_rate = 0.02 * params.max_amp_hz;
  int iterations = 0;
  int restarts_left = params.restarts;

  std::vector<CMat> props(space.segments), prefix(space.segments),
      suffix(space.segments);
  std::vector<double> grad(space.size()), candidate(space.size());

  while (best_f < params.threshold && iterations < params.budget) {
    ++iterations;
    for (int s = 0; s < space.segments; ++s) props[s] = space.segment_propagator(p, s);
    prefix[0] = CMat::Identity(kDim, kDim);
    for (int s = 1; s < space.segments; ++s) prefix[s] = props[s - 1] * prefix[s - 1];
    suffix[space.segments - 1] = CMat::Identity(kDim, kDim);
    for (int s = space.segments - 2; s >= 0; --s) suffix[s] = suffix[s + 1] * props[s + 1];

    // d|Tr(target^dagger suffix P_s prefix)| via central differences on each
    // Cartesian control; only segment s is rebuilt per probe.
    double grad_max = 0.0;
    for (int s = 0; s < space.segments; ++s) {
      const CMat window = prefix[s] * target.adjoint() * suffix[s];
      for (std::size_t i = s * space.channels.size() * 2;
           i < (s + 1) * space.channels.size() * 2; ++i) {
        const double saved = p[i];
        p[i] = saved + fd_step;
        const double hi = std::abs((window * space.segment_propagator(p, s)).trace());
        p[i] = saved - fd_step;
        const double lo = std::abs((window * space.segment_propagator(p, s)).trace());
        p[i] = saved;
        grad[i] = (hi - lo) / (2.0 * fd_step * kDim);
        grad_max = std::max(grad_max, std::abs(grad[i]));
      }
    }

    bool improved = false;
    if (grad_max > 0.0) {
      double lr = learning_rate;
      for (int attempt = 0; attempt < 10; ++attempt, lr /= 2.0) {
        for (std::size_t i = 0; i < p.size(); ++i)
          candidate[i] = p[i] + lr * grad[i] / grad_max;
        space.clamp(candidate);
        const double f = objective(space, candidate, target);
        if (f > best_f + 1e-13) {
          p = candidate;
          best = candidate;
          best_f = f;
          learning_rate = std::min(lr * 2.0, 0.1 * params.max_amp_hz);
          improved = true;
          break;
        }
      }
    }

    if (!improved) {
      if (restarts_left-- <= 0) {
        run.history.push_back(best_f);
        break;
      }
      // Seeded perturbation of the best point restarts the climb.
      std::normal_distribution<double> kick(0.0, params.max_amp_hz / 20.0);
      std::uniform_real_distribution<double> gate(0.0, 1.0);
      p = best;
      for (double& x : p)
        if (gate(rng) < 0.3) x += kick(rng);
      space.clamp(p);
      learning_rate = 0.02 * params.max_amp_hz;
      const double f = objective(space, p, target);
      if (f > best_f) {
        best = p;
        best_f = f;
      }
    }
    run.history.push_back(best_f);
  }

  run.fidelity = best_f;
  run.converged = best_f >= params.threshold;
  run.iterations = iterations;
  run.pulse = space.to_pulse(best, params.init ? params.init->label : "opt");
  return run;
}

}  // namespace eaqdc
