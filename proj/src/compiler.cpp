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
#include "eaqdc/compiler.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <utility>

#include "eaqdc/optimizer.hpp"

namespace eaqdc {

namespace {

constexpr int kSpins = 3;

// Best rational p/q with q bounded, via continued fractions. The canonical
// gate angles are exact dyadic fractions of pi, so they come back exact.
Rational rationalize(double x, long long max_den, double tol) {
  if (!std::isfinite(x))
    throw std::invalid_argument("rationalize: non-finite input");
  const bool negative = x < 0;
  const double v = std::abs(x);
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    const double a_real = std::floor(frac);
    const long long a = static_cast<long long>(a_real);
    const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::abs(v - static_cast<double>(p1) / static_cast<double>(q1)) <= tol)
      break;
    const double rem = frac - a_real;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  return Rational(negative ? -p1 : p1, q1);
}

ShapedPulse default_shape(const Gate& g, const SpinSystem& sys,
                          const CompileOptions& opt) {
  if (g.name == "phase")
    return render_single_qubit(Mat2(g.matrix), g.targets[0], sys,
                               opt.phase_segments, opt.single_qubit_dt_s,
                               opt.max_amp_hz);
  if (g.name == "y_alpha")
    return render_single_qubit(Mat2(g.matrix), g.targets[0], sys,
                               opt.ancilla_segments, opt.single_qubit_dt_s,
                               opt.max_amp_hz);
  if (g.name == "swap")
    return render_swap(g.targets[0], g.targets[1], sys, opt.swap_segments,
                       opt.swap_dt_s, opt.max_amp_hz);
  throw std::invalid_argument("compile: no shaped template for gate '" +
                              g.name + "'");
}

// Shared emission helpers. Angles are signed; the machine folds a negative
// angle into the pulse phase.
struct Emitter {
  const SpinSystem& sys;
  const CompileOptions& opt;
  PulseProgram& prog;
  std::vector<ZzBlockInfo>* blocks;

  void hard(int q, double angle, double phase) {
    HardPulse p;
    p.targets = {q};
    p.angle = angle;
    p.phase = phase;
    p.duration_s = opt.hard_pulse_s;
    prog.push(p);
  }

  void rz(int q, double theta) {
    hard(q, -kPi / 2, 0.0);
    hard(q, theta, kPi / 2);
    hard(q, kPi / 2, 0.0);
  }

  // Echo block realizing exp(-i pi ratio sz sz): delay, pi on the spectator,
  // delay, pi on the spectator. The delay is solved from the pair coupling;
  // when the coupling sign fights the requested angle the whole block is
  // conjugated by pi pulses on the first pair member, which flips the pair
  // term and leaves the refocusing intact.
  void zz(int a, int b, double gamma_over_pi, const std::string& origin) {
    if (a > b) std::swap(a, b);
    const Rational ratio = rationalize(gamma_over_pi, 1'000'000, 1e-12);
    if (ratio.num == 0) return;
    const double j = sys.j(a, b);
    if (std::abs(j) < 1e-9)
      throw std::invalid_argument("compile: spins " + std::to_string(a) +
                                  " and " + std::to_string(b) +
                                  " have no usable coupling");
    const bool mismatch = (ratio.num > 0) != (j > 0);
    const double tau = static_cast<double>(std::llabs(ratio.num)) /
                       (static_cast<double>(ratio.den) * std::abs(j));
    const int spectator = 3 - a - b;
    if (mismatch) hard(a, kPi, 0.0);
    const Delay half{tau, {true, true, true}};
    prog.push(half);
    hard(spectator, kPi, 0.0);
    prog.push(half);
    hard(spectator, kPi, 0.0);
    if (mismatch) hard(a, kPi, 0.0);
    if (blocks)
      blocks->push_back({a, b, Rational(2 * std::llabs(ratio.num), ratio.den),
                         kPi * j * tau, origin});
  }

  void cnot(int c, int t, const std::string& origin) {
    const double j = sys.j(c, t);
    if (std::abs(j) < 1e-9)
      throw std::invalid_argument("compile: spins " + std::to_string(c) +
                                  " and " + std::to_string(t) +
                                  " have no usable coupling");
    const double s = j > 0 ? 1.0 : -1.0;
    hard(t, kPi / 2, kPi / 2);
    zz(c, t, s * 0.25, origin);
    hard(t, s * kPi / 2, 0.0);
    rz(t, -s * kPi / 2);
    rz(c, s * kPi / 2);
  }

  void cry(int c, int t, double beta, const std::string& origin) {
    hard(c, kPi, 0.0);
    hard(t, kPi / 2, 0.0);
    zz(c, t, beta / (4.0 * kPi), origin);
    hard(t, -kPi / 2, 0.0);
    hard(c, kPi, 0.0);
    hard(t, beta / 2, kPi / 2);
  }

  void crx(int c, int t, double beta, const std::string& origin) {
    hard(c, kPi, 0.0);
    hard(t, -kPi / 2, kPi / 2);
    zz(c, t, beta / (4.0 * kPi), origin);
    hard(t, kPi / 2, kPi / 2);
    hard(c, kPi, 0.0);
    hard(t, beta / 2, 0.0);
  }
};

void check_targets(const Gate& g, std::size_t arity) {
  if (g.targets.size() != arity)
    throw std::invalid_argument("compile: gate '" + g.name +
                                "' has the wrong target count");
  for (int q : g.targets)
    if (q < 0 || q >= kSpins)
      throw std::invalid_argument("compile: gate '" + g.name +
                                  "' targets a spin outside the register");
  if (arity == 2 && g.targets[0] == g.targets[1])
    throw std::invalid_argument("compile: gate '" + g.name +
                                "' repeats a target");
}

double require_angle(const std::optional<double>& value, const char* name) {
  if (!value)
    throw std::invalid_argument(std::string("compile: gate '") + name +
                                "' is missing its angle parameter");
  return *value;
}

}  // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
}

PulseCompiler::PulseCompiler(SpinSystem system, CompileOptions options)
    : system_(std::move(system)), options_(std::move(options)) {
  system_.validate();
}

PulseProgram PulseCompiler::lower_gate(const Gate& g,
                                       std::vector<ZzBlockInfo>* blocks) const {
  PulseProgram prog;
  Emitter em{system_, options_, prog, blocks};

  if (g.name == "h") {
    check_targets(g, 1);
    em.hard(g.targets[0], kPi / 2, kPi / 2);
    em.hard(g.targets[0], kPi, 0.0);
  } else if (g.name == "rx") {
    check_targets(g, 1);
    em.hard(g.targets[0], require_angle(g.params.theta, "rx"), 0.0);
  } else if (g.name == "ry") {
    check_targets(g, 1);
    em.hard(g.targets[0], require_angle(g.params.theta, "ry"), kPi / 2);
  } else if (g.name == "rz") {
    check_targets(g, 1);
    em.rz(g.targets[0], require_angle(g.params.theta, "rz"));
  } else if (g.name == "phase") {
    check_targets(g, 1);
    if (options_.shaped)
      prog.push(options_.shape_provider
                    ? options_.shape_provider(g, system_, options_)
                    : default_shape(g, system_, options_));
    else
      em.rz(g.targets[0], require_angle(g.params.phi, "phase"));
  } else if (g.name == "y_alpha") {
    check_targets(g, 1);
    if (options_.shaped)
      prog.push(options_.shape_provider
                    ? options_.shape_provider(g, system_, options_)
                    : default_shape(g, system_, options_));
    else
      em.hard(g.targets[0], -2.0 * require_angle(g.params.alpha, "y_alpha"),
              kPi / 2);
  } else if (g.name == "cnot" || g.name == "ch" || g.name == "cry" ||
             g.name == "crx") {
    check_targets(g, 2);
    const int c = g.control.value_or(g.targets[0]);
    const int t = g.targets[0] == c ? g.targets[1] : g.targets[0];
    if (g.name == "cnot") {
      em.cnot(c, t, "cnot");
    } else if (g.name == "cry") {
      em.cry(c, t, require_angle(g.params.theta, "cry"), "cry");
    } else if (g.name == "crx") {
      em.crx(c, t, require_angle(g.params.theta, "crx"), "crx");
    } else {
      em.cry(c, t, kPi / 2, "ch.cry");
      em.crx(c, t, kPi, "ch.crx");
    }
  } else if (g.name == "entangle") {
    check_targets(g, 2);
    em.hard(g.targets[0], require_angle(g.params.theta, "entangle"), kPi / 2);
    em.cnot(g.targets[0], g.targets[1], "entangle");
  } else if (g.name == "swap") {
    check_targets(g, 2);
    if (options_.swap_strategy == SwapStrategy::three_cnot) {
      em.cnot(g.targets[0], g.targets[1], "swap");
      em.cnot(g.targets[1], g.targets[0], "swap");
      em.cnot(g.targets[0], g.targets[1], "swap");
    } else {
      prog.append(compile_swap(g.targets[0], g.targets[1], SwapStrategy::shaped));
    }
  } else {
    throw std::invalid_argument("compile: unsupported gate '" + g.name + "'");
  }
  return prog;
}

PulseProgram PulseCompiler::compile_swap(int a, int b,
                                         SwapStrategy strategy) const {
  PulseProgram prog;
  if (strategy == SwapStrategy::three_cnot) {
    Emitter em{system_, options_, prog, nullptr};
    em.cnot(a, b, "swap");
    em.cnot(b, a, "swap");
    em.cnot(a, b, "swap");
    return prog;
  }
  const Gate g = gates::swap(a, b);
  const ShapedPulse pulse = options_.shape_provider
                                ? options_.shape_provider(g, system_, options_)
                                : default_shape(g, system_, options_);
  const CMat want = embed_unitary(gates::swap_matrix(), {a, b}, kSpins);
  const double f = hs_fidelity(pulse_propagator(pulse, system_), want);
  if (f < 0.995) {
    char msg[96];
    std::snprintf(msg, sizeof msg,
                  "compile_swap: shaped swap reaches %.6f, below 0.995", f);
    throw std::runtime_error(msg);
  }
  prog.push(pulse);
  return prog;
}

CMat PulseCompiler::decomposition_reference(const std::vector<Gate>& gates) const {
  CMat u = CMat::Identity(8, 8);
  for (const Gate& g : gates) {
    const CMat m = g.name == "ch"
                       ? gates::controlled(gates::rx_matrix(kPi) *
                                           gates::ry_matrix(kPi / 2))
                       : g.matrix;
    u = embed_unitary(m, g.targets, kSpins) * u;
  }
  return u;
}

CompilationReport PulseCompiler::compile(const std::vector<Gate>& gates) const {
  CompilationReport rep;
  for (const Gate& g : gates) rep.program.append(lower_gate(g, &rep.zz_blocks));
  if (options_.append_swap_readout) {
    if (options_.swap_strategy == SwapStrategy::three_cnot) {
      Emitter em{system_, options_, rep.program, &rep.zz_blocks};
      em.cnot(0, 2, "swap");
      em.cnot(2, 0, "swap");
      em.cnot(0, 2, "swap");
    } else {
      rep.program.append(compile_swap(0, 2, SwapStrategy::shaped));
    }
  }
  if (options_.include_detection) {
    Emitter em{system_, options_, rep.program, nullptr};
    em.hard(0, kPi / 2, kPi / 2);
  }

  CMat reference = decomposition_reference(gates);
  CMat ideal = CMat::Identity(8, 8);
  for (const Gate& g : gates)
    ideal = embed_unitary(g.matrix, g.targets, kSpins) * ideal;
  if (options_.append_swap_readout) {
    const CMat swap02 = embed_unitary(gates::swap_matrix(), {0, 2}, kSpins);
    reference = swap02 * reference;
    ideal = swap02 * ideal;
  }
  if (options_.include_detection) {
    const CMat detect = embed_unitary(gates::ry_matrix(kPi / 2), {0}, kSpins);
    reference = detect * reference;
    ideal = detect * ideal;
  }

  const CMat u = program_unitary(rep.program, system_);
  rep.hs_fidelity_vs_ideal = hs_fidelity(u, reference);
  rep.intensity_error =
      (u.col(0).cwiseAbs2() - ideal.col(0).cwiseAbs2()).cwiseAbs().maxCoeff();
  rep.pulse_count = rep.program.pulse_count();
  rep.total_duration_s = rep.program.total_duration_s();
  return rep;
}

CompilationReport PulseCompiler::compile(const Circuit& circuit) const {
  return compile(circuit.gates);
}

}  // namespace eaqdc
