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
// Release gate: one line per criterion, [PASS]/[FAIL], nonzero exit on any
// failure. Tolerances are pinned here on purpose; tightening or loosening
// them is a reviewed change, not a test detail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "eaqdc/circuit.hpp"
#include "eaqdc/compiler.hpp"
#include "eaqdc/optimizer.hpp"
#include "eaqdc/predictions.hpp"
#include "eaqdc/readout.hpp"
#include "eaqdc/spin_system.hpp"
#include "eaqdc/sweep.hpp"

namespace {

using namespace eaqdc;

int failures = 0;

void report(int index, bool pass, const std::string& name, const std::string& detail) {
  std::printf("[%s] %2d. %s (%s)\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

std::vector<double> grid_alphas() {
  return {0.0, kPi / 10, kPi / 5, 3 * kPi / 10, 2 * kPi / 5, kPi / 2};
}

std::vector<double> grid_phis() {
  std::vector<double> phis;
  for (int k = 0; k <= 12; ++k) phis.push_back(2 * kPi * k / 12);
  return phis;
}

// 1. Circuit-mode intensities match the closed forms on the full grid.
void criterion_grid() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double alpha : grid_alphas())
    for (double phi : grid_phis()) {
      const IntensityPair got = intensities(run(build_eaqdc(alpha, phi)));
      const IntensityPair want = qm_intensities(alpha, phi);
      worst = std::max({worst, std::abs(got.i_c0 - want.i_c0),
                        std::abs(got.i_c1 - want.i_c1)});
    }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(1, worst <= 1e-10 && seconds < 1.0,
         "circuit intensities match the closed forms on the 6x13 grid",
         fmt("max error %.3g, %.3f s", worst, seconds));
}

// 2. Interference visibility follows sin^2/cos^2; the hidden-variable
//    curves sit at exactly one half.
void criterion_visibility() {
  double worst = 0.0;
  bool hv_exact = true;
  for (double alpha : grid_alphas()) {
    std::vector<std::pair<double, double>> c0, c1, h0, h1;
    for (double phi : grid_phis()) {
      const IntensityPair qm = intensities(run(build_eaqdc(alpha, phi)));
      c0.emplace_back(phi, qm.i_c0);
      c1.emplace_back(phi, qm.i_c1);
      const IntensityPair hv = hv_intensities(alpha, phi);
      h0.emplace_back(phi, hv.i_c0);
      h1.emplace_back(phi, hv.i_c1);
    }
    const double s2 = std::sin(alpha) * std::sin(alpha);
    worst = std::max({worst, std::abs(visibility_from_curve(c0) - s2),
                      std::abs(visibility_from_curve(c1) - (1.0 - s2))});
    hv_exact = hv_exact && visibility_from_curve(h0) == 0.5 &&
               visibility_from_curve(h1) == 0.5;
  }
  report(2, worst <= 1e-9 && hv_exact,
         "visibilities equal sin^2/cos^2 of alpha; hidden-variable curves give 1/2",
         fmt("max error %.3g, hv exact: %.0f", worst, hv_exact ? 1.0 : 0.0));
}

// 3. The two models separate whenever cos(2 alpha) != 0, by |cos(2 alpha)|.
void criterion_discrimination() {
  double worst_gap = 0.0;
  bool separated = true;
  for (double alpha : grid_alphas()) {
    const double v0 = qm_visibility(alpha, 0);
    const double v1 = qm_visibility(alpha, 1);
    const double expect = std::abs(std::cos(2 * alpha));
    if (expect == 0.0) continue;
    separated = separated && std::abs(v0 - hv_visibility()) > 0.0 &&
                std::abs(v1 - hv_visibility()) > 0.0;
    worst_gap = std::max(worst_gap, std::abs(std::abs(v0 - v1) - expect));
  }
  report(3, separated && worst_gap <= 1e-9,
         "quantum visibilities depart from 1/2 with gap |cos 2 alpha|",
         fmt("max gap error %.3g", worst_gap));
}

// 4. The simulated final state matches the closed-form amplitudes.
void criterion_state_oracle() {
  std::mt19937_64 gen(20260817ull);
  std::uniform_real_distribution<double> ua(0.0, kPi / 2), up(0.0, 2 * kPi);
  double worst = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double alpha = ua(gen), phi = up(gen);
    worst = std::min(worst, final_state(alpha, phi).overlap(closed_form_state(alpha, phi)));
  }
  report(4, worst >= 1.0 - 1e-10,
         "simulated states overlap the closed-form amplitudes (100 random draws)",
         fmt("min overlap 1 - %.3g", 1.0 - worst));
}

// 5. Peak integrals -> Pauli coefficients -> intensities agrees with direct
//    diagonal arithmetic; the two c6 estimates coincide.
void criterion_readout_pipeline() {
  const SpectralReadout ro(default_system());
  const CMat swap02 = embed_unitary(gates::swap_matrix(), {0, 2}, 3);
  std::mt19937_64 gen(715517ull);
  std::uniform_real_distribution<double> ua(0.0, kPi / 2), up(0.0, 2 * kPi);
  double worst_i = 0.0, worst_c6 = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix rho = DensityMatrix::pure(final_state(ua(gen), up(gen)));
    const CoefficientEstimate direct = SpectralReadout::extract_direct(ro.measure_peaks(rho));
    const CoefficientEstimate swapped =
        SpectralReadout::extract_swapped(ro.measure_peaks(rho.conjugate(swap02)));
    const IntensityPair got = SpectralReadout::intensities_from_coefficients(
        SpectralReadout::combine(direct, swapped));
    const IntensityPair want = intensities(rho);
    worst_i = std::max({worst_i, std::abs(got.i_c0 - want.i_c0),
                        std::abs(got.i_c1 - want.i_c1)});
    worst_c6 = std::max(worst_c6, std::abs(direct.c6 - swapped.c6));
  }
  report(5, worst_i <= 1e-6 && worst_c6 <= 1e-9,
         "spectral coefficient pipeline reproduces the diagonal intensities",
         fmt("max intensity error %.3g, c6 split %.3g", worst_i, worst_c6));
}

// 6. Pseudo-pure preparation: identity restored, the state is |000>.
void criterion_pps() {
  const DensityMatrix dev = prepare_pps(default_system());
  const CMat restored = dev.matrix() + CMat::Identity(8, 8) / 8.0;
  const double overlap = std::real(restored(0, 0));
  const double scale = std::real(dev.matrix()(0, 0)) * 8.0 / 7.0;
  double worst = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k) {
      const double want = i != k ? 0.0 : (i == 0 ? 7.0 : -1.0) * scale / 8.0;
      worst = std::max(worst, std::abs(dev.matrix()(i, k) - want));
    }
  report(6, std::abs(overlap - 1.0) <= 1e-9 && scale > 0.0 && worst <= 1e-9,
         "pseudo-pure preparation yields |000><000| - identity/8",
         fmt("overlap error %.3g, pattern error %.3g", std::abs(overlap - 1.0), worst));
}

// 7. Gate lowering fidelities: exact for hard sequences, >= 0.995 for the
//    shaped phase / ancilla / swap stages; swap length pinned to 7.5 ms.
void criterion_compilation() {
  const SpinSystem sys = default_system();
  const PulseCompiler hard(sys);
  double worst_hard = 1.0;
  std::vector<Gate> gates_to_check = build_eaqdc(kPi / 5, kPi / 3).gates;
  gates_to_check.push_back(gates::cnot(1, 2));
  gates_to_check.push_back(gates::swap(0, 2));
  gates_to_check.push_back(gates::controlled_ry(0, 1, kPi / 2));
  for (const Gate& g : gates_to_check) {
    const CMat u = program_unitary(hard.lower_gate(g), sys);
    worst_hard = std::min(worst_hard, hs_fidelity(u, hard.decomposition_reference({g})));
  }

  CompileOptions shaped_opt;
  shaped_opt.shaped = true;
  const PulseCompiler shaped(sys, shaped_opt);
  double worst_shaped = 1.0;
  for (double phi : grid_phis()) {
    const CMat u = program_unitary(shaped.lower_gate(gates::phase(0, phi)), sys);
    worst_shaped = std::min(
        worst_shaped, hs_fidelity(u, embed_unitary(gates::phase_matrix(phi), {0}, 3)));
  }
  for (double alpha : grid_alphas()) {
    const CMat u = program_unitary(shaped.lower_gate(gates::y_alpha(2, alpha)), sys);
    worst_shaped = std::min(
        worst_shaped,
        hs_fidelity(u, embed_unitary(gates::y_alpha_matrix(alpha), {2}, 3)));
  }
  const ShapedPulse swap_pulse = render_swap(0, 2, sys, 1500, 5e-6, 25e3);
  const double swap_fid = hs_fidelity(pulse_propagator(swap_pulse, sys),
                                      embed_unitary(gates::swap_matrix(), {0, 2}, 3));
  worst_shaped = std::min(worst_shaped, swap_fid);
  const bool swap_len = std::abs(swap_pulse.duration_s() - 7.5e-3) < 1e-12;

  report(7, worst_hard >= 1.0 - 1e-9 && worst_shaped >= 0.995 && swap_len,
         "lowered gates are exact; shaped phase/ancilla/swap stages reach 0.995",
         fmt("min hard 1 - %.3g, min shaped %.6f", 1.0 - worst_hard, worst_shaped));
}

// 8. The full shaped sequence is about thirty pulses over tens of ms.
void criterion_pulse_budget() {
  CompileOptions opt;
  opt.shaped = true;
  opt.swap_strategy = CompileOptions::SwapStrategy::shaped;
  opt.append_swap_readout = true;
  opt.include_detection = true;
  const CompilationReport rep =
      PulseCompiler(default_system(), opt).compile(build_eaqdc(kPi / 5, kPi / 3));
  const bool count_ok = rep.pulse_count >= 20 && rep.pulse_count <= 40;
  const bool duration_ok = rep.total_duration_s >= 0.01 && rep.total_duration_s < 0.1;
  report(8, count_ok && duration_ok,
         "compiled experiment stays within 20-40 pulses over tens of ms",
         fmt("%.0f pulses, %.1f ms", static_cast<double>(rep.pulse_count),
             rep.total_duration_s * 1e3));
}

// 9. Dephasing strictly lowers both visibilities; the tuned noise level
//    keeps the per-cell repeat spread under 0.03.
void criterion_noise() {
  const SpinSystem sys = default_system();
  SweepSpec spec = SweepSpec::defaults();
  spec.modes = {Mode::pulse_noisy};
  spec.alphas = {kPi / 5};
  spec.phis = {0.0, kPi / 2, kPi, 3 * kPi / 2, 2 * kPi};
  spec.repeats = 1;
  spec.amp_noise = 0.0;

  bool monotone = true;
  double prev0 = 2.0, prev1 = 2.0;
  for (double scale : {0.0, 0.5, 1.0, 2.0}) {
    spec.t2_scale = scale;
    const SweepResult res = run_sweep(spec, sys);
    if (res.any_flagged || res.visibilities.size() != 1) {
      monotone = false;
      break;
    }
    monotone = monotone && res.visibilities[0].v_c0 < prev0 &&
               res.visibilities[0].v_c1 < prev1;
    prev0 = res.visibilities[0].v_c0;
    prev1 = res.visibilities[0].v_c1;
  }

  // amp_noise = 0.01 is tuned against the 0.03 repeat-spread budget, it is
  // not derived from first principles.
  SweepSpec noisy = SweepSpec::defaults();
  noisy.modes = {Mode::pulse_noisy};
  noisy.alphas = {kPi / 5};
  noisy.phis = {kPi / 6, kPi / 2, 5 * kPi / 6};
  const SweepResult res = run_sweep(noisy, sys);
  double worst_std = 0.0;
  for (double s : res.cell_std) worst_std = std::max(worst_std, s);

  report(9, monotone && !res.any_flagged && worst_std < 0.03,
         "dephasing lowers visibility monotonically; tuned noise spread < 0.03",
         fmt("monotone %.0f, max cell std %.4f", monotone ? 1.0 : 0.0, worst_std));
}

// 10. Echo-pair timing: the three coupling blocks realize 2 tau J of
//     1/2, 1/4, 1/2 exactly, i.e. exponent angles pi/4, pi/8, pi/4.
void criterion_timing() {
  const CompilationReport rep =
      PulseCompiler(default_system()).compile(build_eaqdc(kPi / 5, kPi / 3));
  bool ok = rep.zz_blocks.size() == 3;
  if (ok) {
    const ZzBlockInfo& bc = rep.zz_blocks[0];
    const ZzBlockInfo& ab4 = rep.zz_blocks[1];
    const ZzBlockInfo& ab2 = rep.zz_blocks[2];
    ok = bc.spin_a == 1 && bc.spin_b == 2 && bc.two_tau_j == Rational{1, 2} &&
         ab4.spin_a == 0 && ab4.spin_b == 1 && ab4.two_tau_j == Rational{1, 4} &&
         ab2.spin_a == 0 && ab2.spin_b == 1 && ab2.two_tau_j == Rational{1, 2} &&
         std::abs(std::abs(bc.angle) - kPi / 4) < 1e-12 &&
         std::abs(std::abs(ab4.angle) - kPi / 8) < 1e-12 &&
         std::abs(std::abs(ab2.angle) - kPi / 4) < 1e-12;
  }
  report(10, ok, "echo delays realize 2 tau J = 1/2, 1/4, 1/2 exactly",
         fmt("%.0f coupling blocks", static_cast<double>(rep.zz_blocks.size())));
}

}  // namespace

int main() {
  criterion_grid();
  criterion_visibility();
  criterion_discrimination();
  criterion_state_oracle();
  criterion_readout_pipeline();
  criterion_pps();
  criterion_compilation();
  criterion_pulse_budget();
  criterion_noise();
  criterion_timing();
  if (failures == 0)
    std::printf("all 10 criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
