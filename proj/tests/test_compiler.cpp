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

#include "doctest.h"
#include "eaqdc/circuit.hpp"
#include "eaqdc/optimizer.hpp"
#include "eaqdc/quantum.hpp"
#include "eaqdc/spin_system.hpp"
#include "test_support.hpp"

namespace eaqdc {
namespace {

double gate_fidelity(const PulseCompiler& pc, const Gate& g, const CMat& want) {
  const PulseProgram prog = pc.lower_gate(g);
  return hs_fidelity(program_unitary(prog, pc.system()), want);
}

TEST_CASE("rational fractions normalize and compare exactly") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-1, -2) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0, 1));
  CHECK(Rational(6, 4).num == 3);
  CHECK(Rational(6, 4).den == 2);
  CHECK_FALSE(Rational(1, 2) == Rational(1, 3));
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("single-spin lowerings reproduce their gates") {
  const PulseCompiler pc(default_system());
  CHECK(gate_fidelity(pc, gates::hadamard(0),
                      embed_unitary(gates::hadamard_matrix(), {0}, 3)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gate_fidelity(pc, gates::rz(1, 0.77),
                      embed_unitary(gates::rz_matrix(0.77), {1}, 3)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gate_fidelity(pc, gates::phase(0, 2.1),
                      embed_unitary(gates::phase_matrix(2.1), {0}, 3)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gate_fidelity(pc, gates::y_alpha(2, 0.6),
                      embed_unitary(gates::y_alpha_matrix(0.6), {2}, 3)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gate_fidelity(pc, gates::rx(2, -1.3),
                      embed_unitary(gates::rx_matrix(-1.3), {2}, 3)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gate_fidelity(pc, gates::ry(1, 2.9),
                      embed_unitary(gates::ry_matrix(2.9), {1}, 3)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cnot lowering is exact for every pair and both coupling signs") {
  const PulseCompiler pc(default_system());
  const std::pair<int, int> pairs[] = {{0, 1}, {1, 0}, {1, 2},
                                       {2, 1}, {0, 2}, {2, 0}};
  for (const auto& [c, t] : pairs) {
    const CMat want = embed_unitary(gates::cnot_matrix(), {c, t}, 3);
    CHECK(gate_fidelity(pc, gates::cnot(c, t), want) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("controlled rotations lower exactly, including X sandwiches") {
  const PulseCompiler pc(default_system());
  for (const double beta : {0.9, kPi / 2, -0.9, kPi, -kPi / 2}) {
    const CMat want_ry =
        embed_unitary(gates::controlled(gates::ry_matrix(beta)), {1, 0}, 3);
    CHECK(gate_fidelity(pc, gates::controlled_ry(1, 0, beta), want_ry) ==
          doctest::Approx(1.0).epsilon(1e-12));
    const CMat want_rx =
        embed_unitary(gates::controlled(gates::rx_matrix(beta)), {1, 0}, 3);
    CHECK(gate_fidelity(pc, gates::controlled_rx(1, 0, beta), want_rx) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  // A negative angle over a positive coupling forces the conjugated block:
  // two extra pi pulses relative to the matched sign.
  const PulseProgram plus = pc.lower_gate(gates::controlled_ry(1, 0, kPi / 2));
  const PulseProgram minus = pc.lower_gate(gates::controlled_ry(1, 0, -kPi / 2));
  CHECK(minus.pulse_count() == plus.pulse_count() + 2);
}

TEST_CASE("controlled-H matches its two-rotation decomposition exactly") {
  const PulseCompiler pc(default_system());
  const PulseProgram prog = pc.lower_gate(gates::controlled_h(1, 0));
  const CMat u = program_unitary(prog, pc.system());
  const CMat decomposition = embed_unitary(
      gates::controlled(gates::rx_matrix(kPi) * gates::ry_matrix(kPi / 2)),
      {1, 0}, 3);
  CHECK(hs_fidelity(u, decomposition) == doctest::Approx(1.0).epsilon(1e-12));
  // Against the true controlled-H the B = 1 branch carries a -i phase that
  // only off-diagonal observables feel: |4 - 4i| / 8.
  const CMat truth = embed_unitary(gates::controlled(gates::hadamard_matrix()),
                                   {1, 0}, 3);
  CHECK(hs_fidelity(u, truth) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("hard-pulse circuit compilation is exact where it must be") {
  const PulseCompiler pc(default_system());
  for (const double alpha : {0.0, kPi / 5, kPi / 2}) {
    for (const double phi : {0.0, kPi / 3, kPi, 5.2}) {
      const Circuit circuit = build_eaqdc(alpha, phi);
      const CompilationReport rep = pc.compile(circuit);
      CHECK(rep.hs_fidelity_vs_ideal > 1.0 - 1e-12);
      CHECK(rep.intensity_error < 1e-12);
      CHECK(rep.pulse_count == 31);
      REQUIRE(rep.zz_blocks.size() == 3);
      CHECK(rep.zz_blocks[0].spin_a == 1);
      CHECK(rep.zz_blocks[0].spin_b == 2);
      CHECK(rep.zz_blocks[0].two_tau_j == Rational(1, 2));
      CHECK(rep.zz_blocks[0].origin == "entangle");
      CHECK(rep.zz_blocks[1].spin_a == 0);
      CHECK(rep.zz_blocks[1].spin_b == 1);
      CHECK(rep.zz_blocks[1].two_tau_j == Rational(1, 4));
      CHECK(rep.zz_blocks[1].origin == "ch.cry");
      CHECK(rep.zz_blocks[2].two_tau_j == Rational(1, 2));
      CHECK(rep.zz_blocks[2].origin == "ch.crx");
      CHECK(rep.zz_blocks[0].angle == doctest::Approx(kPi / 4).epsilon(1e-12));
      CHECK(rep.zz_blocks[1].angle == doctest::Approx(kPi / 8).epsilon(1e-12));
      CHECK(rep.zz_blocks[2].angle == doctest::Approx(kPi / 4).epsilon(1e-12));
    }
  }
}

TEST_CASE("echo delays match the rational bookkeeping") {
  const SpinSystem sys = default_system();
  const PulseCompiler pc(sys);
  const CompilationReport rep = pc.compile(build_eaqdc(kPi / 5, 1.0));
  std::vector<double> delays;
  for (const PulseEvent& e : rep.program.events)
    if (const Delay* d = std::get_if<Delay>(&e)) delays.push_back(d->duration_s);
  REQUIRE(delays.size() == 6);  // two halves per echo block
  const double j_bc = std::abs(sys.j(1, 2)), j_ab = std::abs(sys.j(0, 1));
  CHECK(2 * delays[0] * j_bc == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(delays[0] == delays[1]);
  CHECK(2 * delays[2] * j_ab == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(delays[2] == delays[3]);
  CHECK(2 * delays[4] * j_ab == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(delays[4] == delays[5]);
}

TEST_CASE("three-cnot swap is exact and tracked in the report") {
  const PulseCompiler pc(default_system());
  const PulseProgram prog =
      pc.compile_swap(0, 2, CompileOptions::SwapStrategy::three_cnot);
  const CMat want = embed_unitary(gates::swap_matrix(), {0, 2}, 3);
  CHECK(hs_fidelity(program_unitary(prog, pc.system()), want) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prog.pulse_count() == 30);

  CompileOptions opt;
  opt.append_swap_readout = true;
  const PulseCompiler pc2(default_system(), opt);
  const CompilationReport rep = pc2.compile(build_eaqdc(0.4, 0.9));
  REQUIRE(rep.zz_blocks.size() == 6);
  for (int k = 3; k < 6; ++k) {
    CHECK(rep.zz_blocks[k].spin_a == 0);
    CHECK(rep.zz_blocks[k].spin_b == 2);
    CHECK(rep.zz_blocks[k].two_tau_j == Rational(1, 2));
    CHECK(rep.zz_blocks[k].origin == "swap");
    // The work/ancilla coupling is negative, so the realized angle is too.
    CHECK(rep.zz_blocks[k].angle == doctest::Approx(-kPi / 4).epsilon(1e-12));
  }
  CHECK(rep.hs_fidelity_vs_ideal > 1.0 - 1e-12);
  CHECK(rep.intensity_error < 1e-12);
}

TEST_CASE("shaped swap fragment verifies its waveform") {
  CompileOptions opt;
  opt.swap_strategy = CompileOptions::SwapStrategy::shaped;
  const PulseCompiler pc(default_system(), opt);
  const PulseProgram prog =
      pc.compile_swap(0, 2, CompileOptions::SwapStrategy::shaped);
  CHECK(prog.pulse_count() == 1);
  CHECK(prog.total_duration_s() == doctest::Approx(7.5e-3).epsilon(1e-12));

  CompileOptions bad = opt;
  bad.shape_provider = [](const Gate& g, const SpinSystem&,
                          const CompileOptions&) {
    ShapedPulse p;
    p.channels = g.targets;
    p.segments.push_back({1e-5, {0.0, 0.0}, {0.0, 0.0}});
    return p;
  };
  const PulseCompiler broken(default_system(), bad);
  CHECK_THROWS_AS(
      (void)broken.compile_swap(0, 2, CompileOptions::SwapStrategy::shaped),
      std::runtime_error);
}

TEST_CASE("shaped full pipeline hits the pulse and duration budget") {
  CompileOptions opt;
  opt.shaped = true;
  opt.swap_strategy = CompileOptions::SwapStrategy::shaped;
  opt.append_swap_readout = true;
  opt.include_detection = true;
  const PulseCompiler pc(default_system(), opt);
  const CompilationReport rep = pc.compile(build_eaqdc(kPi / 5, 2.0));
  CHECK(rep.pulse_count == 31);
  CHECK(rep.pulse_count >= 20);
  CHECK(rep.pulse_count <= 40);
  CHECK(rep.total_duration_s > 20e-3);
  CHECK(rep.total_duration_s < 30e-3);
  CHECK(rep.hs_fidelity_vs_ideal > 0.98);
  CHECK(rep.intensity_error < 0.05);

  CompileOptions plain = opt;
  plain.append_swap_readout = false;
  plain.include_detection = false;
  const CompilationReport bare = PulseCompiler(default_system(), plain)
                                     .compile(build_eaqdc(kPi / 5, 2.0));
  CHECK(bare.pulse_count == 29);
}

TEST_CASE("hard pulse durations are stamped when requested") {
  CompileOptions opt;
  opt.hard_pulse_s = 10e-6;
  const PulseCompiler pc(default_system(), opt);
  const PulseProgram prog = pc.lower_gate(gates::hadamard(0));
  int hard_pulses = 0;
  for (const PulseEvent& e : prog.events)
    if (const HardPulse* p = std::get_if<HardPulse>(&e)) {
      ++hard_pulses;
      CHECK(p->duration_s == 10e-6);
    }
  CHECK(hard_pulses == 2);
  CHECK(prog.total_duration_s() == doctest::Approx(20e-6).epsilon(1e-12));
}

TEST_CASE("compilation rejects broken inputs") {
  const PulseCompiler pc(default_system());
  CHECK_THROWS_AS((void)pc.lower_gate(Gate("bogus", Mat2::Identity(), {0})),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)pc.lower_gate(gates::cnot(1, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)pc.lower_gate(gates::hadamard(5)),
                  std::invalid_argument);
  SpinSystem cut = default_system();
  cut.set_j(1, 2, 0.0);
  const PulseCompiler uncoupled(cut);
  CHECK_THROWS_AS((void)uncoupled.compile(build_eaqdc(0.3, 0.3)),
                  std::invalid_argument);
  Gate naked = gates::rx(0, 1.0);
  naked.params.theta.reset();
  CHECK_THROWS_AS((void)pc.lower_gate(naked), std::invalid_argument);
}

TEST_CASE("decomposition reference only rewrites the controlled-H") {
  const PulseCompiler pc(default_system());
  const Circuit circuit = build_eaqdc(0.7, 1.9);
  CMat truth = CMat::Identity(8, 8);
  for (const Gate& g : circuit.gates)
    truth = embed_unitary(g.matrix, g.targets, 3) * truth;
  const CMat ref = pc.decomposition_reference(circuit.gates);
  CHECK(hs_fidelity(ref, truth) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  std::vector<Gate> no_ch = {gates::hadamard(0), gates::cnot(1, 2)};
  const CMat same = pc.decomposition_reference(no_ch);
  CMat prod = CMat::Identity(8, 8);
  for (const Gate& g : no_ch) prod = embed_unitary(g.matrix, g.targets, 3) * prod;
  CHECK((same - prod).cwiseAbs().maxCoeff() < 1e-14);
}

}  // namespace
}  // namespace eaqdc
