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
#ifndef EAQDC_CIRCUIT_HPP
#define EAQDC_CIRCUIT_HPP

#include <vector>

#include "eaqdc/predictions.hpp"
#include "eaqdc/quantum.hpp"

namespace eaqdc {

// Entanglement-assisted delayed-choice interferometer on three qubits.
// Qubit 0 is the interfering system (A), qubit 1 the quantum control (B),
// qubit 2 the ancilla (C) that records which mode the control took.
//
// Gate order: B and C are driven into sqrt(eta)|00> + sqrt(1-eta)|11> (a
// rotation of 2*arccos(sqrt(eta)) on B, then CNOT B->C; eta = 1/2 gives the
// EPR pair); A passes a beam splitter (H), picks up a relative phase phi,
// then hits a second beam splitter applied only when B = |1> (controlled-H).
// Finally exp(i alpha sy) on C tunes how much which-slit information the
// ancilla keeps.
struct Circuit {
  int n_qubits = 3;
  std::vector<Gate> gates;
  double alpha = 0.0;
  double phi = 0.0;
  double eta = 0.5;
};

Circuit build_eaqdc(double alpha, double phi, double eta = 0.5);

// Runs a circuit on |000>.
StateVector run(const Circuit& circuit);

// Product of the embedded gate unitaries, in application order.
CMat circuit_unitary(const Circuit& circuit);

// build_eaqdc at eta = 1/2, applied to |000>.
StateVector final_state(double alpha, double phi);

// Closed-form amplitudes of the final state at eta = 1/2, written in terms
// of the particle branch |p> = (|0> + e^{i phi}|1>)/sqrt(2) and the wave
// branch |w> = H|p>. Serves as the independent oracle for run().
StateVector closed_form_state(double alpha, double phi);

// i_c0 = rho(0,0) + rho(2,2), i_c1 = rho(1,1) + rho(3,3): the populations
// with A = 0 grouped by the ancilla value, basis |abc> zero-indexed.
IntensityPair intensities(const StateVector& psi);
IntensityPair intensities(const DensityMatrix& rho);

// Reduced state of A conditioned on the ancilla C reading 0 or 1.
// Normalized; throws if the branch probability vanishes.
DensityMatrix conditional_state_a(const StateVector& psi, int ancilla_outcome);

}  // namespace eaqdc

#endif  // EAQDC_CIRCUIT_HPP
