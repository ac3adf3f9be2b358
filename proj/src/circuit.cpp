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
#include "eaqdc/circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace eaqdc {

Circuit build_eaqdc(double alpha, double phi, double eta) {
  Circuit c;
  c.alpha = alpha;
  c.phi = phi;
  c.eta = eta;
  c.gates.push_back(gates::entangle_pair(1, 2, eta));
  c.gates.push_back(gates::hadamard(0));
  c.gates.push_back(gates::phase(0, phi));
  c.gates.push_back(gates::controlled_h(1, 0));
  c.gates.push_back(gates::y_alpha(2, alpha));
  return c;
}

StateVector run(const Circuit& circuit) {
  StateVector psi = StateVector::zero(circuit.n_qubits);
  for (const Gate& g : circuit.gates) psi = psi.apply(g);
  return psi;
}

CMat circuit_unitary(const Circuit& circuit) {
  const Eigen::Index dim = Eigen::Index(1) << circuit.n_qubits;
  CMat u = CMat::Identity(dim, dim);
  for (const Gate& g : circuit.gates)
    u = embed_unitary(g.matrix, g.targets, circuit.n_qubits) * u;
  return u;
}

StateVector final_state(double alpha, double phi) {
  return run(build_eaqdc(alpha, phi, 0.5));
}

StateVector closed_form_state(double alpha, double phi) {
  const double r = 1.0 / std::sqrt(2.0);
  const cxd e = std::exp(cxd(0, phi));
  // Particle branch (|0> + e^{i phi}|1>)/sqrt(2) and its image under H.
  const cxd p0 = r, p1 = r * e;
  const cxd w0 = 0.5 * (1.0 + e), w1 = 0.5 * (1.0 - e);
  const double ca = std::cos(alpha), sa = std::sin(alpha);

  CVec amps(8);
  auto at = [&](int a, int b, int c) -> cxd& { return amps(4 * a + 2 * b + c); };
  at(0, 0, 0) = r * ca * p0;
  at(1, 0, 0) = r * ca * p1;
  at(0, 1, 0) = r * sa * w0;
  at(1, 1, 0) = r * sa * w1;
  at(0, 0, 1) = -r * sa * p0;
  at(1, 0, 1) = -r * sa * p1;
  at(0, 1, 1) = r * ca * w0;
  at(1, 1, 1) = r * ca * w1;
  return StateVector(std::move(amps));
}

IntensityPair intensities(const StateVector& psi) {
  if (psi.n_qubits() != 3)
    throw std::invalid_argument("intensities: expects the 3-qubit register");
  return {psi.probability(0) + psi.probability(2),
          psi.probability(1) + psi.probability(3)};
}

IntensityPair intensities(const DensityMatrix& rho) {
  if (rho.n_qubits() != 3)
    throw std::invalid_argument("intensities: expects the 3-qubit register");
  const Eigen::VectorXd p = rho.populations();
  return {p(0) + p(2), p(1) + p(3)};
}

DensityMatrix conditional_state_a(const StateVector& psi, int ancilla_outcome) {
  if (psi.n_qubits() != 3)
    throw std::invalid_argument("conditional_state_a: expects the 3-qubit register");
  if (ancilla_outcome != 0 && ancilla_outcome != 1)
    throw std::invalid_argument("conditional_state_a: outcome must be 0 or 1");
  CVec branch = CVec::Zero(8);
  double prob = 0.0;
  for (int i = 0; i < 8; ++i) {
    if ((i & 1) != ancilla_outcome) continue;
    branch(i) = psi.amplitudes()(i);
    prob += std::norm(branch(i));
  }
  if (prob < 1e-14)
    throw std::domain_error("conditional_state_a: branch probability vanishes");
  const CMat rho = branch * branch.adjoint() / prob;
  return partial_trace(DensityMatrix(rho), {0});
}

}  // namespace eaqdc
