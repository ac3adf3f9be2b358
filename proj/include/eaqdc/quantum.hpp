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
#ifndef EAQDC_QUANTUM_HPP
#define EAQDC_QUANTUM_HPP

#include <optional>
#include <string>
#include <vector>

#include "eaqdc/types.hpp"

// Dense state-vector / density-matrix primitives for registers of one to
// three qubits.  Basis ordering everywhere: qubit 0 (spin A) is the most
// significant bit of the computational index, so |abc> maps to 4a + 2b + c.

namespace eaqdc {

Mat2 pauli_id();
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();

bool is_unitary(const CMat& u, double tol = kUnitaryTol);
bool is_hermitian(const CMat& m, double tol = kHermitianTol);

// Kronecker product, expression-friendly.  No dimension cap; tensor() below
// enforces the three-qubit register bound.
template <typename DerivedA, typename DerivedB>
CMat kron(const Eigen::MatrixBase<DerivedA>& a,
          const Eigen::MatrixBase<DerivedB>& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Register-level tensor product; rejects results beyond an 8-dimensional
// (three-qubit) space.
CMat tensor(const CMat& a, const CMat& b);
CVec tensor(const CVec& a, const CVec& b);

// Embeds a k-qubit unitary (k = 1 or 2) acting on `targets` into the full
// 2^n-dimensional register.  targets[0] addresses the most significant
// sub-index of `u`.
CMat embed_unitary(const CMat& u, const std::vector<int>& targets, int n_qubits);

struct GateParams {
  std::optional<double> theta;
  std::optional<double> phi;
  std::optional<double> alpha;
};

// A gate is a 2x2 or 4x4 unitary bound to register targets.  `control`
// records which target (if any) acts as a control; it is metadata for the
// pulse compiler, the matrix already encodes the controlled action.
struct Gate {
  std::string name;
  CMat matrix;
  std::vector<int> targets;
  std::optional<int> control;
  GateParams params;

  Gate(std::string name, CMat matrix, std::vector<int> targets,
       std::optional<int> control = std::nullopt, GateParams params = {});
};

namespace gates {
Gate hadamard(int q);
Gate rx(int q, double theta);
Gate ry(int q, double theta);
Gate rz(int q, double theta);
// Interferometer phase shifter diag(1, e^{i phi}).
Gate phase(int q, double phi);
// Ancilla preparation rotation exp(i alpha sigma_y); note the full angle
// convention (no half-angle).
Gate y_alpha(int q, double alpha);
Gate cnot(int control, int target);
Gate controlled_h(int control, int target);
Gate controlled_ry(int control, int target, double theta);
Gate controlled_rx(int control, int target, double theta);
Gate swap(int q1, int q2);
// Composite B/C entangling preparation: Ry(2 acos(sqrt(eta))) on the first
// target followed by CNOT(first -> second), emitted as one circuit step.
Gate entangle_pair(int q1, int q2, double eta);

Mat2 rx_matrix(double theta);
Mat2 ry_matrix(double theta);
// Rotation by theta about the equatorial axis at azimuth `phase`:
// exp(-i theta (cos(phase) sx + sin(phase) sy) / 2).
Mat2 rot_matrix(double theta, double phase);
Mat2 rz_matrix(double theta);
Mat2 phase_matrix(double phi);
Mat2 y_alpha_matrix(double alpha);
Mat2 hadamard_matrix();
Mat4 cnot_matrix();
Mat4 swap_matrix();
CMat controlled(const Mat2& u);
}  // namespace gates

class StateVector {
 public:
  // Validates: length a power of two covering 1..3 qubits, unit norm.
  explicit StateVector(CVec amplitudes);

  static StateVector zero(int n_qubits);
  static StateVector basis(int n_qubits, int index);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amps_.size(); }
  const CVec& amplitudes() const { return amps_; }
  cxd amp(int index) const { return amps_(index); }

  StateVector apply(const Gate& gate) const;
  StateVector apply(const CMat& u, const std::vector<int>& targets) const;

  double probability(int index) const;
  // |<this|other>|
  double overlap(const StateVector& other) const;

 private:
  CVec amps_;
  int n_qubits_;
};

class DensityMatrix {
 public:
  // A deviation matrix is traceless and may have negative eigenvalues; a
  // proper state has unit trace and non-negative spectrum (within tolerance).
  DensityMatrix(CMat m, bool deviation = false);

  static DensityMatrix pure(const StateVector& psi);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return m_.rows(); }
  const CMat& matrix() const { return m_; }
  bool is_deviation() const { return deviation_; }

  DensityMatrix conjugate(const CMat& u) const;  // u rho u^dagger
  DensityMatrix apply(const Gate& gate) const;

  Eigen::VectorXd populations() const;

 private:
  CMat m_;
  bool deviation_;
  int n_qubits_;
};

// Traces out every qubit not listed in `keep`; kept qubits preserve their
// relative significance order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Coefficients of rho = sum c_{ijk} s_i (x) s_j (x) s_k over the unnormalized
// Pauli-string basis (s_0..s_3 = I, X, Y, Z), c_{ijk} = Tr(rho P)/8.
class PauliCoefficients {
 public:
  explicit PauliCoefficients(const CMat& rho);

  double coeff(int i, int j, int k) const { return c_[i][j][k]; }
  // Diagonal slice in the order III, ZII, IZI, IIZ, ZZI, IZZ, ZIZ, ZZZ.
  double diagonal(int index) const;
  CMat reconstruct() const;

 private:
  double c_[4][4][4];
};

PauliCoefficients pauli_decompose(const DensityMatrix& rho);

// |Tr(U^dagger V)| / d; global-phase-insensitive propagator agreement.
double hs_fidelity(const CMat& u, const CMat& v);

// exp(-i h t) for Hermitian h (rad/s), via spectral decomposition.
CMat herm_propagator(const CMat& h, double t);

}  // namespace eaqdc

#endif  // EAQDC_QUANTUM_HPP
