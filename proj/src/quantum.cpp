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
#include "eaqdc/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace eaqdc {

namespace {

constexpr Eigen::Index kMaxDim = 8;  // three-qubit register

int qubit_count_for_dim(Eigen::Index dim) {
  int n = 0;
  Eigen::Index d = 1;
  while (d < dim) {
    d <<= 1;
    ++n;
  }
  if (d != dim || n < 1 || dim > kMaxDim)
    throw std::invalid_argument("dimension must be 2, 4 or 8");
  return n;
}

int bit_of(int index, int qubit, int n_qubits) {
  return (index >> (n_qubits - 1 - qubit)) & 1;
}

}  // namespace

Mat2 pauli_id() { return Mat2::Identity(); }

Mat2 pauli_x() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

Mat2 pauli_y() {
  Mat2 m;
  m << 0, cxd(0, -1), cxd(0, 1), 0;
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

bool is_unitary(const CMat& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

CMat tensor(const CMat& a, const CMat& b) {
  if (a.rows() * b.rows() > kMaxDim)
    throw std::invalid_argument("tensor: register larger than three qubits");
  return kron(a, b);
}

CVec tensor(const CVec& a, const CVec& b) {
  if (a.size() * b.size() > kMaxDim)
    throw std::invalid_argument("tensor: register larger than three qubits");
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMat embed_unitary(const CMat& u, const std::vector<int>& targets, int n_qubits) {
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  const int k = static_cast<int>(targets.size());
  if (k < 1 || k > 2 || u.rows() != (Eigen::Index(1) << k) || u.rows() != u.cols())
    throw std::invalid_argument("embed_unitary: gate must be 2x2 on one target or 4x4 on two");
  for (int t : targets)
    if (t < 0 || t >= n_qubits)
      throw std::invalid_argument("embed_unitary: target outside register");
  if (k == 2 && targets[0] == targets[1])
    throw std::invalid_argument("embed_unitary: duplicate target");

  CMat full = CMat::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    int sub_col = 0;
    for (int t = 0; t < k; ++t)
      sub_col = (sub_col << 1) | bit_of(static_cast<int>(col), targets[t], n_qubits);
    for (int sub_row = 0; sub_row < (1 << k); ++sub_row) {
      Eigen::Index row = col;
      for (int t = 0; t < k; ++t) {
        const int bit = (sub_row >> (k - 1 - t)) & 1;
        const Eigen::Index mask = Eigen::Index(1) << (n_qubits - 1 - targets[t]);
        row = (row & ~mask) | (bit ? mask : 0);
      }
      full(row, col) += u(sub_row, sub_col);
    }
  }
  return full;
}

Gate::Gate(std::string name, CMat matrix, std::vector<int> targets,
           std::optional<int> control, GateParams params)
    : name(std::move(name)),
      matrix(std::move(matrix)),
      targets(std::move(targets)),
      control(control),
      params(params) {
  if (this->matrix.rows() != this->matrix.cols() ||
      (this->matrix.rows() != 2 && this->matrix.rows() != 4))
    throw std::invalid_argument("Gate: matrix must be 2x2 or 4x4");
  if (!is_unitary(this->matrix))
    throw std::invalid_argument("Gate '" + this->name + "': matrix is not unitary");
  const std::size_t need = this->matrix.rows() == 2 ? 1 : 2;
  if (this->targets.size() != need)
    throw std::invalid_argument("Gate '" + this->name + "': target count mismatch");
}

namespace gates {

namespace {

GateParams with_theta(double theta) {
  GateParams p;
  p.theta = theta;
  return p;
}

GateParams with_phi(double phi) {
  GateParams p;
  p.phi = phi;
  return p;
}

GateParams with_alpha(double alpha) {
  GateParams p;
  p.alpha = alpha;
  return p;
}

}  // namespace

Mat2 rx_matrix(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat2 m;
  m << c, cxd(0, -s), cxd(0, -s), c;
  return m;
}

Mat2 ry_matrix(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat2 m;
  m << c, -s, s, c;
  return m;
}

Mat2 rz_matrix(double theta) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = std::exp(cxd(0, -theta / 2));
  m(1, 1) = std::exp(cxd(0, theta / 2));
  return m;
}

Mat2 rot_matrix(double theta, double phase) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat2 m;
  m << c, cxd(0, -s) * std::exp(cxd(0, -phase)),
      cxd(0, -s) * std::exp(cxd(0, phase)), c;
  return m;
}

Mat2 phase_matrix(double phi) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = 1;
  m(1, 1) = std::exp(cxd(0, phi));
  return m;
}

Mat2 y_alpha_matrix(double alpha) {
  // exp(i alpha sigma_y), full-angle convention.
  const double c = std::cos(alpha), s = std::sin(alpha);
  Mat2 m;
  m << c, s, -s, c;
  return m;
}

Mat2 hadamard_matrix() {
  Mat2 m;
  const double r = 1.0 / std::sqrt(2.0);
  m << r, r, r, -r;
  return m;
}

Mat4 cnot_matrix() {
  Mat4 m = Mat4::Identity();
  m(2, 2) = m(3, 3) = 0;
  m(2, 3) = m(3, 2) = 1;
  return m;
}

Mat4 swap_matrix() {
  Mat4 m = Mat4::Identity();
  m(1, 1) = m(2, 2) = 0;
  m(1, 2) = m(2, 1) = 1;
  return m;
}

CMat controlled(const Mat2& u) {
  Mat4 m = Mat4::Identity();
  m.block<2, 2>(2, 2) = u;
  return m;
}

Gate hadamard(int q) { return Gate("h", hadamard_matrix(), {q}); }

Gate rx(int q, double theta) {
  return Gate("rx", rx_matrix(theta), {q}, std::nullopt, with_theta(theta));
}

Gate ry(int q, double theta) {
  return Gate("ry", ry_matrix(theta), {q}, std::nullopt, with_theta(theta));
}

Gate rz(int q, double theta) {
  return Gate("rz", rz_matrix(theta), {q}, std::nullopt, with_theta(theta));
}

Gate phase(int q, double phi) {
  return Gate("phase", phase_matrix(phi), {q}, std::nullopt, with_phi(phi));
}

Gate y_alpha(int q, double alpha) {
  return Gate("y_alpha", y_alpha_matrix(alpha), {q}, std::nullopt, with_alpha(alpha));
}

Gate cnot(int control, int target) {
  return Gate("cnot", cnot_matrix(), {control, target}, control);
}

Gate controlled_h(int control, int target) {
  return Gate("ch", controlled(hadamard_matrix()), {control, target}, control);
}

Gate controlled_ry(int control, int target, double theta) {
  return Gate("cry", controlled(ry_matrix(theta)), {control, target}, control,
              with_theta(theta));
}

Gate controlled_rx(int control, int target, double theta) {
  return Gate("crx", controlled(rx_matrix(theta)), {control, target}, control,
              with_theta(theta));
}

Gate swap(int q1, int q2) { return Gate("swap", swap_matrix(), {q1, q2}); }

Gate entangle_pair(int q1, int q2, double eta) {
  if (eta < 0.0 || eta > 1.0)
    throw std::invalid_argument("entangle_pair: eta must lie in [0, 1]");
  const double theta = 2.0 * std::acos(std::sqrt(eta));
  const CMat m = CMat(cnot_matrix()) * kron(ry_matrix(theta), Mat2::Identity());
  return Gate("entangle", m, {q1, q2}, std::nullopt, with_theta(theta));
}

}  // namespace gates

StateVector::StateVector(CVec amplitudes) : amps_(std::move(amplitudes)) {
  n_qubits_ = qubit_count_for_dim(amps_.size());
  if (std::abs(amps_.norm() - 1.0) > kNormTol)
    throw std::invalid_argument("StateVector: amplitudes must be normalized");
}

StateVector StateVector::zero(int n_qubits) { return basis(n_qubits, 0); }

StateVector StateVector::basis(int n_qubits, int index) {
  if (n_qubits < 1 || n_qubits > 3)
    throw std::invalid_argument("StateVector: register size must be 1..3 qubits");
  CVec v = CVec::Zero(Eigen::Index(1) << n_qubits);
  v(index) = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::apply(const Gate& gate) const {
  return apply(gate.matrix, gate.targets);
}

StateVector StateVector::apply(const CMat& u, const std::vector<int>& targets) const {
  const int k = static_cast<int>(targets.size());
  if (k < 1 || k > 2 || u.rows() != (Eigen::Index(1) << k))
    throw std::invalid_argument("apply: gate/target shape mismatch");
  for (int t : targets)
    if (t < 0 || t >= n_qubits_)
      throw std::invalid_argument("apply: target outside register");
  CVec out = CVec::Zero(amps_.size());
  const int sub_dim = 1 << k;
  for (int base = 0; base < static_cast<int>(amps_.size()); ++base) {
    // Visit each subspace once, keyed by its representative with all target
    // bits clear.
    bool representative = true;
    for (int t : targets)
      if (bit_of(base, t, n_qubits_)) representative = false;
    if (!representative) continue;
    int idx[4];
    for (int sub = 0; sub < sub_dim; ++sub) {
      int i = base;
      for (int t = 0; t < k; ++t)
        if ((sub >> (k - 1 - t)) & 1) i |= 1 << (n_qubits_ - 1 - targets[t]);
      idx[sub] = i;
    }
    for (int r = 0; r < sub_dim; ++r) {
      cxd acc = 0;
      for (int c = 0; c < sub_dim; ++c) acc += u(r, c) * amps_(idx[c]);
      out(idx[r]) = acc;
    }
  }
  return StateVector(std::move(out));
}

double StateVector::probability(int index) const { return std::norm(amps_(index)); }

double StateVector::overlap(const StateVector& other) const {
  if (other.dim() != dim())
    throw std::invalid_argument("overlap: dimension mismatch");
  return std::abs(amps_.dot(other.amps_));
}

DensityMatrix::DensityMatrix(CMat m, bool deviation)
    : m_(std::move(m)), deviation_(deviation) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("DensityMatrix: not square");
  n_qubits_ = qubit_count_for_dim(m_.rows());
  if (!is_hermitian(m_, 1e-9))
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  const double tr = m_.trace().real();
  const double expected = deviation_ ? 0.0 : 1.0;
  if (std::abs(tr - expected) > 1e-9)
    throw std::invalid_argument("DensityMatrix: trace must be 1 (or 0 for deviations)");
  if (!deviation_) {
    Eigen::SelfAdjointEigenSolver<CMat> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPositivityTol)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::conjugate(const CMat& u) const {
  if (u.rows() != m_.rows() || !is_unitary(u, 1e-9))
    throw std::invalid_argument("conjugate: need a unitary of matching dimension");
  return DensityMatrix(u * m_ * u.adjoint(), deviation_);
}

DensityMatrix DensityMatrix::apply(const Gate& gate) const {
  return conjugate(embed_unitary(gate.matrix, gate.targets, n_qubits_));
}

Eigen::VectorXd DensityMatrix::populations() const { return m_.diagonal().real(); }

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = rho.n_qubits();
  for (int q : keep)
    if (q < 0 || q >= n) throw std::invalid_argument("partial_trace: bad qubit index");
  if (keep.empty() || keep.size() >= static_cast<std::size_t>(n))
    throw std::invalid_argument("partial_trace: keep set must be a proper nonempty subset");

  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);

  const int kd = 1 << keep.size();
  const int td = 1 << traced.size();
  CMat out = CMat::Zero(kd, kd);
  auto full_index = [&](int kept_bits, int traced_bits) {
    int idx = 0;
    for (std::size_t i = 0; i < keep.size(); ++i)
      if ((kept_bits >> (keep.size() - 1 - i)) & 1)
        idx |= 1 << (n - 1 - keep[i]);
    for (std::size_t i = 0; i < traced.size(); ++i)
      if ((traced_bits >> (traced.size() - 1 - i)) & 1)
        idx |= 1 << (n - 1 - traced[i]);
    return idx;
  };
  for (int r = 0; r < kd; ++r)
    for (int c = 0; c < kd; ++c) {
      cxd acc = 0;
      for (int t = 0; t < td; ++t)
        acc += rho.matrix()(full_index(r, t), full_index(c, t));
      out(r, c) = acc;
    }
  return DensityMatrix(std::move(out), rho.is_deviation());
}

PauliCoefficients::PauliCoefficients(const CMat& rho) {
  if (rho.rows() != 8 || rho.cols() != 8)
    throw std::invalid_argument("PauliCoefficients: expects an 8x8 matrix");
  const Mat2 s[4] = {pauli_id(), pauli_x(), pauli_y(), pauli_z()};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        const CMat p = kron(kron(s[i], s[j]), s[k]);
        c_[i][j][k] = (rho * p).trace().real() / 8.0;
      }
}

double PauliCoefficients::diagonal(int index) const {
  static constexpr int kMap[8][3] = {{0, 0, 0}, {3, 0, 0}, {0, 3, 0}, {0, 0, 3},
                                     {3, 3, 0}, {0, 3, 3}, {3, 0, 3}, {3, 3, 3}};
  if (index < 0 || index > 7)
    throw std::invalid_argument("PauliCoefficients: diagonal index must be 0..7");
  return c_[kMap[index][0]][kMap[index][1]][kMap[index][2]];
}

CMat PauliCoefficients::reconstruct() const {
  const Mat2 s[4] = {pauli_id(), pauli_x(), pauli_y(), pauli_z()};
  CMat out = CMat::Zero(8, 8);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        if (c_[i][j][k] != 0.0) out += c_[i][j][k] * kron(kron(s[i], s[j]), s[k]);
  return out;
}

PauliCoefficients pauli_decompose(const DensityMatrix& rho) {
  return PauliCoefficients(rho.matrix());
}

double hs_fidelity(const CMat& u, const CMat& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols())
    throw std::invalid_argument("hs_fidelity: dimension mismatch");
  return std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

CMat herm_propagator(const CMat& h, double t) {
  if (!is_hermitian(h, 1e-9))
    throw std::invalid_argument("herm_propagator: generator must be Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const Eigen::VectorXd& w = es.eigenvalues();
  CVec phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    phases(i) = std::exp(cxd(0, -w(i) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace eaqdc
