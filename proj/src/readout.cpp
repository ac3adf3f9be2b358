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
#include "eaqdc/readout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eaqdc {

namespace {

constexpr int kSpins = 3;

int bit_shift(int spin) { return 2 - spin; }

// Basis index with the observed spin cleared and the spectators (ascending
// spin order) set to (b, c).
int sector_base(int observe, int b, int c) {
  int idx = 0, taken = 0;
  for (int s = 0; s < kSpins; ++s) {
    if (s == observe) continue;
    const int bit = taken++ == 0 ? b : c;
    idx |= bit << bit_shift(s);
  }
  return idx;
}

// Diagonal-slice index of Z on one spin: ZII, IZI, IIZ sit at 1, 2, 3.
int z_slice_index(int spin) { return spin + 1; }

// Diagonal-slice index of Z (x) Z on a pair: ZZI, IZZ, ZIZ sit at 4, 5, 6.
int zz_slice_index(int a, int b) {
  if (a > b) std::swap(a, b);
  if (a == 0 && b == 1) return 4;
  if (a == 1 && b == 2) return 5;
  return 6;
}

double sum_with_signs(const PeakSet& peaks, bool weight_by_c) {
  double total = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double sign = weight_by_c ? (peaks.label_map[k].second == 0 ? 1.0 : -1.0)
                                    : 1.0;
    total += sign * peaks.f[k];
  }
  return total / 8.0;
}

}  // namespace

SpectralReadout::SpectralReadout(const SpinSystem& system, int observe)
    : system_(system), observe_(observe) {
  if (observe_ < 0 || observe_ >= kSpins)
    throw std::invalid_argument("SpectralReadout: observed spin outside register");
  system_.validate();

  int spectators[2], taken = 0;
  for (int s = 0; s < kSpins; ++s)
    if (s != observe_) spectators[taken++] = s;

  // Line frequency of the observed spin's transition in the (b, c) sector.
  // The flip costs twice the offset (sz carries the full +-1) minus half of
  // each coupling, signed by the spectator state.
  std::array<std::pair<double, std::pair<int, int>>, 4> lines;
  for (int b = 0; b < 2; ++b)
    for (int c = 0; c < 2; ++c) {
      const double zb = b == 0 ? 1.0 : -1.0;
      const double zc = c == 0 ? 1.0 : -1.0;
      const double f = 2.0 * system_.offset_hz[observe_] -
                       0.5 * (system_.j(observe_, spectators[0]) * zb +
                              system_.j(observe_, spectators[1]) * zc);
      lines[2 * b + c] = {f, {b, c}};
    }
  std::sort(lines.begin(), lines.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  for (int k = 0; k < 4; ++k) {
    freq_[k] = lines[k].first;
    map_[k] = lines[k].second;
  }

  // Oracle one: the machine's own drift Hamiltonian must reproduce every
  // line position.
  const CMat h = drift_hamiltonian(system_, {true, true, true}, true);
  for (int k = 0; k < 4; ++k) {
    const int row = sector_base(observe_, map_[k].first, map_[k].second);
    const int col = row | (1 << bit_shift(observe_));
    const double from_h =
        (std::real(h(col, col)) - std::real(h(row, row))) / (2.0 * kPi);
    if (std::abs(from_h - freq_[k]) > 1e-6)
      throw std::logic_error(
          "SpectralReadout: line map disagrees with the drift Hamiltonian");
  }

  // Oracle two: on every basis state the extraction formulas must agree
  // with the Pauli decomposition of the input.
  const int partner = spectators[1];
  const CMat swap_u = embed_unitary(gates::swap_matrix(), {observe_, partner}, kSpins);
  for (int idx = 0; idx < 8; ++idx) {
    CMat basis = CMat::Zero(8, 8);
    basis(idx, idx) = 1.0;
    const DensityMatrix rho(basis);
    const PauliCoefficients truth = pauli_decompose(rho);
    const CoefficientEstimate direct = extract_direct(measure_peaks(rho));
    if (std::abs(direct.c1 - truth.diagonal(z_slice_index(observe_))) > 1e-12 ||
        std::abs(direct.c6 - truth.diagonal(zz_slice_index(observe_, partner))) >
            1e-12)
      throw std::logic_error(
          "SpectralReadout: direct extraction disagrees with pauli_decompose");
    const CoefficientEstimate swapped =
        extract_swapped(measure_peaks(rho.conjugate(swap_u)));
    if (std::abs(swapped.c3 - truth.diagonal(z_slice_index(partner))) > 1e-12 ||
        std::abs(swapped.c6 - truth.diagonal(zz_slice_index(observe_, partner))) >
            1e-12)
      throw std::logic_error(
          "SpectralReadout: swapped extraction disagrees with pauli_decompose");
  }
}

PeakSet SpectralReadout::measure_peaks(const DensityMatrix& rho,
                                       double reference_scale) const {
  if (rho.n_qubits() != kSpins)
    throw std::invalid_argument("measure_peaks: expects the 3-qubit register");
  if (!(reference_scale > 0.0) || !std::isfinite(reference_scale))
    throw std::invalid_argument("measure_peaks: reference scale must be positive");

  const CMat u = embed_unitary(gates::ry_matrix(kPi / 2), {observe_}, kSpins);
  const CMat observed = u * rho.matrix() * u.adjoint();

  PeakSet out;
  out.freq_hz = freq_;
  out.label_map = map_;
  out.observed_label = system_.labels[observe_];
  out.observed_spin = observe_;
  out.reference_scale = reference_scale;
  for (int k = 0; k < 4; ++k) {
    const int row = sector_base(observe_, map_[k].first, map_[k].second);
    const int col = row | (1 << bit_shift(observe_));
    // Absorption-mode integral: the pi/2 pulse turns the population
    // difference across this transition into the real part of its
    // single-quantum coherence; prior dispersive coherence lands in the
    // imaginary part and is discarded.
    out.f[k] = 2.0 * std::real(observed(row, col)) / reference_scale;
  }
  return out;
}

double SpectralReadout::reference_peak(const DensityMatrix& pps_state) const {
  const PeakSet peaks = measure_peaks(pps_state, 1.0);
  for (int k = 0; k < 4; ++k) {
    if (peaks.label_map[k] != std::pair<int, int>{0, 0}) continue;
    if (!(peaks.f[k] > 1e-9))
      throw std::runtime_error(
          "reference_peak: pseudo-pure reference line is not positive");
    return peaks.f[k];
  }
  throw std::logic_error("reference_peak: line map lacks the (0, 0) sector");
}

CoefficientEstimate SpectralReadout::extract_direct(const PeakSet& peaks) {
  CoefficientEstimate est;
  est.c1 = sum_with_signs(peaks, false);
  est.c6 = sum_with_signs(peaks, true);
  est.has_c1 = est.has_c6 = true;
  return est;
}

CoefficientEstimate SpectralReadout::extract_swapped(const PeakSet& peaks) {
  CoefficientEstimate est;
  est.c3 = sum_with_signs(peaks, false);
  est.c6 = sum_with_signs(peaks, true);
  est.has_c3 = est.has_c6 = true;
  return est;
}

CoefficientEstimate SpectralReadout::combine(const CoefficientEstimate& direct,
                                             const CoefficientEstimate& swapped) {
  CoefficientEstimate est;
  est.has_c1 = direct.has_c1 || swapped.has_c1;
  est.c1 = direct.has_c1 ? direct.c1 : swapped.c1;
  est.has_c3 = direct.has_c3 || swapped.has_c3;
  est.c3 = swapped.has_c3 ? swapped.c3 : direct.c3;
  est.has_c6 = direct.has_c6 || swapped.has_c6;
  est.c6 = direct.has_c6 ? direct.c6 : swapped.c6;
  return est;
}

IntensityPair SpectralReadout::intensities_from_coefficients(
    const CoefficientEstimate& est) {
  if (!est.has_c1 || !est.has_c3 || !est.has_c6)
    throw std::invalid_argument(
        "intensities_from_coefficients: estimate is missing a coefficient");
  const double even = CoefficientEstimate::c0 + est.c1;
  const double odd = est.c3 + est.c6;
  return {2.0 * (even + odd), 2.0 * (even - odd)};
}

std::vector<std::pair<double, double>> SpectralReadout::synthesize_spectrum(
    const DensityMatrix& rho, int n_points, double span_hz,
    double reference_scale) const {
  if (n_points < 2 || span_hz <= 0.0)
    throw std::invalid_argument("synthesize_spectrum: bad sampling grid");
  const PeakSet peaks = measure_peaks(rho, reference_scale);
  const double center = 2.0 * system_.offset_hz[observe_];
  const double half_width = 0.5 / (kPi * system_.t2_s[observe_]);  // HWHM
  std::vector<std::pair<double, double>> samples;
  samples.reserve(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double x =
        center - span_hz / 2 + span_hz * static_cast<double>(i) / (n_points - 1);
    double y = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double dx = x - peaks.freq_hz[k];
      y += peaks.f[k] * half_width * half_width /
           (dx * dx + half_width * half_width);
    }
    samples.emplace_back(x, y);
  }
  return samples;
}

}  // namespace eaqdc
