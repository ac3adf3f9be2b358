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
#ifndef EAQDC_READOUT_HPP
#define EAQDC_READOUT_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "eaqdc/predictions.hpp"
#include "eaqdc/quantum.hpp"
#include "eaqdc/spin_system.hpp"

namespace eaqdc {

// The four resolved lines of the observed spin's multiplet, left to right
// (descending frequency). Which (b, c) ancilla state owns which line is
// decided by the J-coupling signs, not hard-coded.
struct PeakSet {
  std::array<double, 4> f{};                      // integrals / reference
  std::array<double, 4> freq_hz{};                // line positions, descending
  std::array<std::pair<int, int>, 4> label_map{}; // line -> (b, c)
  std::string observed_label;
  int observed_spin = 0;
  double reference_scale = 1.0;
};

// Diagonal Pauli coefficients recoverable from the work-qubit multiplet;
// c0 is fixed at 1/8 by unit trace. c1 and c6 come from direct observation,
// c3 (and c6 again) from the swap-assisted spectrum.
struct CoefficientEstimate {
  static constexpr double c0 = 0.125;
  double c1 = 0.0;
  double c3 = 0.0;
  double c6 = 0.0;
  bool has_c1 = false;
  bool has_c3 = false;
  bool has_c6 = false;
};

class SpectralReadout {
 public:
  // Derives the line->(b, c) map from the coupling signs and validates it
  // against the Pauli-decomposition oracle; a mismatch throws
  // std::logic_error (configuration error, never a silent result).
  explicit SpectralReadout(const SpinSystem& system, int observe = 0);

  const SpinSystem& system() const { return system_; }
  int observed_spin() const { return observe_; }
  std::array<std::pair<int, int>, 4> label_map() const { return map_; }
  std::array<double, 4> line_freq_hz() const { return freq_; }

  // Applies the pi/2 observation pulse to the observed spin of a copy of
  // rho and integrates the four lines; entry k equals
  // (rho(0bc,0bc) - rho(1bc,1bc)) / reference_scale for the (b, c) owning
  // line k. Use the default scale 1 for unit-trace states; pass
  // reference_peak(prepare_pps(...)) for deviation states.
  PeakSet measure_peaks(const DensityMatrix& rho, double reference_scale = 1.0) const;

  // Raw integral of the single line a pseudo-pure |000> produces; the
  // normalization reference for deviation-state spectra. Throws
  // std::runtime_error if it is not positive.
  double reference_peak(const DensityMatrix& pps_state) const;

  // c1 = (f1+f2+f3+f4)/8, c6 = (f1+f2-f3-f4)/8 from the direct spectrum.
  static CoefficientEstimate extract_direct(const PeakSet& peaks);
  // Same formulas on the swap-assisted spectrum yield c3 and c6.
  static CoefficientEstimate extract_swapped(const PeakSet& peaks);
  // Union of the two partial estimates; the direct c6 wins when both exist.
  static CoefficientEstimate combine(const CoefficientEstimate& direct,
                                     const CoefficientEstimate& swapped);

  // i_c0 = 2(c0+c1+c3+c6), i_c1 = 2(c0+c1-c3-c6). Throws
  // std::invalid_argument if a coefficient is missing.
  static IntensityPair intensities_from_coefficients(const CoefficientEstimate& est);

  // Illustrative Lorentzian spectrum of the observed spin: sampled
  // (frequency Hz, amplitude) pairs, linewidth 1/(pi T2). Non-normative;
  // the peak integrals above are the measurement model.
  std::vector<std::pair<double, double>> synthesize_spectrum(
      const DensityMatrix& rho, int n_points = 2048, double span_hz = 500.0,
      double reference_scale = 1.0) const;

 private:
  SpinSystem system_;
  int observe_ = 0;
  std::array<std::pair<int, int>, 4> map_{};
  std::array<double, 4> freq_{};
};

}  // namespace eaqdc

#endif  // EAQDC_READOUT_HPP
