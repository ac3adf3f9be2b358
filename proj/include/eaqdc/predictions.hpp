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
#ifndef EAQDC_PREDICTIONS_HPP
#define EAQDC_PREDICTIONS_HPP

#include <utility>
#include <vector>

namespace eaqdc {

// Signal intensities of the work qubit A grouped by the ancilla outcome c.
// These are unnormalized joint probabilities P(A=0, C=c); at full
// interferometer throughput their sum is 1/4 + cos^2(phi/2)/2.
struct IntensityPair {
  double i_c0 = 0.0;
  double i_c1 = 0.0;
};

// Quantum-mechanical intensity for ancilla outcome c:
//   c=0: cos^2(a)/4 + sin^2(a) cos^2(phi/2)/2
//   c=1: sin^2(a)/4 + cos^2(a) cos^2(phi/2)/2
double qm_intensity(double alpha, double phi, int c);

// Hidden-variable model in which every run carries a definite particle/wave
// label: 1/4 + cos^2(phi/2)/2, independent of alpha and of the ancilla
// outcome. Kept verbatim, no renormalization.
double hv_intensity(double phi);

// Fringe visibility over phi at fixed alpha: sin^2(a) for c=0, cos^2(a) for
// c=1. The hidden-variable counterpart is 1/2 for either outcome.
double qm_visibility(double alpha, int c);
double hv_visibility();

// (max - min) / (max + min) over sampled (phi, intensity) pairs. The grid
// must cover the extrema (phi = 0 and phi = pi for these curves). Throws
// std::invalid_argument on fewer than two samples and std::domain_error on
// an all-zero curve, where the ratio is undefined.
double visibility_from_curve(const std::vector<std::pair<double, double>>& samples);

// Convenience pairs over both ancilla outcomes.
IntensityPair qm_intensities(double alpha, double phi);
IntensityPair hv_intensities(double alpha, double phi);

}  // namespace eaqdc

#endif  // EAQDC_PREDICTIONS_HPP
