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
#include "eaqdc/predictions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eaqdc {

namespace {

double sq(double x) { return x * x; }

}  // namespace

double qm_intensity(double alpha, double phi, int c) {
  if (c != 0 && c != 1) throw std::invalid_argument("qm_intensity: c must be 0 or 1");
  const double fringe = 0.5 * sq(std::cos(phi / 2));
  const double ca = sq(std::cos(alpha)), sa = sq(std::sin(alpha));
  return c == 0 ? 0.25 * ca + sa * fringe : 0.25 * sa + ca * fringe;
}

double hv_intensity(double phi) { return 0.25 + 0.5 * sq(std::cos(phi / 2)); }

double qm_visibility(double alpha, int c) {
  if (c != 0 && c != 1) throw std::invalid_argument("qm_visibility: c must be 0 or 1");
  return c == 0 ? sq(std::sin(alpha)) : sq(std::cos(alpha));
}

double hv_visibility() { return 0.5; }

double visibility_from_curve(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("visibility_from_curve: need at least two samples");
  double lo = samples.front().second, hi = lo;
  for (const auto& [phi, value] : samples) {
    lo = std::min(lo, value);
    hi = std::max(hi, value);
  }
  if (hi + lo == 0.0)
    throw std::domain_error("visibility_from_curve: contrast undefined on all-zero curve");
  return (hi - lo) / (hi + lo);
}

IntensityPair qm_intensities(double alpha, double phi) {
  return {qm_intensity(alpha, phi, 0), qm_intensity(alpha, phi, 1)};
}

IntensityPair hv_intensities(double alpha, double phi) {
  (void)alpha;
  const double i = hv_intensity(phi);
  return {i, i};
}

}  // namespace eaqdc
