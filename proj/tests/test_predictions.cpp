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
#include <doctest.h>

#include <vector>

#include "eaqdc/predictions.hpp"
#include "eaqdc/types.hpp"
#include "test_support.hpp"

using namespace eaqdc;
using test::near;

namespace {

std::vector<double> canonical_alphas() {
  return {0.0, kPi / 10, kPi / 5, 3 * kPi / 10, 2 * kPi / 5, kPi / 2};
}

std::vector<double> canonical_phis() {
  std::vector<double> phis;
  for (int k = 0; k <= 12; ++k) phis.push_back(2 * kPi * k / 12.0);
  return phis;
}

std::vector<std::pair<double, double>> sample_qm(double alpha, int c) {
  std::vector<std::pair<double, double>> curve;
  for (double phi : canonical_phis()) curve.emplace_back(phi, qm_intensity(alpha, phi, c));
  return curve;
}

}  // namespace

TEST_CASE("quantum intensities hit the frozen closed-form values") {
  CHECK(near(qm_intensity(0.0, kPi, 0), 0.25, 1e-15));
  CHECK(near(qm_intensity(kPi / 2, 0.0, 0), 0.5, 1e-15));
  CHECK(near(qm_intensity(kPi / 2, kPi, 0), 0.0, 1e-15));
  CHECK(near(qm_intensity(kPi / 2, 0.0, 1), 0.25, 1e-15));
  CHECK_THROWS_AS((void)qm_intensity(0.1, 0.2, 2), std::invalid_argument);
}

TEST_CASE("hidden-variable intensity depends only on the phase") {
  CHECK(near(hv_intensity(0.0), 0.75, 1e-15));
  CHECK(near(hv_intensity(kPi), 0.25, 1e-15));
  CHECK(near(hv_intensity(kPi / 2), 0.5, 1e-15));
  for (double a1 : canonical_alphas())
    for (double a2 : canonical_alphas())
      for (double phi : canonical_phis())
        CHECK(hv_intensities(a1, phi).i_c0 == hv_intensities(a2, phi).i_c0);
}

TEST_CASE("closed-form visibilities follow the squared projections") {
  CHECK(near(qm_visibility(kPi / 2, 0), 1.0, 1e-15));
  CHECK(near(qm_visibility(0.0, 0), 0.0, 1e-15));
  CHECK(near(qm_visibility(kPi / 4, 0), 0.5, 1e-15));
  CHECK(near(qm_visibility(kPi / 4, 1), 0.5, 1e-15));
  for (double a : canonical_alphas())
    CHECK(near(qm_visibility(a, 0) + qm_visibility(a, 1), 1.0, 1e-15));
}

TEST_CASE("curve visibility matches the closed forms on the canonical grid") {
  for (double a : canonical_alphas()) {
    CHECK(near(visibility_from_curve(sample_qm(a, 0)), qm_visibility(a, 0), 1e-9));
    CHECK(near(visibility_from_curve(sample_qm(a, 1)), qm_visibility(a, 1), 1e-9));
  }
}

TEST_CASE("hidden-variable curve visibility is exactly one half") {
  std::vector<std::pair<double, double>> curve;
  for (double phi : canonical_phis()) curve.emplace_back(phi, hv_intensity(phi));
  CHECK(visibility_from_curve(curve) == 0.5);
}

TEST_CASE("curve visibility flags degenerate inputs") {
  const std::vector<std::pair<double, double>> flat = {{0.0, 0.3}, {1.0, 0.3}};
  CHECK(visibility_from_curve(flat) == 0.0);
  CHECK_THROWS_AS((void)visibility_from_curve({{0.0, 0.1}}), std::invalid_argument);
  const std::vector<std::pair<double, double>> zero = {{0.0, 0.0}, {kPi, 0.0}};
  CHECK_THROWS_AS((void)visibility_from_curve(zero), std::domain_error);
}

TEST_CASE("intensity ranges stay inside the model bounds") {
  for (double a : canonical_alphas()) {
    for (double phi : canonical_phis()) {
      for (int c : {0, 1}) {
        const double qm = qm_intensity(a, phi, c);
        CHECK(qm >= 0.0);
        CHECK(qm <= 0.75 + 1e-15);
      }
      const double hv = hv_intensity(phi);
      CHECK(hv >= 0.25 - 1e-15);
      CHECK(hv <= 0.75 + 1e-15);
    }
  }
}

TEST_CASE("discrimination gap between the models follows the alpha bias") {
  for (double a : canonical_alphas()) {
    const double gap = std::abs(qm_visibility(a, 0) - qm_visibility(a, 1));
    CHECK(near(gap, std::abs(std::cos(2 * a)), 1e-12));
    CHECK(near(std::abs(qm_visibility(a, 0) - hv_visibility()),
               std::abs(std::cos(2 * a)) / 2, 1e-12));
  }
}
