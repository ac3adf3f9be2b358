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
#include "eaqdc/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "eaqdc/predictions.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace eaqdc {
namespace {

SweepSpec small_spec(std::vector<Mode> modes) {
  SweepSpec spec = SweepSpec::defaults();
  spec.alphas = {kPi / 5, 2 * kPi / 5};
  spec.phis = {kPi / 6, kPi / 2, 5 * kPi / 6};
  spec.modes = std::move(modes);
  spec.repeats = 2;
  return spec;
}

const SweepRow& row_at(const SweepResult& res, std::size_t mode_idx, std::size_t a,
                       std::size_t p, int repeat) {
  const std::size_t na = res.spec.alphas.size();
  const std::size_t np = res.spec.phis.size();
  const std::size_t rep = static_cast<std::size_t>(res.spec.repeats);
  return res.rows[((mode_idx * na + a) * np + p) * rep + repeat];
}

TEST_CASE("mode names round-trip and reject strangers") {
  for (Mode m : {Mode::analytic_qm, Mode::analytic_hv, Mode::circuit, Mode::pulse_ideal,
                 Mode::pulse_shaped, Mode::pulse_noisy}) {
    const auto back = mode_from_string(to_string(m));
    REQUIRE(back.has_value());
    CHECK(*back == m);
  }
  CHECK(to_string(Mode::pulse_noisy) == "pulse-noisy");
  CHECK_FALSE(mode_from_string("warp-field").has_value());
  CHECK_FALSE(mode_from_string("").has_value());
}

TEST_CASE("default grids cover the experimental settings") {
  const SweepSpec spec = SweepSpec::defaults();
  REQUIRE(spec.alphas.size() == 6);
  CHECK(spec.alphas.front() == 0.0);
  CHECK(test::near(spec.alphas.back(), kPi / 2));
  CHECK(test::near(spec.alphas[1], kPi / 10));
  REQUIRE(spec.phis.size() == 13);
  CHECK(spec.phis.front() == 0.0);
  CHECK(test::near(spec.phis.back(), 2 * kPi));
  CHECK(spec.repeats == 4);
  CHECK(spec.eta == 0.5);
  REQUIRE(spec.modes.size() == 3);
  CHECK(spec.modes[0] == Mode::analytic_qm);
  CHECK(spec.modes[1] == Mode::analytic_hv);
  CHECK(spec.modes[2] == Mode::circuit);
}

TEST_CASE("deterministic sweep rows sit in canonical order and agree") {
  const SweepSpec spec = SweepSpec::defaults();
  const SweepResult res = run_sweep(spec, default_system());

  const std::size_t per_mode = 6 * 13 * 4;
  REQUIRE(res.rows.size() == 3 * per_mode);
  REQUIRE(res.cell_std.size() == res.rows.size());
  CHECK_FALSE(res.any_flagged);

  for (std::size_t m = 0; m < 3; ++m)
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t p = 0; p < 13; ++p)
        for (int r = 0; r < 4; ++r) {
          const SweepRow& row = row_at(res, m, a, p, r);
          CHECK(row.mode == spec.modes[m]);
          CHECK(row.alpha == spec.alphas[a]);
          CHECK(row.phi == spec.phis[p]);
          CHECK(row.repeat == r);
          CHECK_FALSE(row.flagged);
          // repeats of a deterministic mode replicate exactly
          CHECK(row.i_c0 == row_at(res, m, a, p, 0).i_c0);
          CHECK(row.i_c1 == row_at(res, m, a, p, 0).i_c1);
        }
  for (double s : res.cell_std) CHECK(s == 0.0);

  // the gate-by-gate circuit reproduces the closed forms
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t p = 0; p < 13; ++p) {
      const IntensityPair want = qm_intensities(spec.alphas[a], spec.phis[p]);
      CHECK(test::near(row_at(res, 0, a, p, 0).i_c0, want.i_c0, 1e-12));
      CHECK(test::near(row_at(res, 2, a, p, 0).i_c0, want.i_c0, 1e-10));
      CHECK(test::near(row_at(res, 2, a, p, 0).i_c1, want.i_c1, 1e-10));
      const IntensityPair hv = hv_intensities(spec.alphas[a], spec.phis[p]);
      CHECK(test::near(row_at(res, 1, a, p, 0).i_c0, hv.i_c0, 1e-12));
    }

  // visibilities follow the closed forms per mode and alpha
  REQUIRE(res.visibilities.size() == 3 * 6);
  for (const VisibilityRow& v : res.visibilities) {
    if (v.mode == Mode::analytic_hv) {
      CHECK(test::near(v.v_c0, 0.5, 1e-12));
      CHECK(test::near(v.v_c1, 0.5, 1e-12));
    } else {
      CHECK(test::near(v.v_c0, std::sin(v.alpha) * std::sin(v.alpha), 1e-9));
      CHECK(test::near(v.v_c1, std::cos(v.alpha) * std::cos(v.alpha), 1e-9));
    }
  }
}

TEST_CASE("hard-pulse cells reproduce the analytic intensities") {
  const SweepSpec spec = small_spec({Mode::pulse_ideal});
  const SweepResult res = run_sweep(spec, default_system());
  CHECK_FALSE(res.any_flagged);
  REQUIRE(res.rows.size() == 2 * 3 * 2);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t p = 0; p < 3; ++p) {
      const IntensityPair want = qm_intensities(spec.alphas[a], spec.phis[p]);
      CHECK(test::near(row_at(res, 0, a, p, 0).i_c0, want.i_c0, 1e-9));
      CHECK(test::near(row_at(res, 0, a, p, 1).i_c1, want.i_c1, 1e-9));
    }
}

TEST_CASE("shaped cells stay within the modulation error budget") {
  const SweepSpec spec = small_spec({Mode::pulse_shaped});
  const SweepResult res = run_sweep(spec, default_system());
  CHECK_FALSE(res.any_flagged);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t p = 0; p < 3; ++p) {
      const IntensityPair want = qm_intensities(spec.alphas[a], spec.phis[p]);
      CHECK(test::near(row_at(res, 0, a, p, 0).i_c0, want.i_c0, 0.05));
      CHECK(test::near(row_at(res, 0, a, p, 0).i_c1, want.i_c1, 0.05));
    }
}

TEST_CASE("noisy cells are seeded per cell and reproducible") {
  SweepSpec spec = small_spec({Mode::pulse_noisy});
  spec.phis = {kPi / 6, 5 * kPi / 6};

  const SweepResult first = run_sweep(spec, default_system());
  const SweepResult second = run_sweep(spec, default_system());
  CHECK_FALSE(first.any_flagged);
  REQUIRE(first.rows.size() == second.rows.size());
  for (std::size_t i = 0; i < first.rows.size(); ++i) {
    CHECK(first.rows[i].i_c0 == second.rows[i].i_c0);
    CHECK(first.rows[i].i_c1 == second.rows[i].i_c1);
    CHECK(first.cell_std[i] == second.cell_std[i]);
  }

  // repeats differ (independent noise draws), and the cell std reports it
  bool any_spread = false;
  for (std::size_t a = 0; a < spec.alphas.size(); ++a)
    for (std::size_t p = 0; p < spec.phis.size(); ++p)
      if (row_at(first, 0, a, p, 0).i_c0 != row_at(first, 0, a, p, 1).i_c0)
        any_spread = true;
  CHECK(any_spread);
  for (std::size_t i = 0; i + 1 < first.cell_std.size(); i += 2)
    CHECK(first.cell_std[i] == first.cell_std[i + 1]);

  SweepSpec other = spec;
  other.seed += 1;
  const SweepResult third = run_sweep(other, default_system());
  bool any_difference = false;
  for (std::size_t i = 0; i < first.rows.size(); ++i)
    if (first.rows[i].i_c0 != third.rows[i].i_c0) any_difference = true;
  CHECK(any_difference);
}

TEST_CASE("a failing pulse stage flags its rows instead of aborting") {
  // A nearly vanished work/ancilla coupling leaves the shaped swap far below
  // its fidelity bar, so every shaped cell must be flagged.
  SpinSystem sys = default_system();
  sys.set_j(0, 2, 5.0);

  SweepSpec spec = small_spec({Mode::circuit, Mode::pulse_shaped});
  spec.alphas = {kPi / 5};
  spec.phis = {kPi / 6, kPi / 2};

  const SweepResult res = run_sweep(spec, sys);
  CHECK(res.any_flagged);
  for (std::size_t p = 0; p < 2; ++p)
    for (int r = 0; r < 2; ++r) {
      CHECK_FALSE(row_at(res, 0, 0, p, r).flagged);
      const SweepRow& bad = row_at(res, 1, 0, p, r);
      CHECK(bad.flagged);
      CHECK(bad.note.find("0.995") != std::string::npos);
      CHECK(bad.i_c0 == 0.0);
    }
  // flagged groups publish no visibility; the clean mode still does
  REQUIRE(res.visibilities.size() == 1);
  CHECK(res.visibilities[0].mode == Mode::circuit);
}

TEST_CASE("sweep specs are validated before any work runs") {
  const SpinSystem sys = default_system();
  SweepSpec spec = SweepSpec::defaults();
  spec.alphas.clear();
  CHECK_THROWS_AS(run_sweep(spec, sys), std::invalid_argument);
  spec = SweepSpec::defaults();
  spec.repeats = 0;
  CHECK_THROWS_AS(run_sweep(spec, sys), std::invalid_argument);
  spec = SweepSpec::defaults();
  spec.eta = 1.5;
  CHECK_THROWS_AS(run_sweep(spec, sys), std::invalid_argument);
  spec = SweepSpec::defaults();
  spec.modes.clear();
  CHECK_THROWS_AS(run_sweep(spec, sys), std::invalid_argument);
  spec = SweepSpec::defaults();
  spec.amp_noise = -0.1;
  CHECK_THROWS_AS(run_sweep(spec, sys), std::invalid_argument);
}

TEST_CASE("csv exports use the stable column layout") {
  SweepSpec spec = SweepSpec::defaults();
  spec.modes = {Mode::analytic_qm};
  const SweepResult res = run_sweep(spec, default_system());

  const std::string csv = sweep_csv(res);
  CHECK(csv.rfind("mode,alpha,phi,repeat,i_c0,i_c1\n", 0) == 0);
  // alpha = 0, phi = 0: the two output ports split 1/4 vs 1/2 exactly
  CHECK(csv.find("\nanalytic-qm,0,0,0,0.25,0.5\n") != std::string::npos);
  std::size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 1 + res.rows.size());

  const std::string vis = visibility_csv(res);
  CHECK(vis.rfind("mode,alpha,v_c0,v_c1\n", 0) == 0);
  std::size_t vlines = 0;
  for (char ch : vis)
    if (ch == '\n') ++vlines;
  CHECK(vlines == 1 + res.visibilities.size());
}

TEST_CASE("json serialization round-trips byte for byte") {
  SweepSpec spec = small_spec({Mode::analytic_qm, Mode::circuit});
  const SweepResult res = run_sweep(spec, default_system());

  const std::string first = sweep_json(res);
  const SweepResult parsed = sweep_from_json(first);
  const std::string second = sweep_json(parsed);
  CHECK(first == second);

  CHECK(parsed.spec.seed == spec.seed);
  CHECK(parsed.spec.modes == spec.modes);
  REQUIRE(parsed.rows.size() == res.rows.size());
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    CHECK(parsed.rows[i].mode == res.rows[i].mode);
    CHECK(parsed.rows[i].i_c0 == res.rows[i].i_c0);
    CHECK(parsed.rows[i].i_c1 == res.rows[i].i_c1);
  }
  CHECK(parsed.visibilities.size() == res.visibilities.size());
  CHECK(parsed.cell_std == res.cell_std);
  CHECK(parsed.any_flagged == res.any_flagged);

  CHECK_THROWS_AS(sweep_from_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(sweep_from_json("{}"), nlohmann::json::exception);
}

TEST_CASE("the shipped molecule config equals the built-in defaults") {
  const AppConfig shipped =
      load_config(std::string(EAQDC_CONFIG_DIR) + "/diethyl_fluoromalonate.json");
  const AppConfig builtin = parse_config(default_config_text(), "builtin");
  CHECK(shipped.system.labels == builtin.system.labels);
  CHECK(shipped.system.j_hz == builtin.system.j_hz);
  CHECK(shipped.system.t1_s == builtin.system.t1_s);
  CHECK(shipped.system.t2_s == builtin.system.t2_s);
  CHECK(shipped.sweep.alphas == builtin.sweep.alphas);
  CHECK(shipped.sweep.phis == builtin.sweep.phis);
  CHECK(shipped.sweep.modes == builtin.sweep.modes);
  CHECK(shipped.sweep.repeats == builtin.sweep.repeats);
  CHECK(shipped.sweep.seed == builtin.sweep.seed);
}

TEST_CASE("config files override defaults and reject unknown keys") {
  const AppConfig defaults = parse_config(default_config_text(), "defaults");
  CHECK(defaults.system.labels[0] == "13C");
  CHECK(test::near(defaults.system.j(0, 1), 160.8));
  CHECK(test::near(defaults.system.j(0, 2), -192.48));
  CHECK(test::near(defaults.system.j(1, 2), 47.6));
  CHECK(defaults.sweep.alphas.size() == 6);
  CHECK(defaults.sweep.repeats == 4);

  const AppConfig tweaked = parse_config(
      R"({"system": {"t2_s": [0.2, 0.3, 0.25], "offset_hz": [10, 0, -5]},
          "sweep": {"repeats": 2, "modes": ["circuit", "pulse-ideal"],
                    "t2_scale": 0.5}})",
      "tweaked");
  CHECK(test::near(tweaked.system.t2_s[0], 0.2));
  CHECK(test::near(tweaked.system.offset_hz[2], -5.0));
  CHECK(test::near(tweaked.system.j(0, 1), 160.8));  // untouched values persist
  CHECK(tweaked.sweep.repeats == 2);
  REQUIRE(tweaked.sweep.modes.size() == 2);
  CHECK(tweaked.sweep.modes[1] == Mode::pulse_ideal);
  CHECK(test::near(tweaked.sweep.t2_scale, 0.5));
  CHECK(tweaked.sweep.alphas.size() == 6);  // grids keep their defaults

  try {
    parse_config(R"({"bogus": 1})", "top");
    FAIL("unknown top-level key accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  try {
    parse_config(R"({"system": {"j99_hz": 1.0}})", "sys");
    FAIL("unknown system key accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("j99_hz") != std::string::npos);
  }
  try {
    parse_config(R"({"sweep": {"modes": ["warp-field"]}})", "modes");
    FAIL("unknown mode accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("warp-field") != std::string::npos);
  }
  try {
    parse_config(R"({"system": {"t1_s": [1.0, 2.0]}})", "len");
    FAIL("wrong array length accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("t1_s") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(R"({"sweep": {"eta": 2.0}})", "eta"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[1, 2]", "arr"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("{", "trunc"), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/eaqdc.json"), std::runtime_error);
}

}  // namespace
}  // namespace eaqdc
