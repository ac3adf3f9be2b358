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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "eaqdc/circuit.hpp"
#include "eaqdc/compiler.hpp"
#include "eaqdc/readout.hpp"
#include "json.hpp"

namespace eaqdc {

namespace {

using ordered_json = nlohmann::ordered_json;

// splitmix64 finalizer; the per-cell stream key is folded in one field at a
// time so neighbouring cells land in unrelated parts of the sequence.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t cell_seed(std::uint64_t seed, int mode, std::size_t a, std::size_t p,
                        int repeat) {
  std::uint64_t s = mix64(seed);
  s = mix64(s ^ static_cast<std::uint64_t>(mode + 1));
  s = mix64(s ^ (a + 1));
  s = mix64(s ^ (p + 1));
  return mix64(s ^ static_cast<std::uint64_t>(repeat + 1));
}

void validate_spec(const SweepSpec& spec) {
  if (spec.alphas.empty() || spec.phis.empty())
    throw std::invalid_argument("sweep: alpha and phi grids must be non-empty");
  if (spec.modes.empty()) throw std::invalid_argument("sweep: no modes selected");
  if (spec.repeats < 1) throw std::invalid_argument("sweep: repeats must be >= 1");
  if (!(spec.eta >= 0.0 && spec.eta <= 1.0))
    throw std::invalid_argument("sweep: eta must lie in [0, 1]");
  if (!(spec.t2_scale >= 0.0) || !std::isfinite(spec.t2_scale))
    throw std::invalid_argument("sweep: t2_scale must be non-negative");
  if (!(spec.amp_noise >= 0.0) || !std::isfinite(spec.amp_noise))
    throw std::invalid_argument("sweep: amp_noise must be non-negative");
}

bool is_pulse_mode(Mode m) {
  return m == Mode::pulse_ideal || m == Mode::pulse_shaped || m == Mode::pulse_noisy;
}

CompileOptions pulse_options(Mode mode, bool swapped_readout) {
  CompileOptions opt;
  opt.shaped = mode != Mode::pulse_ideal;
  opt.swap_strategy = mode == Mode::pulse_ideal ? CompileOptions::SwapStrategy::three_cnot
                                                : CompileOptions::SwapStrategy::shaped;
  opt.append_swap_readout = swapped_readout;
  opt.include_detection = false;  // measure_peaks owns the observation pulse
  return opt;
}

// Shared per-sweep fixtures: the readout stage, the pseudo-pure input and
// its reference line. Immutable during the parallel section.
struct PulseFixture {
  SpectralReadout readout;
  DensityMatrix pps;
  double reference;

  explicit PulseFixture(const SpinSystem& system)
      : readout(system), pps(prepare_pps(system)), reference(readout.reference_peak(pps)) {}
};

void run_pulse_cell(const SweepSpec& spec, const SpinSystem& system,
                    const PulseFixture& fixture, Mode mode, std::size_t a,
                    std::size_t p, SweepRow* rows, double* stds) {
  const Circuit circuit = build_eaqdc(spec.alphas[a], spec.phis[p], spec.eta);
  const PulseProgram direct =
      PulseCompiler(system, pulse_options(mode, false)).compile(circuit).program;
  const PulseProgram swapped =
      PulseCompiler(system, pulse_options(mode, true)).compile(circuit).program;

  const bool noisy = mode == Mode::pulse_noisy;
  std::vector<double> samples;
  for (int r = 0; r < spec.repeats; ++r) {
    if (r > 0 && !noisy) {  // deterministic cell: replicate the first repeat
      rows[r] = rows[0];
      rows[r].repeat = r;
      continue;
    }
    try {
      EvolveOptions opt;
      std::mt19937_64 gen(cell_seed(spec.seed, static_cast<int>(mode), a, p, r));
      if (noisy) {
        opt.relaxation = true;
        opt.t2_scale = spec.t2_scale;
        opt.amp_noise = spec.amp_noise;
        opt.rng = &gen;
      }
      const DensityMatrix rho_d = evolve(fixture.pps, direct, system, opt);
      const DensityMatrix rho_s = evolve(fixture.pps, swapped, system, opt);
      const CoefficientEstimate est = SpectralReadout::combine(
          SpectralReadout::extract_direct(
              fixture.readout.measure_peaks(rho_d, fixture.reference)),
          SpectralReadout::extract_swapped(
              fixture.readout.measure_peaks(rho_s, fixture.reference)));
      const IntensityPair pair = SpectralReadout::intensities_from_coefficients(est);
      rows[r].i_c0 = pair.i_c0;
      rows[r].i_c1 = pair.i_c1;
      samples.push_back(pair.i_c0);
    } catch (const std::exception& e) {
      rows[r].flagged = true;
      rows[r].note = e.what();
    }
  }
  if (noisy && samples.size() >= 2) {
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(samples.size() - 1);
    const double sd = std::sqrt(var);
    for (int r = 0; r < spec.repeats; ++r) stds[r] = sd;
  }
}

void run_cell(const SweepSpec& spec, const SpinSystem& system,
              const PulseFixture* fixture, Mode mode, std::size_t a, std::size_t p,
              SweepRow* rows, double* stds) {
  for (int r = 0; r < spec.repeats; ++r) {
    rows[r].mode = mode;
    rows[r].alpha = spec.alphas[a];
    rows[r].phi = spec.phis[p];
    rows[r].repeat = r;
    stds[r] = 0.0;
  }
  try {
    IntensityPair pair{};
    switch (mode) {
      case Mode::analytic_qm:
        pair = qm_intensities(spec.alphas[a], spec.phis[p]);
        break;
      case Mode::analytic_hv:
        pair = hv_intensities(spec.alphas[a], spec.phis[p]);
        break;
      case Mode::circuit:
        pair = intensities(run(build_eaqdc(spec.alphas[a], spec.phis[p], spec.eta)));
        break;
      default:
        run_pulse_cell(spec, system, *fixture, mode, a, p, rows, stds);
        return;
    }
    for (int r = 0; r < spec.repeats; ++r) {
      rows[r].i_c0 = pair.i_c0;
      rows[r].i_c1 = pair.i_c1;
    }
  } catch (const std::exception& e) {
    for (int r = 0; r < spec.repeats; ++r) {
      rows[r].flagged = true;
      rows[r].note = e.what();
    }
  }
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(n, hw);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  for (auto& t : pool) t.join();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ordered_json spec_to_json(const SweepSpec& spec) {
  ordered_json j;
  j["alphas"] = spec.alphas;
  j["phis"] = spec.phis;
  std::vector<std::string> modes;
  modes.reserve(spec.modes.size());
  for (Mode m : spec.modes) modes.push_back(to_string(m));
  j["modes"] = modes;
  j["repeats"] = spec.repeats;
  j["seed"] = spec.seed;
  j["eta"] = spec.eta;
  j["t2_scale"] = spec.t2_scale;
  j["amp_noise"] = spec.amp_noise;
  return j;
}

Mode required_mode(const std::string& name, const std::string& origin) {
  const std::optional<Mode> m = mode_from_string(name);
  if (!m) throw std::invalid_argument(origin + ": unknown mode \"" + name + "\"");
  return *m;
}

SweepSpec spec_from_json(const ordered_json& j, const std::string& origin) {
  SweepSpec spec;
  spec.alphas = j.at("alphas").get<std::vector<double>>();
  spec.phis = j.at("phis").get<std::vector<double>>();
  spec.modes.clear();
  for (const auto& name : j.at("modes"))
    spec.modes.push_back(required_mode(name.get<std::string>(), origin));
  spec.repeats = j.at("repeats").get<int>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.eta = j.at("eta").get<double>();
  spec.t2_scale = j.at("t2_scale").get<double>();
  spec.amp_noise = j.at("amp_noise").get<double>();
  return spec;
}

void reject_unknown_keys(const ordered_json& j, std::initializer_list<const char*> allowed,
                         const std::string& origin) {
  for (const auto& item : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end())
      throw std::invalid_argument(origin + ": unknown key \"" + item.key() + "\"");
  }
}

template <typename T, std::size_t N>
void read_array(const ordered_json& j, const char* key, std::array<T, N>& out,
                const std::string& origin) {
  if (!j.contains(key)) return;
  const auto& node = j.at(key);
  if (!node.is_array() || node.size() != N)
    throw std::invalid_argument(origin + ": \"" + key + "\" must be an array of " +
                                std::to_string(N) + " entries");
  for (std::size_t i = 0; i < N; ++i) out[i] = node[i].get<T>();
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::analytic_qm: return "analytic-qm";
    case Mode::analytic_hv: return "analytic-hv";
    case Mode::circuit: return "circuit";
    case Mode::pulse_ideal: return "pulse-ideal";
    case Mode::pulse_shaped: return "pulse-shaped";
    case Mode::pulse_noisy: return "pulse-noisy";
  }
  throw std::invalid_argument("to_string: unknown mode");
}

std::optional<Mode> mode_from_string(const std::string& name) {
  for (Mode m : {Mode::analytic_qm, Mode::analytic_hv, Mode::circuit, Mode::pulse_ideal,
                 Mode::pulse_shaped, Mode::pulse_noisy})
    if (name == to_string(m)) return m;
  return std::nullopt;
}

SweepSpec SweepSpec::defaults() {
  SweepSpec spec;
  spec.alphas = {0.0, kPi / 10, kPi / 5, 3 * kPi / 10, 2 * kPi / 5, kPi / 2};
  spec.phis.clear();
  for (int k = 0; k <= 12; ++k) spec.phis.push_back(2 * kPi * k / 12);
  return spec;
}

SweepResult run_sweep(const SweepSpec& spec, const SpinSystem& system) {
  validate_spec(spec);
  system.validate();

  const std::size_t na = spec.alphas.size();
  const std::size_t np = spec.phis.size();
  const std::size_t cells = spec.modes.size() * na * np;
  const std::size_t rep = static_cast<std::size_t>(spec.repeats);

  SweepResult result;
  result.spec = spec;
  result.rows.resize(cells * rep);
  result.cell_std.assign(cells * rep, 0.0);

  // The pulse fixtures validate the preparation and readout stages once up
  // front; a defective system should fail loudly, not flag every row.
  const bool any_pulse =
      std::any_of(spec.modes.begin(), spec.modes.end(), is_pulse_mode);
  std::optional<PulseFixture> fixture;
  if (any_pulse) fixture.emplace(system);

  parallel_for(cells, [&](std::size_t cell) {
    const std::size_t m = cell / (na * np);
    const std::size_t a = cell / np % na;
    const std::size_t p = cell % np;
    run_cell(spec, system, fixture ? &*fixture : nullptr, spec.modes[m], a, p,
             &result.rows[cell * rep], &result.cell_std[cell * rep]);
  });

  for (const SweepRow& row : result.rows) result.any_flagged |= row.flagged;

  // Visibility per (mode, alpha) from the repeat-averaged phase curves;
  // groups with flagged cells or degenerate curves are omitted.
  for (std::size_t m = 0; m < spec.modes.size(); ++m)
    for (std::size_t a = 0; a < na; ++a) {
      std::vector<std::pair<double, double>> curve0(np), curve1(np);
      bool usable = np >= 2;
      for (std::size_t p = 0; p < np && usable; ++p) {
        curve0[p] = curve1[p] = {spec.phis[p], 0.0};
        const std::size_t base = ((m * na + a) * np + p) * rep;
        for (std::size_t r = 0; r < rep; ++r) {
          if (result.rows[base + r].flagged) {
            usable = false;
            break;
          }
          curve0[p].second += result.rows[base + r].i_c0 / static_cast<double>(rep);
          curve1[p].second += result.rows[base + r].i_c1 / static_cast<double>(rep);
        }
      }
      if (!usable) continue;
      try {
        VisibilityRow v;
        v.mode = spec.modes[m];
        v.alpha = spec.alphas[a];
        v.v_c0 = visibility_from_curve(curve0);
        v.v_c1 = visibility_from_curve(curve1);
        result.visibilities.push_back(v);
      } catch (const std::exception&) {
        // all-zero curve: visibility undefined for this group
      }
    }
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "mode,alpha,phi,repeat,i_c0,i_c1\n";
  for (const SweepRow& row : result.rows) {
    out += to_string(row.mode);
    out += ',';
    out += format_double(row.alpha);
    out += ',';
    out += format_double(row.phi);
    out += ',';
    out += std::to_string(row.repeat);
    out += ',';
    out += format_double(row.i_c0);
    out += ',';
    out += format_double(row.i_c1);
    out += '\n';
  }
  return out;
}

std::string visibility_csv(const SweepResult& result) {
  std::string out = "mode,alpha,v_c0,v_c1\n";
  for (const VisibilityRow& row : result.visibilities) {
    out += to_string(row.mode);
    out += ',';
    out += format_double(row.alpha);
    out += ',';
    out += format_double(row.v_c0);
    out += ',';
    out += format_double(row.v_c1);
    out += '\n';
  }
  return out;
}

std::string sweep_json(const SweepResult& result) {
  ordered_json j;
  j["spec"] = spec_to_json(result.spec);
  j["rows"] = ordered_json::array();
  for (const SweepRow& row : result.rows) {
    ordered_json r;
    r["mode"] = to_string(row.mode);
    r["alpha"] = row.alpha;
    r["phi"] = row.phi;
    r["repeat"] = row.repeat;
    r["i_c0"] = row.i_c0;
    r["i_c1"] = row.i_c1;
    r["flagged"] = row.flagged;
    r["note"] = row.note;
    j["rows"].push_back(std::move(r));
  }
  j["visibilities"] = ordered_json::array();
  for (const VisibilityRow& row : result.visibilities) {
    ordered_json r;
    r["mode"] = to_string(row.mode);
    r["alpha"] = row.alpha;
    r["v_c0"] = row.v_c0;
    r["v_c1"] = row.v_c1;
    j["visibilities"].push_back(std::move(r));
  }
  j["cell_std"] = result.cell_std;
  j["any_flagged"] = result.any_flagged;
  return j.dump(2) + "\n";
}

SweepResult sweep_from_json(const std::string& text) {
  const std::string origin = "sweep json";
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }
  SweepResult result;
  result.spec = spec_from_json(j.at("spec"), origin);
  for (const auto& r : j.at("rows")) {
    SweepRow row;
    row.mode = required_mode(r.at("mode").get<std::string>(), origin);
    row.alpha = r.at("alpha").get<double>();
    row.phi = r.at("phi").get<double>();
    row.repeat = r.at("repeat").get<int>();
    row.i_c0 = r.at("i_c0").get<double>();
    row.i_c1 = r.at("i_c1").get<double>();
    row.flagged = r.at("flagged").get<bool>();
    row.note = r.at("note").get<std::string>();
    result.rows.push_back(std::move(row));
  }
  for (const auto& r : j.at("visibilities")) {
    VisibilityRow row;
    row.mode = required_mode(r.at("mode").get<std::string>(), origin);
    row.alpha = r.at("alpha").get<double>();
    row.v_c0 = r.at("v_c0").get<double>();
    row.v_c1 = r.at("v_c1").get<double>();
    result.visibilities.push_back(std::move(row));
  }
  result.cell_std = j.at("cell_std").get<std::vector<double>>();
  result.any_flagged = j.at("any_flagged").get<bool>();
  return result;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

AppConfig parse_config(const std::string& text, const std::string& origin) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument(origin + ": expected an object");
  reject_unknown_keys(j, {"system", "sweep"}, origin);

  AppConfig config;
  config.system = default_system();
  config.sweep = SweepSpec::defaults();

  try {
    if (j.contains("system")) {
      const ordered_json& s = j.at("system");
      reject_unknown_keys(s,
                          {"labels", "offset_hz", "j01_hz", "j02_hz", "j12_hz", "t1_s",
                           "t2_s", "weights", "larmor_mhz"},
                          origin);
      read_array(s, "labels", config.system.labels, origin);
      read_array(s, "offset_hz", config.system.offset_hz, origin);
      if (s.contains("j01_hz")) config.system.set_j(0, 1, s.at("j01_hz").get<double>());
      if (s.contains("j02_hz")) config.system.set_j(0, 2, s.at("j02_hz").get<double>());
      if (s.contains("j12_hz")) config.system.set_j(1, 2, s.at("j12_hz").get<double>());
      read_array(s, "t1_s", config.system.t1_s, origin);
      read_array(s, "t2_s", config.system.t2_s, origin);
      read_array(s, "weights", config.system.weights, origin);
      read_array(s, "larmor_mhz", config.system.larmor_mhz, origin);
    }
    if (j.contains("sweep")) {
      const ordered_json& s = j.at("sweep");
      reject_unknown_keys(s,
                          {"alphas", "phis", "modes", "repeats", "seed", "eta",
                           "t2_scale", "amp_noise"},
                          origin);
      if (s.contains("alphas")) config.sweep.alphas = s.at("alphas").get<std::vector<double>>();
      if (s.contains("phis")) config.sweep.phis = s.at("phis").get<std::vector<double>>();
      if (s.contains("modes")) {
        config.sweep.modes.clear();
        for (const auto& name : s.at("modes"))
          config.sweep.modes.push_back(required_mode(name.get<std::string>(), origin));
      }
      if (s.contains("repeats")) config.sweep.repeats = s.at("repeats").get<int>();
      if (s.contains("seed")) config.sweep.seed = s.at("seed").get<std::uint64_t>();
      if (s.contains("eta")) config.sweep.eta = s.at("eta").get<double>();
      if (s.contains("t2_scale")) config.sweep.t2_scale = s.at("t2_scale").get<double>();
      if (s.contains("amp_noise")) config.sweep.amp_noise = s.at("amp_noise").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }

  config.system.validate();
  validate_spec(config.sweep);
  return config;
}

std::string default_config_text() {
  const SpinSystem sys = default_system();
  const SweepSpec spec = SweepSpec::defaults();
  ordered_json j;
  ordered_json s;
  s["labels"] = sys.labels;
  s["offset_hz"] = sys.offset_hz;
  s["j01_hz"] = sys.j(0, 1);
  s["j02_hz"] = sys.j(0, 2);
  s["j12_hz"] = sys.j(1, 2);
  s["t1_s"] = sys.t1_s;
  s["t2_s"] = sys.t2_s;
  s["weights"] = sys.weights;
  s["larmor_mhz"] = sys.larmor_mhz;
  j["system"] = std::move(s);
  j["sweep"] = spec_to_json(spec);
  return j.dump(2) + "\n";
}

}  // namespace eaqdc
