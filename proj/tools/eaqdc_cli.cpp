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
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eaqdc/circuit.hpp"
#include "eaqdc/compiler.hpp"
#include "eaqdc/optimizer.hpp"
#include "eaqdc/predictions.hpp"
#include "eaqdc/readout.hpp"
#include "eaqdc/spin_system.hpp"
#include "eaqdc/sweep.hpp"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

eaqdc::AppConfig load_or_default(const std::string& path) {
  if (path.empty()) return {eaqdc::default_system(), eaqdc::SweepSpec::defaults()};
  return eaqdc::load_config(path);
}

eaqdc::Mode parse_mode(const std::string& name) {
  const std::optional<eaqdc::Mode> m = eaqdc::mode_from_string(name);
  if (!m) throw CLI::ValidationError("mode", "unknown mode \"" + name + "\"");
  return *m;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path);
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    write_file(path, content);
}

eaqdc::CompileOptions pulse_options(eaqdc::Mode mode, bool swapped_readout) {
  eaqdc::CompileOptions opt;
  opt.shaped = mode != eaqdc::Mode::pulse_ideal;
  opt.swap_strategy = mode == eaqdc::Mode::pulse_ideal
                          ? eaqdc::CompileOptions::SwapStrategy::three_cnot
                          : eaqdc::CompileOptions::SwapStrategy::shaped;
  opt.append_swap_readout = swapped_readout;
  opt.include_detection = false;
  return opt;
}

struct PredictArgs {
  double alpha = 0.0;
  double phi = 0.0;
  bool json = false;
};

int run_predict(const PredictArgs& a) {
  const eaqdc::IntensityPair qm = eaqdc::qm_intensities(a.alpha, a.phi);
  const eaqdc::IntensityPair hv = eaqdc::hv_intensities(a.alpha, a.phi);
  const double qv0 = eaqdc::qm_visibility(a.alpha, 0);
  const double qv1 = eaqdc::qm_visibility(a.alpha, 1);
  const double hvv = eaqdc::hv_visibility();
  if (a.json) {
    ordered_json j;
    j["alpha"] = a.alpha;
    j["phi"] = a.phi;
    j["qm"] = {{"i_c0", qm.i_c0}, {"i_c1", qm.i_c1}, {"v_c0", qv0}, {"v_c1", qv1}};
    j["hv"] = {{"i_c0", hv.i_c0}, {"i_c1", hv.i_c1}, {"v_c0", hvv}, {"v_c1", hvv}};
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "alpha=" << fmt(a.alpha) << " phi=" << fmt(a.phi) << "\n"
            << "qm: i_c0=" << fmt(qm.i_c0) << " i_c1=" << fmt(qm.i_c1) << "\n"
            << "hv: i_c0=" << fmt(hv.i_c0) << " i_c1=" << fmt(hv.i_c1) << "\n"
            << "qm visibility: v_c0=" << fmt(qv0) << " v_c1=" << fmt(qv1) << "\n"
            << "hv visibility: v_c0=" << fmt(hvv) << " v_c1=" << fmt(hvv) << "\n";
  return 0;
}

struct SimulateArgs {
  double alpha = 0.0;
  double phi = 0.0;
  std::string mode = "circuit";
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> eta, t2_scale, amp_noise;
  bool json = false;
};

int run_simulate(const SimulateArgs& a) {
  eaqdc::AppConfig config = load_or_default(a.config);
  eaqdc::SweepSpec spec = config.sweep;
  spec.alphas = {a.alpha};
  spec.phis = {a.phi};
  spec.modes = {parse_mode(a.mode)};
  spec.repeats = 1;
  if (a.seed) spec.seed = *a.seed;
  if (a.eta) spec.eta = *a.eta;
  if (a.t2_scale) spec.t2_scale = *a.t2_scale;
  if (a.amp_noise) spec.amp_noise = *a.amp_noise;

  const eaqdc::SweepResult res = eaqdc::run_sweep(spec, config.system);
  const eaqdc::SweepRow& row = res.rows.front();
  if (row.flagged) {
    std::cerr << "simulate failed: " << row.note << "\n";
    return 2;
  }

  ordered_json extra;
  if (spec.modes[0] == eaqdc::Mode::pulse_ideal ||
      spec.modes[0] == eaqdc::Mode::pulse_shaped ||
      spec.modes[0] == eaqdc::Mode::pulse_noisy) {
    const eaqdc::Circuit circuit = eaqdc::build_eaqdc(a.alpha, a.phi, spec.eta);
    const eaqdc::CompilationReport direct =
        eaqdc::PulseCompiler(config.system, pulse_options(spec.modes[0], false))
            .compile(circuit);
    const eaqdc::CompilationReport swapped =
        eaqdc::PulseCompiler(config.system, pulse_options(spec.modes[0], true))
            .compile(circuit);
    extra["direct"] = {{"pulses", direct.pulse_count},
                       {"duration_s", direct.total_duration_s},
                       {"fidelity", direct.hs_fidelity_vs_ideal}};
    extra["swapped"] = {{"pulses", swapped.pulse_count},
                        {"duration_s", swapped.total_duration_s},
                        {"fidelity", swapped.hs_fidelity_vs_ideal}};
  }

  if (a.json) {
    ordered_json j;
    j["mode"] = eaqdc::to_string(row.mode);
    j["alpha"] = row.alpha;
    j["phi"] = row.phi;
    j["i_c0"] = row.i_c0;
    j["i_c1"] = row.i_c1;
    if (!extra.empty()) j["programs"] = extra;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "mode=" << eaqdc::to_string(row.mode) << " alpha=" << fmt(row.alpha)
            << " phi=" << fmt(row.phi) << " i_c0=" << fmt(row.i_c0)
            << " i_c1=" << fmt(row.i_c1) << "\n";
  for (const char* key : {"direct", "swapped"})
    if (extra.contains(key))
      std::cout << key << " program: pulses=" << extra[key]["pulses"]
                << " duration_s=" << fmt(extra[key]["duration_s"].get<double>())
                << " fidelity=" << fmt(extra[key]["fidelity"].get<double>()) << "\n";
  return 0;
}

struct OptimizeArgs {
  std::string target = "phase";
  double angle = 0.0;
  bool angle_given = false;
  std::optional<int> channel;
  std::optional<int> segments;
  std::optional<double> dt_s;
  double max_amp_hz = 25e3;
  double threshold = 0.995;
  int budget = 150;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  int restarts = 2;
  std::string config;
  std::string out;
  bool no_template = false;
  bool json = false;
};

int run_optimize(const OptimizeArgs& a) {
  const eaqdc::AppConfig config = load_or_default(a.config);
  const eaqdc::SpinSystem& sys = config.system;

  eaqdc::OptimizeParams params;
  params.max_amp_hz = a.max_amp_hz;
  params.threshold = a.threshold;
  params.budget = a.budget;
  params.seed = a.seed;
  params.restarts = a.restarts;

  eaqdc::CMat target;
  if (a.target == "swap") {
    params.channels = {0, 2};
    params.segments = a.segments.value_or(1500);
    params.dt_s = a.dt_s.value_or(5e-6);
    target = eaqdc::embed_unitary(eaqdc::gates::swap_matrix(), {0, 2}, 3);
    if (!a.no_template)
      params.init = eaqdc::render_swap(0, 2, sys, params.segments, params.dt_s,
                                       params.max_amp_hz);
  } else {
    if (!a.angle_given)
      throw CLI::ValidationError("--angle", "required for target " + a.target);
    eaqdc::Mat2 u;
    int channel = 0;
    if (a.target == "phase") {
      u = eaqdc::gates::phase_matrix(a.angle);
      params.segments = a.segments.value_or(100);
    } else if (a.target == "y-alpha") {
      u = eaqdc::gates::y_alpha_matrix(a.angle);
      channel = 2;
      params.segments = a.segments.value_or(30);
    } else {
      throw CLI::ValidationError("--target", "unknown target \"" + a.target + "\"");
    }
    channel = a.channel.value_or(channel);
    params.channels = {channel};
    params.dt_s = a.dt_s.value_or(10e-6);
    target = eaqdc::embed_unitary(u, {channel}, 3);
    if (!a.no_template)
      params.init = eaqdc::render_single_qubit(u, channel, sys, params.segments,
                                               params.dt_s, params.max_amp_hz);
  }

  const eaqdc::OptimizationRun run = eaqdc::optimize(target, sys, params);
  if (!a.out.empty()) write_file(a.out, run.pulse.to_table());

  if (a.json) {
    ordered_json j;
    j["target"] = a.target;
    j["segments"] = run.segments;
    j["dt_s"] = run.dt_s;
    j["max_amp_hz"] = run.max_amp_hz;
    j["initial_fidelity"] = run.history.empty() ? 0.0 : run.history.front();
    j["fidelity"] = run.fidelity;
    j["converged"] = run.converged;
    j["iterations"] = run.iterations;
    j["duration_s"] = run.pulse.duration_s();
    if (!a.out.empty()) j["waveform"] = a.out;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "target=" << a.target << " segments=" << run.segments
              << " dt_s=" << fmt(run.dt_s) << " max_amp_hz=" << fmt(run.max_amp_hz)
              << "\n"
              << "initial fidelity: "
              << fmt(run.history.empty() ? 0.0 : run.history.front()) << "\n"
              << "final fidelity:   " << fmt(run.fidelity) << " ("
              << (run.converged ? "converged" : "not converged") << ", "
              << run.iterations << " iterations)\n";
    if (!a.out.empty())
      std::cout << "waveform written to " << a.out << " (duration "
                << fmt(run.pulse.duration_s()) << " s)\n";
  }
  return run.converged ? 0 : 2;
}

struct SweepArgs {
  std::string config;
  std::vector<std::string> modes;
  std::vector<double> alphas, phis;
  std::optional<int> repeats;
  std::optional<std::uint64_t> seed;
  std::optional<double> eta, t2_scale, amp_noise;
  std::string out, visibility, json_path;
};

int run_sweep_cmd(const SweepArgs& a) {
  eaqdc::AppConfig config = load_or_default(a.config);
  eaqdc::SweepSpec spec = config.sweep;
  if (!a.modes.empty()) {
    spec.modes.clear();
    for (const std::string& name : a.modes) spec.modes.push_back(parse_mode(name));
  }
  if (!a.alphas.empty()) spec.alphas = a.alphas;
  if (!a.phis.empty()) spec.phis = a.phis;
  if (a.repeats) spec.repeats = *a.repeats;
  if (a.seed) spec.seed = *a.seed;
  if (a.eta) spec.eta = *a.eta;
  if (a.t2_scale) spec.t2_scale = *a.t2_scale;
  if (a.amp_noise) spec.amp_noise = *a.amp_noise;

  const eaqdc::SweepResult res = eaqdc::run_sweep(spec, config.system);
  emit(a.out, eaqdc::sweep_csv(res));
  if (!a.visibility.empty()) write_file(a.visibility, eaqdc::visibility_csv(res));
  if (!a.json_path.empty()) write_file(a.json_path, eaqdc::sweep_json(res));

  if (res.any_flagged) {
    std::set<std::string> notes;
    std::size_t flagged = 0;
    for (const eaqdc::SweepRow& row : res.rows)
      if (row.flagged) {
        ++flagged;
        notes.insert(row.note);
      }
    std::cerr << "sweep: " << flagged << " flagged rows\n";
    for (const std::string& note : notes) std::cerr << "  " << note << "\n";
    return 2;
  }
  return 0;
}

struct SpectrumArgs {
  double alpha = 0.0;
  double phi = 0.0;
  std::string mode = "circuit";
  bool swapped = false;
  int points = 2048;
  double span_hz = 500.0;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> eta;
};

int run_spectrum(const SpectrumArgs& a) {
  const eaqdc::AppConfig config = load_or_default(a.config);
  const eaqdc::Mode mode = parse_mode(a.mode);
  const double eta = a.eta.value_or(config.sweep.eta);
  const eaqdc::SpectralReadout readout(config.system);

  eaqdc::DensityMatrix rho(eaqdc::CMat::Identity(8, 8) / 8.0);
  double scale = 1.0;
  switch (mode) {
    case eaqdc::Mode::circuit: {
      rho = eaqdc::DensityMatrix::pure(eaqdc::run(eaqdc::build_eaqdc(a.alpha, a.phi, eta)));
      if (a.swapped)
        rho = rho.conjugate(
            eaqdc::embed_unitary(eaqdc::gates::swap_matrix(), {0, 2}, 3));
      break;
    }
    case eaqdc::Mode::pulse_ideal:
    case eaqdc::Mode::pulse_shaped:
    case eaqdc::Mode::pulse_noisy: {
      const eaqdc::PulseProgram program =
          eaqdc::PulseCompiler(config.system, pulse_options(mode, a.swapped))
              .compile(eaqdc::build_eaqdc(a.alpha, a.phi, eta))
              .program;
      const eaqdc::DensityMatrix pps = eaqdc::prepare_pps(config.system);
      scale = readout.reference_peak(pps);
      eaqdc::EvolveOptions opt;
      std::mt19937_64 gen(a.seed.value_or(config.sweep.seed));
      if (mode == eaqdc::Mode::pulse_noisy) {
        opt.relaxation = true;
        opt.t2_scale = config.sweep.t2_scale;
        opt.amp_noise = config.sweep.amp_noise;
        opt.rng = &gen;
      }
      rho = eaqdc::evolve(pps, program, config.system, opt);
      break;
    }
    default:
      throw CLI::ValidationError("--mode", "spectra need a state-producing mode");
  }

  const auto samples = readout.synthesize_spectrum(rho, a.points, a.span_hz, scale);
  std::string csv = "freq_hz,amplitude\n";
  for (const auto& [x, y] : samples) {
    csv += fmt(x);
    csv += ',';
    csv += fmt(y);
    csv += '\n';
  }
  emit(a.out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Entanglement-assisted delayed-choice interferometry on a three-spin "
      "NMR register: closed forms, circuit simulation, pulse compilation, "
      "and spectral readout."};
  app.require_subcommand(0, 1);
  bool default_config = false;
  app.add_flag("--default-config", default_config,
               "Print the default configuration template and exit");

  PredictArgs predict;
  CLI::App* predict_cmd =
      app.add_subcommand("predict", "Closed-form intensities and visibilities");
  predict_cmd->add_option("--alpha", predict.alpha, "Ancilla rotation, radians")
      ->required();
  predict_cmd->add_option("--phi", predict.phi, "Interferometer phase, radians")
      ->required();
  predict_cmd->add_flag("--json", predict.json, "JSON output");

  SimulateArgs simulate;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "One (alpha, phi) cell through a pipeline");
  simulate_cmd->add_option("--alpha", simulate.alpha, "Ancilla rotation, radians")
      ->required();
  simulate_cmd->add_option("--phi", simulate.phi, "Interferometer phase, radians")
      ->required();
  simulate_cmd->add_option("--mode", simulate.mode,
                           "analytic-qm|analytic-hv|circuit|pulse-ideal|"
                           "pulse-shaped|pulse-noisy");
  simulate_cmd->add_option("--config", simulate.config, "Config file path");
  simulate_cmd->add_option("--seed", simulate.seed, "Noise seed");
  simulate_cmd->add_option("--eta", simulate.eta, "Entangling parameter");
  simulate_cmd->add_option("--t2-scale", simulate.t2_scale, "Dephasing multiplier");
  simulate_cmd->add_option("--amp-noise", simulate.amp_noise,
                           "Fractional rf amplitude noise");
  simulate_cmd->add_flag("--json", simulate.json, "JSON output");

  OptimizeArgs optimize;
  CLI::App* optimize_cmd =
      app.add_subcommand("optimize-pulse", "Shape a pulse for a named target");
  optimize_cmd->add_option("--target", optimize.target, "phase|y-alpha|swap")
      ->required();
  optimize_cmd->add_option("--angle", optimize.angle, "Target angle, radians");
  optimize_cmd->add_option("--channel", optimize.channel, "Driven spin");
  optimize_cmd->add_option("--segments", optimize.segments, "Waveform segments");
  optimize_cmd->add_option("--dt", optimize.dt_s, "Segment duration, seconds");
  optimize_cmd->add_option("--max-amp", optimize.max_amp_hz, "Amplitude cap, Hz");
  optimize_cmd->add_option("--threshold", optimize.threshold, "Target fidelity");
  optimize_cmd->add_option("--budget", optimize.budget, "Iteration budget");
  optimize_cmd->add_option("--seed", optimize.seed, "Search seed");
  optimize_cmd->add_option("--restarts", optimize.restarts, "Restart budget");
  optimize_cmd->add_option("--config", optimize.config, "Config file path");
  optimize_cmd->add_option("--out", optimize.out, "Waveform table output path");
  optimize_cmd->add_flag("--no-template", optimize.no_template,
                         "Start from a random waveform instead of the template");
  optimize_cmd->add_flag("--json", optimize.json, "JSON output");

  SweepArgs sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Full (mode, alpha, phi, repeat) grid");
  sweep_cmd->add_option("--config", sweep.config, "Config file path");
  sweep_cmd->add_option("--modes", sweep.modes, "Comma-separated mode list")
      ->delimiter(',');
  sweep_cmd->add_option("--alphas", sweep.alphas, "Comma-separated alpha grid")
      ->delimiter(',');
  sweep_cmd->add_option("--phis", sweep.phis, "Comma-separated phi grid")
      ->delimiter(',');
  sweep_cmd->add_option("--repeats", sweep.repeats, "Repeats per cell");
  sweep_cmd->add_option("--seed", sweep.seed, "Sweep seed");
  sweep_cmd->add_option("--eta", sweep.eta, "Entangling parameter");
  sweep_cmd->add_option("--t2-scale", sweep.t2_scale, "Dephasing multiplier");
  sweep_cmd->add_option("--amp-noise", sweep.amp_noise,
                        "Fractional rf amplitude noise");
  sweep_cmd->add_option("--out", sweep.out, "Results CSV path (default stdout)");
  sweep_cmd->add_option("--visibility", sweep.visibility, "Visibility CSV path");
  sweep_cmd->add_option("--json", sweep.json_path, "Full result JSON path");

  SpectrumArgs spectrum;
  CLI::App* spectrum_cmd = app.add_subcommand(
      "export-spectrum", "Synthesized work-spin spectrum of one prepared state");
  spectrum_cmd->add_option("--alpha", spectrum.alpha, "Ancilla rotation, radians")
      ->required();
  spectrum_cmd->add_option("--phi", spectrum.phi, "Interferometer phase, radians")
      ->required();
  spectrum_cmd->add_option("--mode", spectrum.mode,
                           "circuit|pulse-ideal|pulse-shaped|pulse-noisy");
  spectrum_cmd->add_flag("--swapped", spectrum.swapped,
                         "Spectrum after the swap readout stage");
  spectrum_cmd->add_option("--points", spectrum.points, "Sample count");
  spectrum_cmd->add_option("--span", spectrum.span_hz, "Frequency span, Hz");
  spectrum_cmd->add_option("--config", spectrum.config, "Config file path");
  spectrum_cmd->add_option("--out", spectrum.out, "CSV path (default stdout)");
  spectrum_cmd->add_option("--seed", spectrum.seed, "Noise seed");
  spectrum_cmd->add_option("--eta", spectrum.eta, "Entangling parameter");

  CLI11_PARSE(app, argc, argv);
  optimize.angle_given = optimize_cmd->count("--angle") > 0;

  try {
    if (default_config) {
      std::cout << eaqdc::default_config_text();
      return 0;
    }
    if (predict_cmd->parsed()) return run_predict(predict);
    if (simulate_cmd->parsed()) return run_simulate(simulate);
    if (optimize_cmd->parsed()) return run_optimize(optimize);
    if (sweep_cmd->parsed()) return run_sweep_cmd(sweep);
    if (spectrum_cmd->parsed()) return run_spectrum(spectrum);
    std::cout << app.help();
    return 0;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
