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
#include "eaqdc/pulse.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace eaqdc {

namespace {

std::string format(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, value);
  return buf;
}

std::string join_ints(const std::vector<int>& xs, char sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out.push_back(sep);
    out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

int coupling_index(int i, int j) {
  if (i == j || i < 0 || j < 0 || i > 2 || j > 2)
    throw std::invalid_argument("coupling_index: need two distinct spins in 0..2");
  const int lo = std::min(i, j), hi = std::max(i, j);
  if (lo == 0) return hi == 1 ? 0 : 1;
  return 2;
}

double ShapedPulse::duration_s() const {
  double t = 0.0;
  for (const ShapedSegment& s : segments) t += s.dt_s;
  return t;
}

std::string ShapedPulse::to_table() const {
  std::ostringstream out;
  out << "channels " << join_ints(channels, ' ') << "\n";
  out << "label " << (label.empty() ? "-" : label) << "\n";
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const ShapedSegment& s = segments[i];
    out << i;
    for (std::size_t c = 0; c < channels.size(); ++c)
      out << ' ' << format("%.17g", s.amp_hz[c]) << ' '
          << format("%.17g", s.phase_rad[c]);
    out << ' ' << format("%.17g", s.dt_s) << "\n";
  }
  return out.str();
}

ShapedPulse ShapedPulse::from_table(const std::string& table) {
  std::istringstream in(table);
  std::string word;
  ShapedPulse pulse;
  if (!(in >> word) || word != "channels")
    throw std::invalid_argument("ShapedPulse::from_table: missing channels line");
  std::string rest;
  std::getline(in, rest);
  std::istringstream chan(rest);
  int c;
  while (chan >> c) pulse.channels.push_back(c);
  if (pulse.channels.empty())
    throw std::invalid_argument("ShapedPulse::from_table: empty channel list");
  if (!(in >> word) || word != "label")
    throw std::invalid_argument("ShapedPulse::from_table: missing label line");
  in >> pulse.label;
  if (pulse.label == "-") pulse.label.clear();
  std::size_t index;
  while (in >> index) {
    ShapedSegment seg;
    seg.amp_hz.resize(pulse.channels.size());
    seg.phase_rad.resize(pulse.channels.size());
    for (std::size_t k = 0; k < pulse.channels.size(); ++k)
      if (!(in >> seg.amp_hz[k] >> seg.phase_rad[k]))
        throw std::invalid_argument("ShapedPulse::from_table: truncated segment row");
    if (!(in >> seg.dt_s))
      throw std::invalid_argument("ShapedPulse::from_table: truncated segment row");
    if (index != pulse.segments.size())
      throw std::invalid_argument("ShapedPulse::from_table: segment rows out of order");
    pulse.segments.push_back(std::move(seg));
  }
  if (pulse.segments.empty())
    throw std::invalid_argument("ShapedPulse::from_table: no segments");
  return pulse;
}

PulseProgram& PulseProgram::push(PulseEvent event) {
  events.push_back(std::move(event));
  return *this;
}

PulseProgram& PulseProgram::append(const PulseProgram& other) {
  events.insert(events.end(), other.events.begin(), other.events.end());
  return *this;
}

int PulseProgram::pulse_count() const {
  int n = 0;
  for (const PulseEvent& e : events)
    if (std::holds_alternative<HardPulse>(e) || std::holds_alternative<ShapedPulse>(e))
      ++n;
  return n;
}

double PulseProgram::total_duration_s() const {
  double t = 0.0;
  for (const PulseEvent& e : events) {
    if (const auto* hp = std::get_if<HardPulse>(&e))
      t += hp->duration_s;
    else if (const auto* d = std::get_if<Delay>(&e))
      t += d->duration_s;
    else if (const auto* sp = std::get_if<ShapedPulse>(&e))
      t += sp->duration_s();
  }
  return t;
}

std::string PulseProgram::dump() const {
  std::ostringstream out;
  for (const PulseEvent& e : events) {
    if (const auto* hp = std::get_if<HardPulse>(&e)) {
      out << "pulse targets=" << join_ints(hp->targets, ',')
          << " angle=" << format("%+.6f", hp->angle)
          << " phase=" << format("%+.6f", hp->phase)
          << " dur=" << format("%.6e", hp->duration_s) << "\n";
    } else if (const auto* d = std::get_if<Delay>(&e)) {
      out << "delay t=" << format("%.6e", d->duration_s) << " couplings="
          << (d->active[0] ? '1' : '0') << (d->active[1] ? '1' : '0')
          << (d->active[2] ? '1' : '0') << "\n";
    } else if (std::holds_alternative<GradientCrush>(e)) {
      out << "crush\n";
    } else if (const auto* sp = std::get_if<ShapedPulse>(&e)) {
      out << "shaped label=" << (sp->label.empty() ? "-" : sp->label)
          << " channels=" << join_ints(sp->channels, ',')
          << " segments=" << sp->segments.size()
          << " dur=" << format("%.6e", sp->duration_s()) << "\n";
    }
  }
  return out.str();
}

void validate(const PulseProgram& program, int n_spins) {
  auto check_spin = [n_spins](int s, const char* what) {
    if (s < 0 || s >= n_spins)
      throw std::invalid_argument(std::string(what) + ": spin index out of range");
  };
  for (const PulseEvent& e : program.events) {
    if (const auto* hp = std::get_if<HardPulse>(&e)) {
      if (hp->targets.empty())
        throw std::invalid_argument("HardPulse: no targets");
      for (int t : hp->targets) check_spin(t, "HardPulse");
      if (hp->duration_s < 0) throw std::invalid_argument("HardPulse: negative duration");
    } else if (const auto* d = std::get_if<Delay>(&e)) {
      if (d->duration_s < 0) throw std::invalid_argument("Delay: negative duration");
    } else if (const auto* sp = std::get_if<ShapedPulse>(&e)) {
      if (sp->channels.empty())
        throw std::invalid_argument("ShapedPulse: empty channel list");
      for (int c : sp->channels) check_spin(c, "ShapedPulse");
      if (sp->segments.empty())
        throw std::invalid_argument("ShapedPulse: needs at least one segment");
      for (const ShapedSegment& s : sp->segments) {
        if (s.dt_s < 0) throw std::invalid_argument("ShapedPulse: negative segment dt");
        if (s.amp_hz.size() != sp->channels.size() ||
            s.phase_rad.size() != sp->channels.size())
          throw std::invalid_argument("ShapedPulse: segment arity mismatch");
      }
    }
  }
}

}  // namespace eaqdc
