// Copyright 2026 The cqedswitch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "cqedswitch/bench.hpp"

namespace cqedswitch {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Model basis index of an atomic level (g, h, e, s), or -1 if absent.
int model_level(ModelKind model, int level4) {
  switch (model) {
    case ModelKind::kPrimary:
      return level4;
    case ModelKind::kIntermediate:
      if (level4 == level::e) return -1;
      return level4 == level::s ? level::s3 : level4;
    case ModelKind::kLimit:
      return level4 == level::g || level4 == level::h ? level4 : -1;
  }
  return -1;
}

constexpr const char* kLevelNames[4] = {"g", "h", "e", "s"};

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kHold:
      return "hold";
    case Mode::kSet:
      return "set";
    case Mode::kReset:
      return "reset";
    case Mode::kRace:
      return "race";
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  const std::string n = lower(name);
  if (n == "hold") return Mode::kHold;
  if (n == "set") return Mode::kSet;
  if (n == "reset") return Mode::kReset;
  if (n == "race") return Mode::kRace;
  throw InvalidArgument("unknown scenario '" + std::string(name) +
                        "' (expected hold, set, reset or race)");
}

std::string_view to_string(InitialState init) {
  switch (init) {
    case InitialState::kG:
      return "g";
    case InitialState::kH:
      return "h";
    case InitialState::kS:
      return "s";
    case InitialState::kMixture:
      return "mixture";
  }
  return "unknown";
}

InitialState parse_initial_state(std::string_view name) {
  const std::string n = lower(name);
  if (n == "g") return InitialState::kG;
  if (n == "h") return InitialState::kH;
  if (n == "s") return InitialState::kS;
  if (n == "mixture") return InitialState::kMixture;
  throw InvalidArgument("unknown initial state '" + std::string(name) +
                        "' (expected g, h, s or mixture)");
}

IntegrationConfig default_integration(ModelKind model) {
  IntegrationConfig c;
  c.t_final = 600.0;
  if (model == ModelKind::kPrimary) {
    c.dt = 2e-3;
    c.record_stride = 500;
    c.projection.enabled = true;
  } else {
    c.dt = 1e-2;
    c.record_stride = 100;
  }
  c.reduced_factor = factor::atom;
  return c;
}

Scenario Scenario::from_preset(std::string_view preset_name, ModelKind model, Mode mode,
                               InitialState init) {
  const Preset p = cqedswitch::preset(preset_name);
  Scenario s;
  s.model = model;
  s.preset = p.name;
  s.params = p.params;
  s.mode = mode;
  s.init = init;
  s.drives.beta = p.beta;
  s.drives.alpha_s = (mode == Mode::kSet || mode == Mode::kRace) ? p.alpha : cplx(0.0);
  s.drives.alpha_r = (mode == Mode::kReset || mode == Mode::kRace) ? p.alpha : cplx(0.0);
  s.integration = default_integration(model);
  return s;
}

void Scenario::validate() const {
  params.validate();
  if (!finite(drives.beta) || !finite(drives.alpha_s) || !finite(drives.alpha_r)) {
    throw InvalidArgument("drive amplitudes must be finite");
  }
  const bool s_on = drives.alpha_s != cplx(0.0);
  const bool r_on = drives.alpha_r != cplx(0.0);
  const bool ok = (mode == Mode::kHold && !s_on && !r_on) || (mode == Mode::kSet && s_on && !r_on) ||
                  (mode == Mode::kReset && !s_on && r_on) || (mode == Mode::kRace && s_on && r_on);
  if (!ok) {
    throw InvalidArgument("drives (alpha_s on: " + std::string(s_on ? "yes" : "no") +
                          ", alpha_r on: " + std::string(r_on ? "yes" : "no") +
                          ") are inconsistent with the " + std::string(to_string(mode)) +
                          " scenario");
  }
  if (init == InitialState::kMixture) {
    double total = 0.0;
    for (int l = 0; l < 4; ++l) {
      const double p = mixture[static_cast<std::size_t>(l)];
      if (!std::isfinite(p) || p < 0.0) throw InvalidArgument("mixture populations must be >= 0");
      if (p > 0.0 && model_level(model, l) < 0) {
        throw InvalidArgument(std::string("level ") + kLevelNames[l] + " does not exist in the " +
                              std::string(to_string(model)) + " model");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("mixture populations must sum to 1");
  } else if (init == InitialState::kS && model == ModelKind::kLimit) {
    throw InvalidArgument("level s does not exist in the limit model");
  }
  if (model == ModelKind::kIntermediate) gamma_value();
  integration.validate();
}

double Scenario::gamma_value() const {
  if (gamma) {
    if (!std::isfinite(*gamma) || *gamma < 0.0) throw InvalidArgument("gamma must be >= 0");
    return *gamma;
  }
  return enhanced_rate(params);
}

SLHModel Scenario::displaced_model() const {
  switch (model) {
    case ModelKind::kPrimary:
      return displace(build_primary(params), drive_vector(model, drives));
    case ModelKind::kIntermediate:
      return displace(build_intermediate(gamma_value(), params.Gamma), drive_vector(model, drives));
    case ModelKind::kLimit:
      return displace(build_limit(), drive_vector(model, drives));
  }
  throw InvalidArgument("unknown model");
}

DensityMatrix Scenario::initial_state() const {
  std::array<double, 4> pops{};
  switch (init) {
    case InitialState::kG:
      pops[level::g] = 1.0;
      break;
    case InitialState::kH:
      pops[level::h] = 1.0;
      break;
    case InitialState::kS:
      pops[level::s] = 1.0;
      break;
    case InitialState::kMixture:
      pops = mixture;
      break;
  }
  const HilbertSpace space = model == ModelKind::kPrimary
                                 ? primary_space(params)
                                 : (model == ModelKind::kIntermediate ? intermediate_space()
                                                                      : limit_space());
  // Cavity modes start in vacuum, so the atomic level l sits at index
  // l * (product of the cavity dimensions).
  const Index stride = space.total_dim() / space.dim_of(factor::atom);
  DenseMatrix rho = DenseMatrix::Zero(space.total_dim(), space.total_dim());
  for (int l = 0; l < 4; ++l) {
    const double p = pops[static_cast<std::size_t>(l)];
    if (p == 0.0) continue;
    const int idx = model_level(model, l);
    if (idx < 0) {
      throw InvalidArgument(std::string("level ") + kLevelNames[l] + " does not exist in the " +
                            std::string(to_string(model)) + " model");
    }
    rho(idx * stride, idx * stride) = p;
  }
  return DensityMatrix(space, std::move(rho));
}

ScenarioResult run_scenario(const Scenario& s) {
  s.validate();
  const SLHModel g = s.displaced_model();
  const DensityMatrix rho0 = s.initial_state();
  const HilbertSpace& space = g.space();
  const int atom_dim = space.dim_of(factor::atom);

  ObservableList obs;
  if (s.model == ModelKind::kPrimary) {
    obs.emplace_back("a", embed(annihilation(s.params.trunc_p, factor::power), factor::power, space));
  }
  for (int l = 0; l < 4; ++l) {
    const int idx = model_level(s.model, l);
    if (idx < 0) continue;
    obs.emplace_back(std::string("pop_") + kLevelNames[l],
                     embed(transition(atom_dim, idx, idx, factor::atom), factor::atom, space));
  }
  obs.emplace_back("out", g.L(1));
  obs.emplace_back("outbar", g.L(0));

  IntegrationConfig cfg = s.integration;
  if (cfg.reduced_factor.empty()) cfg.reduced_factor = factor::atom;
  ScenarioResult result{integrate(g, rho0, cfg, obs), {}};
  result.table = make_table(result.trajectory, s);
  return result;
}

std::size_t RunTable::column_index(std::string_view name) {
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (kCsvColumns[i] == name) return i;
  }
  throw InvalidArgument("unknown CSV column '" + std::string(name) + "'");
}

std::vector<double> RunTable::column(std::string_view name) const {
  const std::size_t c = column_index(name);
  if (!present[c]) throw InvalidArgument("column '" + std::string(name) + "' is empty in this run");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

RunTable make_table(const Trajectory& t, const Scenario& s) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  RunTable table;
  auto set_present = [&](std::string_view name) { table.present[RunTable::column_index(name)] = true; };
  set_present("t");
  const bool has_a = t.has_channel("a");
  if (has_a) {
    set_present("re_a");
    set_present("im_a");
  }
  for (const char* l : kLevelNames) {
    if (t.has_channel(std::string("pop_") + l)) set_present(std::string("pop_") + l);
  }
  set_present("p_out");
  set_present("p_outbar");
  const double beta = std::abs(s.drives.beta);
  if (beta > 0.0) set_present("norm_amp");

  const auto& out = t.channel("out");
  const auto& outbar = t.channel("outbar");
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    std::array<double, kCsvColumns.size()> row;
    row.fill(nan);
    row[0] = t.times[i];
    if (has_a) {
      row[1] = t.channel("a")[i].real();
      row[2] = t.channel("a")[i].imag();
    }
    for (int l = 0; l < 4; ++l) {
      const std::string name = std::string("pop_") + kLevelNames[l];
      if (t.has_channel(name)) row[RunTable::column_index(name)] = t.channel(name)[i].real();
    }
    row[7] = std::norm(out[i]);
    row[8] = std::norm(outbar[i]);
    if (beta > 0.0) row[9] = std::abs(out[i]) / beta;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace cqedswitch
