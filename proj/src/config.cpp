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

#include "cqedswitch/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace cqedswitch {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Keys applied in this order, whatever their order in the file.
const std::vector<ConfigKey>& ordered_keys() {
  static const std::vector<ConfigKey> keys = {
      {"preset", "named operating point: paper-fig2 (default), gaas-inas, gap-nv"},
      {"model", "primary (default), intermediate or limit"},
      {"scenario", "hold, set (default), reset or race"},
      {"init", "initial atomic state: g (default), h, s or mixture"},
      {"mixture", "populations p_g,p_h,p_e,p_s for init = mixture"},
      {"Gamma", "spontaneous emission rate, all four channels"},
      {"kappa", "field decay rate of all three cavities"},
      {"kappa_p", "POWER cavity decay rate"},
      {"kappa_s", "SET cavity decay rate"},
      {"kappa_r", "RESET cavity decay rate"},
      {"g_p", "atom-POWER coupling"},
      {"g_s", "atom-SET coupling"},
      {"g_r", "atom-RESET coupling"},
      {"k", "sets both scaling parameters k1 and k2"},
      {"k1", "POWER scaling parameter"},
      {"k2", "SET/RESET scaling parameter"},
      {"trunc", "Fock levels kept in every cavity mode"},
      {"trunc_p", "Fock levels of the POWER mode"},
      {"trunc_s", "Fock levels of the SET mode"},
      {"trunc_r", "Fock levels of the RESET mode"},
      {"gamma", "enhanced rate of the intermediate model (default g_s^2 / kappa_s)"},
      {"beta", "POWER drive amplitude (complex)"},
      {"alpha", "amplitude of the control drives the scenario switches on"},
      {"alpha_s", "SET drive amplitude (complex)"},
      {"alpha_r", "RESET drive amplitude (complex)"},
      {"method", "rk4 (default) or dopri5"},
      {"dt", "time step (initial step for dopri5)"},
      {"t_final", "integration time"},
      {"record_stride", "steps of dt between recorded samples"},
      {"trace_tol", "allowed trace drift"},
      {"positivity_floor", "most negative eigenvalue tolerated"},
      {"rtol", "dopri5 relative tolerance"},
      {"atol", "dopri5 absolute tolerance"},
      {"truncation_check", "record the top Fock-level population (true/false)"},
      {"projection", "slow-subspace propagation (true/false)"},
      {"projection_start", "time of the first snapshot"},
      {"snapshot_interval", "time between snapshots"},
      {"projection_max_basis", "largest snapshot basis"},
      {"projection_skip_tol", "relative size below which a snapshot adds nothing"},
      {"projection_defect_tol", "bound on the accumulated projection error"},
  };
  return keys;
}

}  // namespace

KeyValues parse_key_values(std::istream& is, const std::string& source) {
  KeyValues out;
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto where = source + ":" + std::to_string(lineno);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw InvalidArgument(where + ": empty key");
    if (value.empty()) throw InvalidArgument(where + ": empty value for '" + key + "'");
    for (const auto& [k, e] : out) {
      if (k == key) throw InvalidArgument(where + ": '" + key + "' already set at " + e.where);
    }
    out.emplace_back(std::move(key), KeyValueEntry{std::move(value), where});
  }
  return out;
}

KeyValues load_key_values(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open config file '" + path.string() + "'");
  return parse_key_values(is, path.string());
}

KeyValues merge(KeyValues base, const KeyValues& overrides) {
  for (const auto& [key, entry] : overrides) {
    auto it = std::find_if(base.begin(), base.end(), [&](const auto& kv) { return kv.first == key; });
    if (it != base.end()) {
      it->second = entry;
    } else {
      base.emplace_back(key, entry);
    }
  }
  return base;
}

double parse_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw InvalidArgument(where + ": '" + text + "' is not a finite number");
  }
  return v;
}

long parse_integer(const std::string& text, const std::string& where) {
  long v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw InvalidArgument(where + ": '" + text + "' is not an integer");
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "off" || text == "no") return false;
  throw InvalidArgument(where + ": '" + text + "' is not a boolean (true/false)");
}

cplx parse_complex(const std::string& text, const std::string& where) {
  std::istringstream is(text);
  cplx z;
  is >> z;
  if (is.fail()) throw InvalidArgument(where + ": '" + text + "' is not a complex number");
  is >> std::ws;
  if (!is.eof()) throw InvalidArgument(where + ": trailing characters in '" + text + "'");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw InvalidArgument(where + ": '" + text + "' is not finite");
  }
  return z;
}

const std::vector<ConfigKey>& config_keys() { return ordered_keys(); }

Scenario scenario_from_settings(const KeyValues& settings) {
  std::map<std::string, const KeyValueEntry*> by_key;
  for (const auto& [key, entry] : settings) {
    const auto& keys = ordered_keys();
    if (std::none_of(keys.begin(), keys.end(), [&](const ConfigKey& k) { return k.name == key; })) {
      throw InvalidArgument(entry.where + ": unknown key '" + key + "'");
    }
    by_key[key] = &entry;
  }
  auto get = [&](const std::string& key) -> const KeyValueEntry* {
    const auto it = by_key.find(key);
    return it == by_key.end() ? nullptr : it->second;
  };
  auto text_or = [&](const std::string& key, std::string fallback) {
    const auto* e = get(key);
    return e ? e->value : fallback;
  };
  auto wrap = [&](const std::string& key, auto&& fn) {
    const auto* e = get(key);
    if (!e) return;
    try {
      fn(*e);
    } catch (const InvalidArgument& ex) {
      const std::string msg = ex.what();
      if (msg.rfind(e->where, 0) == 0) throw;
      throw InvalidArgument(e->where + ": " + msg);
    }
  };

  ModelKind model = ModelKind::kPrimary;
  Mode mode = Mode::kSet;
  InitialState init = InitialState::kG;
  wrap("model", [&](const KeyValueEntry& e) { model = parse_model_kind(e.value); });
  wrap("scenario", [&](const KeyValueEntry& e) { mode = parse_mode(e.value); });
  wrap("init", [&](const KeyValueEntry& e) { init = parse_initial_state(e.value); });
  Scenario s;
  wrap("preset", [&](const KeyValueEntry& e) { s = Scenario::from_preset(e.value, model, mode, init); });
  if (!get("preset")) s = Scenario::from_preset(text_or("preset", "paper-fig2"), model, mode, init);

  wrap("mixture", [&](const KeyValueEntry& e) {
    std::istringstream is(e.value);
    std::string part;
    std::size_t i = 0;
    while (std::getline(is, part, ',')) {
      if (i >= 4) throw InvalidArgument(e.where + ": mixture needs exactly 4 populations");
      s.mixture[i++] = parse_double(trim(part), e.where);
    }
    if (i != 4) throw InvalidArgument(e.where + ": mixture needs exactly 4 populations");
  });

  auto num = [&](const std::string& key, double& target) {
    wrap(key, [&](const KeyValueEntry& e) { target = parse_double(e.value, e.where); });
  };
  auto count = [&](const std::string& key, int& target) {
    wrap(key, [&](const KeyValueEntry& e) {
      const long v = parse_integer(e.value, e.where);
      if (v < 1 || v > 1'000'000'000L) throw InvalidArgument(e.where + ": out of range");
      target = static_cast<int>(v);
    });
  };
  SwitchParameters& p = s.params;
  num("Gamma", p.Gamma);
  wrap("kappa", [&](const KeyValueEntry& e) {
    p.kappa_p = p.kappa_s = p.kappa_r = parse_double(e.value, e.where);
  });
  num("kappa_p", p.kappa_p);
  num("kappa_s", p.kappa_s);
  num("kappa_r", p.kappa_r);
  num("g_p", p.g_p);
  num("g_s", p.g_s);
  num("g_r", p.g_r);
  wrap("k", [&](const KeyValueEntry& e) { p.k1 = p.k2 = parse_double(e.value, e.where); });
  num("k1", p.k1);
  num("k2", p.k2);
  wrap("trunc", [&](const KeyValueEntry& e) {
    const long v = parse_integer(e.value, e.where);
    if (v < 2 || v > 64) throw InvalidArgument(e.where + ": truncation must be in [2, 64]");
    p.trunc_p = p.trunc_s = p.trunc_r = static_cast<int>(v);
  });
  count("trunc_p", p.trunc_p);
  count("trunc_s", p.trunc_s);
  count("trunc_r", p.trunc_r);
  wrap("gamma", [&](const KeyValueEntry& e) { s.gamma = parse_double(e.value, e.where); });

  wrap("beta", [&](const KeyValueEntry& e) { s.drives.beta = parse_complex(e.value, e.where); });
  wrap("alpha", [&](const KeyValueEntry& e) {
    const cplx a = parse_complex(e.value, e.where);
    s.drives.alpha_s = (mode == Mode::kSet || mode == Mode::kRace) ? a : cplx(0.0);
    s.drives.alpha_r = (mode == Mode::kReset || mode == Mode::kRace) ? a : cplx(0.0);
  });
  wrap("alpha_s", [&](const KeyValueEntry& e) { s.drives.alpha_s = parse_complex(e.value, e.where); });
  wrap("alpha_r", [&](const KeyValueEntry& e) { s.drives.alpha_r = parse_complex(e.value, e.where); });

  IntegrationConfig& ic = s.integration;
  wrap("method", [&](const KeyValueEntry& e) {
    if (e.value == "rk4") {
      ic.method = Method::kRK4;
    } else if (e.value == "dopri5") {
      ic.method = Method::kDopri5;
    } else {
      throw InvalidArgument(e.where + ": method must be rk4 or dopri5");
    }
  });
  const double sample_interval = ic.dt * ic.record_stride;
  num("dt", ic.dt);
  num("t_final", ic.t_final);
  if (get("dt") && !get("record_stride") && ic.dt > 0.0) {
    // Keep the sampling grid when only the step changes.
    ic.record_stride = static_cast<int>(std::max(1L, std::lround(sample_interval / ic.dt)));
  }
  count("record_stride", ic.record_stride);
  num("trace_tol", ic.trace_tol);
  num("positivity_floor", ic.positivity_floor);
  num("rtol", ic.rtol);
  num("atol", ic.atol);
  wrap("truncation_check",
       [&](const KeyValueEntry& e) { ic.truncation_check = parse_bool(e.value, e.where); });
  wrap("projection",
       [&](const KeyValueEntry& e) { ic.projection.enabled = parse_bool(e.value, e.where); });
  num("projection_start", ic.projection.start_time);
  num("snapshot_interval", ic.projection.snapshot_interval);
  count("projection_max_basis", ic.projection.max_basis);
  num("projection_skip_tol", ic.projection.skip_tol);
  num("projection_defect_tol", ic.projection.defect_tol);

  s.validate();
  return s;
}

}  // namespace cqedswitch
