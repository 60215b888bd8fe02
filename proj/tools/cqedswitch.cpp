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

// cqedswitch: command-line front end of the switch simulator.
//
// Exit codes: 0 success, 2 invalid input, 3 integrator failure, 4 no switch.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cqedswitch/bench.hpp"
#include "cqedswitch/config.hpp"

namespace {

using namespace cqedswitch;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitIntegrator = 3;
constexpr int kExitNoSwitch = 4;

struct SimulateArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string model, scenario, init, preset, out;
  std::optional<double> t_final, dt;
};

struct MetricsArgs {
  std::string in;
  double wavelength_nm = 1000.0;
  double threshold = 0.9;
};

struct ConvergeArgs {
  std::string study;
  std::vector<double> scales;
  std::string preset = "paper-fig2";
  std::string scenario = "set";
  std::string init = "g";
  double t_final = 600.0;
  std::string out;
};

struct ZenoArgs {
  std::vector<double> betas;
  std::string preset = "paper-fig2";
  std::optional<double> gamma;
  double t_final = 600.0;
  std::string out;
};

void add_setting(KeyValues& kv, const std::string& key, const std::string& value) {
  kv.emplace_back(key, KeyValueEntry{value, "--" + key});
}

// Writes to the named file, or to stdout when the name is empty.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open '" + path + "' for writing");
  fn(os);
}

int run_simulate(const SimulateArgs& a) {
  KeyValues settings;
  if (!a.config.empty()) settings = load_key_values(a.config);
  KeyValues flags;
  for (const auto& item : a.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + item + "'");
    flags.emplace_back(item.substr(0, eq), KeyValueEntry{item.substr(eq + 1), "--set"});
  }
  if (!a.model.empty()) add_setting(flags, "model", a.model);
  if (!a.scenario.empty()) add_setting(flags, "scenario", a.scenario);
  if (!a.init.empty()) add_setting(flags, "init", a.init);
  if (!a.preset.empty()) add_setting(flags, "preset", a.preset);
  if (a.t_final) add_setting(flags, "t_final", format_number(*a.t_final));
  if (a.dt) add_setting(flags, "dt", format_number(*a.dt));
  const Scenario s = scenario_from_settings(merge(std::move(settings), flags));

  const ScenarioResult r = run_scenario(s);
  write_csv(std::filesystem::path(a.out), r.table);
  write_meta(a.out, meta_of(s));
  std::cout << "model = " << to_string(s.model) << "\nscenario = " << to_string(s.mode)
            << "\ninit = " << to_string(s.init) << "\nsamples = " << r.table.rows.size()
            << "\ndiagnostics = " << r.trajectory.diagnostics.summary() << "\nout = " << a.out
            << '\n';
  return kExitOk;
}

int run_metrics(const MetricsArgs& a) {
  const RunTable table = read_csv(std::filesystem::path(a.in));
  const RunMeta meta = read_meta(a.in);
  const Metrics m = compute_metrics(table, meta.mode, meta.drives, a.wavelength_nm, a.threshold);
  std::cout << "scenario = " << to_string(meta.mode) << '\n'
            << "contrast_ratio = " << format_number(m.contrast_ratio) << '\n';
  if (m.power_gain) std::cout << "power_gain = " << format_number(*m.power_gain) << '\n';
  if (m.switch_time_90) {
    std::cout << "switch_time_90 = " << format_number(*m.switch_time_90) << '\n'
              << "photon_cost = " << format_number(*m.photon_cost) << '\n'
              << "energy_joules = " << format_number(*m.energy) << '\n'
              << "wavelength_nm = " << format_number(a.wavelength_nm) << '\n';
  }
  return kExitOk;
}

int run_converge(const ConvergeArgs& a) {
  const Preset p = preset(a.preset);
  StudyOptions o;
  o.mode = parse_mode(a.scenario);
  o.init = parse_initial_state(a.init);
  o.t_final = a.t_final;
  DriveAmplitudes d;
  d.beta = p.beta;
  d.alpha_s = (o.mode == Mode::kSet || o.mode == Mode::kRace) ? p.alpha : cplx(0.0);
  d.alpha_r = (o.mode == Mode::kReset || o.mode == Mode::kRace) ? p.alpha : cplx(0.0);
  std::vector<ConvergenceRow> rows;
  if (a.study == "k") {
    rows = k_study(p.params, d, a.scales, o);
  } else if (a.study == "gamma") {
    rows = gamma_study(p.params.Gamma, d, a.scales, o);
  } else {
    throw InvalidArgument("--study must be k or gamma");
  }
  emit(a.out, [&](std::ostream& os) { write_convergence_csv(os, rows); });
  return kExitOk;
}

int run_zeno(const ZenoArgs& a) {
  const Preset p = preset(a.preset);
  const double gamma = a.gamma ? *a.gamma : enhanced_rate(p.params);
  const auto rows = zeno_sweep(gamma, p.params.Gamma, p.alpha, a.betas, a.t_final);
  emit(a.out, [&](std::ostream& os) { write_zeno_csv(os, rows); });
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity-QED set-reset switch simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate one scenario and write a CSV trajectory");
  simulate->add_option("--config", sim.config, "key = value scenario file")->check(CLI::ExistingFile);
  simulate->add_option("--set", sim.overrides, "extra key=value setting (repeatable)");
  simulate->add_option("--model", sim.model, "primary, intermediate or limit");
  simulate->add_option("--scenario", sim.scenario, "hold, set, reset or race");
  simulate->add_option("--init", sim.init, "initial atomic state: g, h, s or mixture");
  simulate->add_option("--preset", sim.preset, "paper-fig2, gaas-inas or gap-nv");
  simulate->add_option("--out", sim.out, "CSV output path")->required();
  simulate->add_option("--t-final", sim.t_final, "integration time");
  simulate->add_option("--dt", sim.dt, "time step");

  MetricsArgs met;
  auto* metrics = app.add_subcommand("metrics", "Switch figures of merit from a simulate CSV");
  metrics->add_option("--in", met.in, "CSV written by simulate")->required()->check(CLI::ExistingFile);
  metrics->add_option("--wavelength-nm", met.wavelength_nm, "photon wavelength for the energy")
      ->capture_default_str();
  metrics->add_option("--threshold", met.threshold, "switching population threshold")
      ->capture_default_str();

  ConvergeArgs conv;
  auto* converge = app.add_subcommand("converge", "Distance to the reduced model versus scale");
  converge->add_option("--study", conv.study, "k or gamma")->required();
  converge->add_option("--scales", conv.scales, "comma-separated increasing scales")
      ->required()
      ->delimiter(',');
  converge->add_option("--preset", conv.preset, "parameter preset")->capture_default_str();
  converge->add_option("--scenario", conv.scenario, "set or reset")->capture_default_str();
  converge->add_option("--init", conv.init, "g or h")->capture_default_str();
  converge->add_option("--t-final", conv.t_final, "integration time")->capture_default_str();
  converge->add_option("--out", conv.out, "CSV output path (default stdout)");

  ZenoArgs zen;
  auto* zeno = app.add_subcommand("zeno", "RESET switching time versus POWER drive");
  zeno->add_option("--betas", zen.betas, "comma-separated beta values")->required()->delimiter(',');
  zeno->add_option("--preset", zen.preset, "parameter preset")->capture_default_str();
  zeno->add_option("--gamma", zen.gamma, "enhanced rate (default g^2 / kappa)");
  zeno->add_option("--t-final", zen.t_final, "integration time")->capture_default_str();
  zeno->add_option("--out", zen.out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*metrics) return run_metrics(met);
    if (*converge) return run_converge(conv);
    if (*zeno) return run_zeno(zen);
  } catch (const NoSwitchError& e) {
    std::cerr << "no switch: " << e.what() << '\n';
    return kExitNoSwitch;
  } catch (const IntegrationError& e) {
    std::cerr << "integrator failure: " << e.what() << "\n  " << e.diagnostics().summary() << '\n';
    return kExitIntegrator;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitInvalid;
}
