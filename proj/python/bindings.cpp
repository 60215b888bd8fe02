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

// Python bindings (module cqedswitch._core). Operators are returned as dense
// complex NumPy arrays; long integrations release the GIL.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <string>
#include <vector>

#include "cqedswitch/bench.hpp"
#include "cqedswitch/config.hpp"

namespace py = pybind11;
using namespace cqedswitch;

namespace {

DriveVector to_drive_vector(const std::vector<cplx>& d) { return DriveVector(d.begin(), d.end()); }

py::array_t<double> column_array(const RunTable& t, std::string_view name) {
  const std::vector<double> v = t.column(name);
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict table_dict(const RunTable& t) {
  py::dict out;
  for (std::size_t c = 0; c < kCsvColumns.size(); ++c) {
    if (t.present[c]) out[py::str(std::string(kCsvColumns[c]))] = column_array(t, kCsvColumns[c]);
  }
  return out;
}

KeyValues settings_of(const std::map<std::string, std::string>& kv) {
  KeyValues out;
  for (const auto& [k, v] : kv) out.emplace_back(k, KeyValueEntry{v, "python"});
  return out;
}

std::vector<std::pair<double, double>> rows_of(const std::vector<ConvergenceRow>& rows) {
  std::vector<std::pair<double, double>> out;
  for (const auto& r : rows) out.emplace_back(r.scale, r.distance);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cavity-QED set-reset switch simulator";

  // Exceptions: InvalidArgument maps onto ValueError so callers can use the
  // builtin; the others derive from cqedswitch.Error.
  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<IntegrationError> integration_error(m, "IntegrationError", error.ptr());
  static py::exception<NoSwitchError> no_switch(m, "NoSwitchError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidArgument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const IntegrationError& e) {
      py::set_error(integration_error, (std::string(e.what()) + " [" + e.diagnostics().summary() + "]").c_str());
    } catch (const NoSwitchError& e) {
      py::set_error(no_switch, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::enum_<ModelKind>(m, "ModelKind")
      .value("PRIMARY", ModelKind::kPrimary)
      .value("INTERMEDIATE", ModelKind::kIntermediate)
      .value("LIMIT", ModelKind::kLimit);
  py::enum_<Mode>(m, "Mode")
      .value("HOLD", Mode::kHold)
      .value("SET", Mode::kSet)
      .value("RESET", Mode::kReset)
      .value("RACE", Mode::kRace);
  py::enum_<InitialState>(m, "InitialState")
      .value("G", InitialState::kG)
      .value("H", InitialState::kH)
      .value("S", InitialState::kS)
      .value("MIXTURE", InitialState::kMixture);
  py::enum_<Method>(m, "Method").value("RK4", Method::kRK4).value("DOPRI5", Method::kDopri5);

  m.def("parse_model_kind", &parse_model_kind, py::arg("name"));
  m.def("parse_mode", &parse_mode, py::arg("name"));
  m.def("parse_initial_state", &parse_initial_state, py::arg("name"));

  py::class_<SwitchParameters>(m, "SwitchParameters")
      .def(py::init<>())
      .def_readwrite("Gamma", &SwitchParameters::Gamma)
      .def_readwrite("kappa_p", &SwitchParameters::kappa_p)
      .def_readwrite("kappa_s", &SwitchParameters::kappa_s)
      .def_readwrite("kappa_r", &SwitchParameters::kappa_r)
      .def_readwrite("g_p", &SwitchParameters::g_p)
      .def_readwrite("g_s", &SwitchParameters::g_s)
      .def_readwrite("g_r", &SwitchParameters::g_r)
      .def_readwrite("k1", &SwitchParameters::k1)
      .def_readwrite("k2", &SwitchParameters::k2)
      .def_readwrite("trunc_p", &SwitchParameters::trunc_p)
      .def_readwrite("trunc_s", &SwitchParameters::trunc_s)
      .def_readwrite("trunc_r", &SwitchParameters::trunc_r)
      .def("validate", &SwitchParameters::validate);

  py::class_<DriveAmplitudes>(m, "DriveAmplitudes")
      .def(py::init([](cplx beta, cplx alpha_s, cplx alpha_r) { return DriveAmplitudes{beta, alpha_s, alpha_r}; }),
           py::arg("beta") = cplx(0.0), py::arg("alpha_s") = cplx(0.0), py::arg("alpha_r") = cplx(0.0))
      .def_readwrite("beta", &DriveAmplitudes::beta)
      .def_readwrite("alpha_s", &DriveAmplitudes::alpha_s)
      .def_readwrite("alpha_r", &DriveAmplitudes::alpha_r);

  py::class_<Preset>(m, "Preset")
      .def_readonly("name", &Preset::name)
      .def_readonly("description", &Preset::description)
      .def_readonly("params", &Preset::params)
      .def_readonly("beta", &Preset::beta)
      .def_readonly("alpha", &Preset::alpha);
  m.def("preset", &preset, py::arg("name"));
  m.def("preset_names", &preset_names);
  m.def("enhanced_rate", &enhanced_rate, py::arg("params"));

  py::class_<LimitState>(m, "LimitState")
      .def(py::init([](double rho_gg, cplx rho_hg) { return LimitState{rho_gg, rho_hg}; }),
           py::arg("rho_gg") = 1.0, py::arg("rho_hg") = cplx(0.0))
      .def_readwrite("rho_gg", &LimitState::rho_gg)
      .def_readwrite("rho_hg", &LimitState::rho_hg)
      .def("validate", &LimitState::validate)
      .def("matrix", &LimitState::matrix);
  m.def(
      "limit_rhs",
      [](const LimitState& x, const DriveAmplitudes& d) {
        const LimitDerivative r = limit_rhs(x, d);
        return py::make_tuple(r.d_gg, r.d_hg);
      },
      py::arg("state"), py::arg("drives"), "Returns (d rho_gg/dt, d rho_hg/dt).");
  m.def("limit_equilibrium", &limit_equilibrium, py::arg("drives"));

  py::class_<SLHModel>(m, "SLHModel")
      .def_property_readonly("n_ports", &SLHModel::n_ports)
      .def_property_readonly("dim", [](const SLHModel& g) { return g.space().total_dim(); })
      .def_property_readonly("space", [](const SLHModel& g) { return g.space().describe(); })
      .def("S", [](const SLHModel& g, int row, int col) { return g.S(row, col).to_dense(); }, py::arg("row"),
           py::arg("col"))
      .def("L", [](const SLHModel& g, int port) { return g.L(port).to_dense(); }, py::arg("port"))
      .def_property_readonly("H", [](const SLHModel& g) { return g.H().to_dense(); })
      .def("unitarity_defect", &SLHModel::unitarity_defect);
  m.def("build_primary", &build_primary, py::arg("params"));
  m.def("build_intermediate", &build_intermediate, py::arg("gamma"), py::arg("Gamma"));
  m.def("build_limit", &build_limit);
  m.def("port_count", &port_count, py::arg("kind"));
  m.def("drive_vector", &drive_vector, py::arg("kind"), py::arg("drives"));
  m.def("series", &series, py::arg("g2"), py::arg("g1"), "Feed the outputs of g1 into g2.");
  m.def("concat", &concat, py::arg("g1"), py::arg("g2"));
  m.def(
      "displace", [](const SLHModel& g, const std::vector<cplx>& d) { return displace(g, to_drive_vector(d)); },
      py::arg("model"), py::arg("drives"));
  m.def(
      "generator",
      [](const SLHModel& g) {
        const Generator gen = generator(g);
        std::vector<DenseMatrix> L;
        for (const auto& op : gen.L) L.push_back(op.to_dense());
        return py::make_tuple(gen.H.to_dense(), L);
      },
      py::arg("model"), "Returns (H, [L_i]) of the Lindblad generator.");

  py::class_<IntegrationConfig>(m, "IntegrationConfig")
      .def(py::init<>())
      .def_readwrite("method", &IntegrationConfig::method)
      .def_readwrite("dt", &IntegrationConfig::dt)
      .def_readwrite("t_final", &IntegrationConfig::t_final)
      .def_readwrite("record_stride", &IntegrationConfig::record_stride)
      .def_property(
          "projection",
          [](const IntegrationConfig& c) { return c.projection.enabled; },
          [](IntegrationConfig& c, bool on) { c.projection.enabled = on; })
      .def("validate", &IntegrationConfig::validate);
  m.def("default_integration", &default_integration, py::arg("model"));

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_static("from_preset", &Scenario::from_preset, py::arg("preset"), py::arg("model"), py::arg("mode"),
                  py::arg("init"))
      .def_readwrite("model", &Scenario::model)
      .def_readwrite("preset", &Scenario::preset)
      .def_readwrite("params", &Scenario::params)
      .def_readwrite("gamma", &Scenario::gamma)
      .def_readwrite("drives", &Scenario::drives)
      .def_readwrite("mode", &Scenario::mode)
      .def_readwrite("init", &Scenario::init)
      .def_readwrite("mixture", &Scenario::mixture)
      .def_readwrite("integration", &Scenario::integration)
      .def("validate", &Scenario::validate)
      .def("gamma_value", &Scenario::gamma_value)
      .def("displaced_model", &Scenario::displaced_model);
  m.def("scenario_from_settings", [](const std::map<std::string, std::string>& kv) {
    return scenario_from_settings(settings_of(kv));
  }, py::arg("settings"), "Scenario from the same keys as a configuration file.");

  py::class_<RunTable>(m, "RunTable")
      .def(py::init<>())
      .def_property_readonly("n_rows", [](const RunTable& t) { return t.rows.size(); })
      .def("column", &column_array, py::arg("name"))
      .def("columns", &table_dict, "Present columns as {name: ndarray}.");
  m.attr("CSV_COLUMNS") = [] {
    std::vector<std::string> cols;
    for (auto c : kCsvColumns) cols.emplace_back(c);
    return cols;
  }();

  py::class_<Diagnostics>(m, "Diagnostics")
      .def_readonly("max_trace_drift", &Diagnostics::max_trace_drift)
      .def_readonly("max_hermiticity_defect", &Diagnostics::max_hermiticity_defect)
      .def_readonly("min_eigenvalue", &Diagnostics::min_eigenvalue)
      .def_readonly("steps", &Diagnostics::steps)
      .def("summary", &Diagnostics::summary);

  py::class_<ScenarioResult>(m, "ScenarioResult")
      .def_readonly("table", &ScenarioResult::table)
      .def_property_readonly("diagnostics", [](const ScenarioResult& r) { return r.trajectory.diagnostics; })
      .def_property_readonly("times", [](const ScenarioResult& r) { return r.trajectory.times; })
      .def("channel", [](const ScenarioResult& r, const std::string& name) { return r.trajectory.channel(name); },
           py::arg("name"));
  m.def("run_scenario", &run_scenario, py::arg("scenario"), py::call_guard<py::gil_scoped_release>());

  py::class_<Metrics>(m, "Metrics")
      .def_readonly("contrast_ratio", &Metrics::contrast_ratio)
      .def_readonly("power_gain", &Metrics::power_gain)
      .def_readonly("switch_time_90", &Metrics::switch_time_90)
      .def_readonly("photon_cost", &Metrics::photon_cost)
      .def_readonly("energy", &Metrics::energy);
  m.def("compute_metrics", &compute_metrics, py::arg("table"), py::arg("mode"), py::arg("drives"),
        py::arg("wavelength_nm") = 1000.0, py::arg("threshold") = 0.9);
  m.def("photon_energy", &photon_energy, py::arg("wavelength_nm"));

  m.def("write_csv", py::overload_cast<const std::filesystem::path&, const RunTable&>(&write_csv), py::arg("path"),
        py::arg("table"));
  m.def("read_csv", py::overload_cast<const std::filesystem::path&>(&read_csv), py::arg("path"));

  py::class_<StudyOptions>(m, "StudyOptions")
      .def(py::init<>())
      .def_readwrite("mode", &StudyOptions::mode)
      .def_readwrite("init", &StudyOptions::init)
      .def_readwrite("t_final", &StudyOptions::t_final)
      .def_readwrite("sample_interval", &StudyOptions::sample_interval)
      .def_readwrite("projection", &StudyOptions::projection);
  m.def(
      "k_study",
      [](const SwitchParameters& p, const DriveAmplitudes& d, const std::vector<double>& ks,
         const StudyOptions& o) { return rows_of(k_study(p, d, ks, o)); },
      py::arg("params"), py::arg("drives"), py::arg("ks"), py::arg("options") = StudyOptions{},
      py::call_guard<py::gil_scoped_release>(), "Returns [(k, distance)].");
  m.def(
      "gamma_study",
      [](double Gamma, const DriveAmplitudes& d, const std::vector<double>& gammas, const StudyOptions& o) {
        return rows_of(gamma_study(Gamma, d, gammas, o));
      },
      py::arg("Gamma"), py::arg("drives"), py::arg("gammas"), py::arg("options") = StudyOptions{},
      py::call_guard<py::gil_scoped_release>(), "Returns [(gamma, distance)].");
  m.def(
      "zeno_sweep",
      [](double gamma, double Gamma, cplx alpha_r, const std::vector<double>& betas, double t_final) {
        std::vector<std::pair<double, std::optional<double>>> out;
        for (const auto& r : zeno_sweep(gamma, Gamma, alpha_r, betas, t_final))
          out.emplace_back(r.beta, r.switch_time_90);
        return out;
      },
      py::arg("gamma"), py::arg("Gamma"), py::arg("alpha_r"), py::arg("betas"), py::arg("t_final") = 600.0,
      py::call_guard<py::gil_scoped_release>(), "Returns [(beta, switch_time_90 or None)].");
}
