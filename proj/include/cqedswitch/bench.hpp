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

// Switch scenarios, figures of merit, convergence studies and the CSV
// trajectory format.

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cqedswitch/dynamics.hpp"
#include "cqedswitch/models.hpp"

namespace cqedswitch {

/// Which control drives are on.
enum class Mode {
  kHold,   // neither
  kSet,    // alpha_s only: drive the relay to |h>
  kReset,  // alpha_r only: drive the relay to |g>
  kRace,   // both
};

std::string_view to_string(Mode mode);
/// Accepts hold, set, reset, race (any case); throws InvalidArgument.
Mode parse_mode(std::string_view name);

enum class InitialState { kG, kH, kS, kMixture };

std::string_view to_string(InitialState init);
/// Accepts g, h, s or mixture; throws InvalidArgument.
InitialState parse_initial_state(std::string_view name);

struct Scenario {
  ModelKind model = ModelKind::kPrimary;
  std::string preset = "paper-fig2";
  SwitchParameters params;
  /// Enhanced rate of the intermediate model; derived from params when unset.
  std::optional<double> gamma;
  DriveAmplitudes drives;
  Mode mode = Mode::kSet;
  InitialState init = InitialState::kG;
  /// Atomic populations (g, h, e, s) for InitialState::kMixture.
  std::array<double, 4> mixture{1.0, 0.0, 0.0, 0.0};
  IntegrationConfig integration;

  /// Scenario with the preset's rates, the drives implied by `mode` and the
  /// default integration settings of `model`.
  static Scenario from_preset(std::string_view preset_name, ModelKind model, Mode mode,
                              InitialState init);

  /// Throws InvalidArgument when the drives contradict the mode (SET needs
  /// alpha_r = 0, RESET alpha_s = 0, HOLD both 0, RACE both nonzero), the
  /// initial state does not exist in the model, or parameters are invalid.
  void validate() const;

  double gamma_value() const;
  /// The model with the drives applied.
  SLHModel displaced_model() const;
  DensityMatrix initial_state() const;
};

/// Default integration settings: dt = 2e-3 for the primary model and 1e-2
/// otherwise, t_final = 600, one sample per time unit, projection on for the
/// primary model.
IntegrationConfig default_integration(ModelKind model);

/// Columns of the trajectory CSV, in file order.
inline constexpr std::array<std::string_view, 10> kCsvColumns = {
    "t", "re_a", "im_a", "pop_g", "pop_h", "pop_s", "pop_e", "p_out", "p_outbar", "norm_amp"};

/// Sampled switch observables in the CSV schema. Absent entries are NaN and
/// their column is flagged as missing.
struct RunTable {
  std::array<bool, kCsvColumns.size()> present{};
  std::vector<std::array<double, kCsvColumns.size()>> rows;

  /// Column index by name; throws InvalidArgument.
  static std::size_t column_index(std::string_view name);
  /// Every sample of a column; throws InvalidArgument if the column is absent.
  std::vector<double> column(std::string_view name) const;
};

struct ScenarioResult {
  Trajectory trajectory;
  RunTable table;
};

/// Builds, drives and integrates the scenario. Recorded channels:
/// "a" (primary only), "pop_g", "pop_h", "pop_s", "pop_e" (as available),
/// "out" and "outbar" (amplitudes leaving ports 1 and 0).
ScenarioResult run_scenario(const Scenario& s);

/// Converts a trajectory of run_scenario into the CSV table.
RunTable make_table(const Trajectory& t, const Scenario& s);

struct Metrics {
  /// p_outbar / p_out at the last sample (infinite when p_out is zero).
  double contrast_ratio = 0.0;
  /// |beta|^2 / |alpha|^2 of the active control drive (SET or RESET).
  std::optional<double> power_gain;
  /// First time the target population (h for SET, g for RESET) reaches the
  /// threshold, linearly interpolated between samples.
  std::optional<double> switch_time_90;
  std::optional<double> photon_cost;  // switch_time_90 * |alpha|^2
  std::optional<double> energy;      // photon_cost * h c / lambda, joules
};

/// Figures of merit of a run. Throws NoSwitchError for SET/RESET runs whose
/// target population never reaches `threshold`.
Metrics compute_metrics(const RunTable& table, Mode mode, const DriveAmplitudes& drives,
                        double wavelength_nm = 1000.0, double threshold = 0.9);

/// Photon energy h c / lambda in joules.
double photon_energy(double wavelength_nm);

// --- CSV ------------------------------------------------------------------

/// Writes the table with a fixed header and shortest round-trip formatting,
/// byte-for-byte deterministic.
void write_csv(std::ostream& os, const RunTable& table);
void write_csv(const std::filesystem::path& path, const RunTable& table);
/// Parses a CSV written by write_csv; throws InvalidArgument with the line
/// number on malformed input.
RunTable read_csv(std::istream& is);
RunTable read_csv(const std::filesystem::path& path);

/// Scenario facts needed to recompute metrics from a CSV, stored next to it
/// as "<csv>.meta" in key = value form.
struct RunMeta {
  ModelKind model = ModelKind::kPrimary;
  Mode mode = Mode::kSet;
  DriveAmplitudes drives;
};
RunMeta meta_of(const Scenario& s);
void write_meta(const std::filesystem::path& csv_path, const RunMeta& meta);
RunMeta read_meta(const std::filesystem::path& csv_path);
std::filesystem::path meta_path(const std::filesystem::path& csv_path);

// --- Studies --------------------------------------------------------------

/// Runs body(i) for i in [0, n) on up to hardware_concurrency threads. The
/// first exception (lowest index) is rethrown after all tasks finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

struct ConvergenceRow {
  double scale = 0.0;
  double distance = 0.0;
};

/// Options shared by both convergence studies.
struct StudyOptions {
  Mode mode = Mode::kSet;
  InitialState init = InitialState::kG;
  double t_final = 600.0;
  double sample_interval = 1.0;
  bool projection = true;  // primary runs only
};

/// Distance between the primary model at k1 = k2 = k and the intermediate
/// model (gamma = g^2 / kappa) for every k. Primary runs use dt = 2e-3 / k^2.
/// Throws with the offending scale in the message on integrator failure.
std::vector<ConvergenceRow> k_study(const SwitchParameters& base, const DriveAmplitudes& drives,
                                    std::span<const double> ks, const StudyOptions& options = {});

/// Distance between the intermediate model at each gamma and the limit
/// equations. Intermediate runs use dt = min(1e-2, 0.05 / (Gamma + 2 gamma)).
std::vector<ConvergenceRow> gamma_study(double Gamma, const DriveAmplitudes& drives,
                                        std::span<const double> gammas,
                                        const StudyOptions& options = {});

/// Throws InvalidArgument unless scales are positive and strictly increasing.
void validate_scales(std::span<const double> scales);

struct ZenoRow {
  double beta = 0.0;
  std::optional<double> switch_time_90;  // empty: no switch by t_final
};

/// RESET from |h> in the intermediate model at each beta (alpha_r fixed).
/// Rows that never switch are recorded, not thrown.
std::vector<ZenoRow> zeno_sweep(double gamma, double Gamma, cplx alpha_r,
                                std::span<const double> betas, double t_final = 600.0);

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);
void write_zeno_csv(std::ostream& os, const std::vector<ZenoRow>& rows);

/// Shortest round-trip decimal form used by every CSV writer.
std::string format_number(double v);

}  // namespace cqedswitch
