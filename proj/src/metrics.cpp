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

#include <cmath>
#include <limits>

#include "cqedswitch/bench.hpp"

namespace cqedswitch {

double photon_energy(double wavelength_nm) {
  if (!(wavelength_nm > 0.0) || !std::isfinite(wavelength_nm)) {
    throw InvalidArgument("wavelength must be positive");
  }
  constexpr double kPlanck = 6.62607015e-34;    // J s (exact, SI 2019)
  constexpr double kLightSpeed = 299792458.0;   // m / s (exact)
  return kPlanck * kLightSpeed / (wavelength_nm * 1e-9);
}

Metrics compute_metrics(const RunTable& table, Mode mode, const DriveAmplitudes& drives,
                        double wavelength_nm, double threshold) {
  if (table.rows.empty()) throw InvalidArgument("cannot compute metrics of an empty run");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidArgument("threshold must be in (0, 1]");
  const double e_photon = photon_energy(wavelength_nm);

  Metrics m;
  const double p_out = table.column("p_out").back();
  const double p_outbar = table.column("p_outbar").back();
  m.contrast_ratio = p_out > 0.0 ? p_outbar / p_out : std::numeric_limits<double>::infinity();

  if (mode != Mode::kSet && mode != Mode::kReset) return m;
  const double alpha2 = std::norm(mode == Mode::kSet ? drives.alpha_s : drives.alpha_r);
  if (alpha2 > 0.0) m.power_gain = std::norm(drives.beta) / alpha2;

  const std::vector<double> t = table.column("t");
  const std::vector<double> pop = table.column(mode == Mode::kSet ? "pop_h" : "pop_g");
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (pop[i] < threshold) continue;
    double when = t[i];
    if (i > 0) {
      const double f = (threshold - pop[i - 1]) / (pop[i] - pop[i - 1]);
      when = t[i - 1] + f * (t[i] - t[i - 1]);
    }
    m.switch_time_90 = when;
    m.photon_cost = when * alpha2;
    m.energy = *m.photon_cost * e_photon;
    return m;
  }
  throw NoSwitchError("target population never reached " + std::to_string(threshold) +
                      " (final value " + std::to_string(pop.back()) + " at t=" +
                      std::to_string(t.back()) + ")");
}

}  // namespace cqedswitch
