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
#include <atomic>
#include <cmath>
#include <exception>
#include <future>
#include <ostream>
#include <thread>

#include "cqedswitch/bench.hpp"

namespace cqedswitch {

namespace {

// Sets dt to the largest value <= dt_max that divides the sampling interval.
void set_grid(IntegrationConfig& c, double dt_max, double interval) {
  const long stride = std::max(1L, static_cast<long>(std::ceil(interval / dt_max - 1e-9)));
  c.record_stride = static_cast<int>(stride);
  c.dt = interval / static_cast<double>(stride);
}

template <class Fn>
auto with_scale(double scale, const char* name, Fn&& fn) {
  const std::string tag = std::string(name) + "=" + format_number(scale) + ": ";
  try {
    return fn();
  } catch (const InstabilityError& e) {
    throw InstabilityError(tag + e.what(), e.diagnostics());
  } catch (const IntegrationError& e) {
    throw IntegrationError(tag + e.what(), e.diagnostics());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(tag + e.what());
  }
}

Scenario study_scenario(ModelKind model, const SwitchParameters& params, const DriveAmplitudes& d,
                        const StudyOptions& o) {
  Scenario s;
  s.model = model;
  s.params = params;
  s.drives = d;
  s.mode = o.mode;
  s.init = o.init;
  s.integration = default_integration(model);
  s.integration.t_final = o.t_final;
  s.integration.projection.enabled = model == ModelKind::kPrimary && o.projection;
  return s;
}

}  // namespace

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next++; i < n; i = next++) run(i);
      }));
    }
    for (auto& f : pool) f.get();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void validate_scales(std::span<const double> scales) {
  if (scales.empty()) throw InvalidArgument("at least one scale is required");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!std::isfinite(scales[i]) || scales[i] <= 0.0) {
      throw InvalidArgument("scales must be positive, got " + format_number(scales[i]));
    }
    if (i > 0 && !(scales[i] > scales[i - 1])) {
      throw InvalidArgument("scales must be strictly increasing");
    }
  }
}

std::vector<ConvergenceRow> k_study(const SwitchParameters& base, const DriveAmplitudes& drives,
                                    std::span<const double> ks, const StudyOptions& options) {
  validate_scales(ks);
  Scenario ref = study_scenario(ModelKind::kIntermediate, base, drives, options);
  ref.gamma = enhanced_rate(base);
  set_grid(ref.integration, 1e-2, options.sample_interval);
  ReducedTrajectory reference = reduce(run_scenario(ref).trajectory, {"g", "h", "s"});
  // The displaced intermediate model and the cavity-eliminated primary model
  // differ by the relabelling |s> -> -|s>; populations agree but the g-s and
  // h-s coherences flip sign. Express the reference in the primary's phases.
  for (auto& m : reference.states) {
    m.row(level::s3) *= -1.0;
    m.col(level::s3) *= -1.0;
  }

  std::vector<ConvergenceRow> rows(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    const double k = ks[i];
    rows[i] = with_scale(k, "k", [&] {
      SwitchParameters p = base;
      p.k1 = p.k2 = k;
      Scenario s = study_scenario(ModelKind::kPrimary, p, drives, options);
      set_grid(s.integration, 2e-3 / (k * k), options.sample_interval);
      const ReducedTrajectory run = reduce(run_scenario(s).trajectory, {"g", "h", "e", "s"});
      return ConvergenceRow{k, trajectory_distance(run, reference)};
    });
  });
  return rows;
}

std::vector<ConvergenceRow> gamma_study(double Gamma, const DriveAmplitudes& drives,
                                        std::span<const double> gammas,
                                        const StudyOptions& options) {
  validate_scales(gammas);
  if (options.init != InitialState::kG && options.init != InitialState::kH) {
    throw InvalidArgument("the gamma study starts from g or h");
  }
  LimitState x0;
  x0.rho_gg = options.init == InitialState::kG ? 1.0 : 0.0;
  const long lim_stride = std::max(1L, std::lround(options.sample_interval / 1e-2));
  const ReducedTrajectory reference =
      integrate_limit(x0, drives, options.sample_interval / static_cast<double>(lim_stride),
                      options.t_final, static_cast<int>(lim_stride));

  SwitchParameters params;
  params.Gamma = Gamma;
  std::vector<ConvergenceRow> rows(gammas.size());
  parallel_for(gammas.size(), [&](std::size_t i) {
    const double gamma = gammas[i];
    rows[i] = with_scale(gamma, "gamma", [&] {
      Scenario s = study_scenario(ModelKind::kIntermediate, params, drives, options);
      s.gamma = gamma;
      set_grid(s.integration, std::min(1e-2, 0.05 / (Gamma + 2.0 * gamma)), options.sample_interval);
      const ReducedTrajectory run = reduce(run_scenario(s).trajectory, {"g", "h", "s"});
      return ConvergenceRow{gamma, trajectory_distance(run, reference)};
    });
  });
  return rows;
}

std::vector<ZenoRow> zeno_sweep(double gamma, double Gamma, cplx alpha_r,
                                std::span<const double> betas, double t_final) {
  if (alpha_r == cplx(0.0)) throw InvalidArgument("the RESET drive must be nonzero");
  for (double b : betas) {
    if (!std::isfinite(b) || b < 0.0) throw InvalidArgument("beta values must be >= 0");
  }
  std::vector<ZenoRow> rows(betas.size());
  parallel_for(betas.size(), [&](std::size_t i) {
    Scenario s;
    s.model = ModelKind::kIntermediate;
    s.params.Gamma = Gamma;
    s.gamma = gamma;
    s.mode = Mode::kReset;
    s.init = InitialState::kH;
    s.drives = DriveAmplitudes{betas[i], 0.0, alpha_r};
    s.integration = default_integration(ModelKind::kIntermediate);
    s.integration.t_final = t_final;
    set_grid(s.integration, std::min(1e-2, 0.05 / (Gamma + 2.0 * gamma)), 1.0);
    rows[i].beta = betas[i];
    rows[i].switch_time_90 = with_scale(betas[i], "beta", [&]() -> std::optional<double> {
      const ScenarioResult r = run_scenario(s);
      try {
        return compute_metrics(r.table, s.mode, s.drives).switch_time_90;
      } catch (const NoSwitchError&) {
        return std::nullopt;
      }
    });
  });
  return rows;
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "scale,distance\n";
  for (const auto& r : rows) os << format_number(r.scale) << ',' << format_number(r.distance) << '\n';
}

void write_zeno_csv(std::ostream& os, const std::vector<ZenoRow>& rows) {
  os << "beta,switch_time_90,status\n";
  for (const auto& r : rows) {
    os << format_number(r.beta) << ',';
    if (r.switch_time_90) os << format_number(*r.switch_time_90);
    os << ',' << (r.switch_time_90 ? "ok" : "no_switch") << '\n';
  }
}

}  // namespace cqedswitch
