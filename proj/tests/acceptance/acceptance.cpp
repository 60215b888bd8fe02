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

// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed
// here; the process exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cqedswitch/bench.hpp"

namespace {

using namespace cqedswitch;

const cplx kI(0.0, 1.0);

// Worst integrator health over every run made by the suite.
struct HealthLedger {
  double trace_drift = 0.0;
  double hermiticity = 0.0;
  double min_eigenvalue = 1.0;
  int runs = 0;
  void add(const Diagnostics& d) {
    trace_drift = std::max(trace_drift, d.max_trace_drift);
    hermiticity = std::max(hermiticity, d.max_hermiticity_defect);
    min_eigenvalue = std::min(min_eigenvalue, d.min_eigenvalue);
    ++runs;
  }
};

HealthLedger g_health;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

ScenarioResult run(const Scenario& s) {
  ScenarioResult r = run_scenario(s);
  g_health.add(r.trajectory.diagnostics);
  return r;
}

Scenario fig2(Mode mode, InitialState init) {
  return Scenario::from_preset("paper-fig2", ModelKind::kPrimary, mode, init);
}

// Largest change of any recorded channel, relative to that channel's scale.
double relative_change(const RunTable& a, const RunTable& b) {
  if (a.rows.size() != b.rows.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t c = 1; c < kCsvColumns.size(); ++c) {
    if (!a.present[c] || !b.present[c]) continue;
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      diff = std::max(diff, std::abs(a.rows[i][c] - b.rows[i][c]));
      scale = std::max(scale, std::abs(a.rows[i][c]));
    }
    if (scale > 0.0) worst = std::max(worst, diff / scale);
  }
  return worst;
}

// The scenario runs shared by several criteria, computed once.
struct Fig2Runs {
  ScenarioResult set_g, set_h, reset_h, reset_g;
};

const Fig2Runs& fig2_runs() {
  static const Fig2Runs runs = [] {
    Fig2Runs r;
    r.set_g = run(fig2(Mode::kSet, InitialState::kG));
    r.set_h = run(fig2(Mode::kSet, InitialState::kH));
    r.reset_h = run(fig2(Mode::kReset, InitialState::kH));
    r.reset_g = run(fig2(Mode::kReset, InitialState::kG));
    return r;
  }();
  return runs;
}

// 1. Driven two-port empty cavity against the linear input-output solution.
Outcome empty_cavity() {
  const double kappa = 50.0;
  const cplx beta = 0.5;
  const HilbertSpace space = HilbertSpace::single("mode", 6);
  const Operator a = annihilation(6, "mode");
  const Operator l = std::sqrt(kappa) * a;
  const SLHModel cavity(space, {Operator::identity(space), Operator::zero(space), Operator::zero(space),
                                Operator::identity(space)},
                        {l, l}, Operator::zero(space));
  const SLHModel driven = displace(cavity, {beta, 0.0});
  SteadyStateConfig cfg;
  cfg.integration.t_final = 1.0;
  cfg.integration.record_stride = 50;
  const SteadyStateResult ss = steady_state(driven, DensityMatrix::basis_state(space, 0), cfg);
  g_health.add(ss.diagnostics);
  const auto out = output_amplitudes(driven, ss.state);  // port 0 reflected, port 1 transmitted
  const double t_err = std::abs(out[1] + beta) / std::abs(beta);
  const double r_err = std::abs(out[0]) / std::abs(beta);
  const cplx exact = std::sqrt(kappa) * expectation(steady_state_exact(generator(driven)), a);
  const double x_err = std::abs(exact + beta) / std::abs(beta);
  return {t_err < 1e-4 && r_err < 1e-4 && x_err < 1e-4,
          "transmitted rel err " + fmt("%.2e", t_err) + ", reflected/|beta| " + fmt("%.2e", r_err) +
              ", exact-solve rel err " + fmt("%.2e", x_err)};
}

// 2. Qualitative switching behaviour at the paper-fig2 operating point.
Outcome fig2_reproduction() {
  const Fig2Runs& r = fig2_runs();
  const auto set_g = r.set_g.table.column("norm_amp");
  const auto set_h = r.set_h.table.column("norm_amp");
  const auto reset_h = r.reset_h.table.column("norm_amp");
  const auto t = r.set_h.table.column("t");
  // Every run starts with empty cavities, so norm_amp is 0 at t=0 regardless
  // of the relay state. States are read from the first sample with t >= 1,
  // after the cavity fill-in transient.
  std::size_t first = 0;
  while (first < t.size() && t[first] < 1.0) ++first;
  if (first >= t.size()) return {false, "trajectory shorter than the fill-in transient"};
  const double set_h_min = *std::min_element(set_h.begin() + static_cast<std::ptrdiff_t>(first), set_h.end());
  const bool ok = set_g[first] < 0.15 && set_g.back() > 0.95 && set_h_min >= 0.95 && reset_h[first] > 0.95 &&
                  reset_h.back() < 0.15;
  return {ok, "SET|g: " + fmt("%.3f", set_g[first]) + " -> " + fmt("%.3f", set_g.back()) +
                  "; SET|h min(t>=1) " + fmt("%.3f", set_h_min) + "; RESET|h: " + fmt("%.3f", reset_h[first]) +
                  " -> " + fmt("%.3f", reset_h.back())};
}

// 3. Output power ratio with the relay held near |g> by the RESET drive.
Outcome contrast() {
  const Fig2Runs& r = fig2_runs();
  const Metrics m = compute_metrics(r.reset_g.table, Mode::kReset, fig2(Mode::kReset, InitialState::kG).drives);
  const double pop_g = r.reset_g.table.column("pop_g").back();
  return {std::abs(m.contrast_ratio / 66.0 - 1.0) <= 0.2,
          "contrast " + fmt("%.2f", m.contrast_ratio) + " (target 66 +/- 20%), pop_g " + fmt("%.3f", pop_g)};
}

// 4. Switching time, photon cost and energy of SET from |g>.
Outcome switching_cost() {
  const Fig2Runs& r = fig2_runs();
  const DriveAmplitudes d = fig2(Mode::kSet, InitialState::kG).drives;
  const Metrics m = compute_metrics(r.set_g.table, Mode::kSet, d, 1000.0);
  const double t90 = *m.switch_time_90, photons = *m.photon_cost, aj = *m.energy * 1e18;
  const bool ok = t90 >= 150.0 && t90 <= 450.0 && photons >= 4.0 && photons <= 16.0 && aj >= 0.8 && aj <= 3.2 &&
                  m.power_gain.value() == std::norm(d.beta) / std::norm(d.alpha_s) &&
                  std::abs(m.power_gain.value() - 10.0) < 1e-12;
  return {ok, "t90 " + fmt("%.1f", t90) + ", photons " + fmt("%.2f", photons) + ", energy " + fmt("%.3f", aj) +
                  " aJ, gain " + fmt("%.3f", m.power_gain.value())};
}

// 5. Limit ODE integrated to equilibrium against the closed form.
Outcome limit_equilibrium_check() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> mag(0.3, 1.0), phase(0.0, 2.0 * M_PI);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const DriveAmplitudes d{std::polar(mag(rng), phase(rng)), std::polar(mag(rng), phase(rng)),
                            std::polar(mag(rng), phase(rng))};
    const ReducedTrajectory t = integrate_limit({1.0, 0.0}, d, 1e-2, 600.0, 60000);
    const LimitState x = LimitState::from_matrix(t.states.back());
    const LimitState e = limit_equilibrium(d);
    worst = std::max({worst, std::abs(x.rho_gg - e.rho_gg), std::abs(x.rho_hg - e.rho_hg)});
  }
  const double a = 0.4;
  const ReducedTrajectory race = integrate_limit({1.0, 0.0}, {0.0, a, a}, 1e-2, 600.0, 60000);
  const LimitState x = LimitState::from_matrix(race.states.back());
  const double race_err = std::max(std::abs(x.rho_gg - 0.5), std::abs(x.rho_hg + 0.5));
  return {worst < 1e-8 && race_err < 1e-8,
          "max element error " + fmt("%.2e", worst) + " over 20 drives; race error " + fmt("%.2e", race_err)};
}

// 6. Distances to the reduced models shrink as the scaling parameters grow.
Outcome limit_convergence() {
  const Preset p = preset("paper-fig2");
  const DriveAmplitudes d{p.beta, p.alpha, 0.0};
  const std::vector<double> ks{1.0, 1.5, 2.0}, gammas{2.0, 8.0, 32.0};
  const auto krows = k_study(p.params, d, ks);
  const auto grows = gamma_study(p.params.Gamma, d, gammas);
  auto decreasing = [](const std::vector<ConvergenceRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (!(rows[i].distance < rows[i - 1].distance)) return false;
    return true;
  };
  std::string detail = "k:";
  for (const auto& r : krows) detail += " " + fmt("%.4g", r.distance);
  detail += "; gamma:";
  for (const auto& r : grows) detail += " " + fmt("%.4g", r.distance);
  return {decreasing(krows) && decreasing(grows), detail};
}

// 7. Integrator health over every run plus step-halving and truncation checks.
Outcome conservation() {
  const Fig2Runs& r = fig2_runs();
  Scenario halved = fig2(Mode::kSet, InitialState::kG);
  halved.integration.dt /= 2.0;
  halved.integration.record_stride *= 2;
  const double step_change = relative_change(r.set_g.table, run(halved).table);

  Scenario bigger = fig2(Mode::kSet, InitialState::kG);
  bigger.params.trunc_p = bigger.params.trunc_s = bigger.params.trunc_r = 4;
  const double trunc_change = relative_change(r.set_g.table, run(bigger).table);

  const bool ok = g_health.trace_drift < 1e-8 && g_health.hermiticity < 1e-10 && g_health.min_eigenvalue > -1e-8 &&
                  step_change < 1e-5 && trunc_change < 1e-4;
  return {ok, std::to_string(g_health.runs) + " runs: trace drift " + fmt("%.1e", g_health.trace_drift) +
                  ", hermiticity " + fmt("%.1e", g_health.hermiticity) + ", min eig " +
                  fmt("%.1e", g_health.min_eigenvalue) + "; step halving " + fmt("%.1e", step_change) +
                  ", truncation 3->4 " + fmt("%.1e", trunc_change)};
}

// 8. Composition algebra on random small models and the intermediate generator.
Outcome algebra() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> dims(2, 4), ports(1, 3);
  auto rand_matrix = [&](Index n) {
    DenseMatrix m(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) m(i, j) = cplx(u(rng), u(rng));
    return m;
  };
  auto rand_model = [&](const HilbertSpace& space, int n) {
    const Index d = space.total_dim();
    Eigen::HouseholderQR<DenseMatrix> qr(rand_matrix(n * d));
    const DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(n * d, n * d);
    std::vector<Operator> S, L;
    for (int i = 0; i < n; ++i) {
      L.emplace_back(space, DenseMatrix(0.5 * rand_matrix(d)));
      for (int j = 0; j < n; ++j) S.emplace_back(space, DenseMatrix(q.block(i * d, j * d, d, d)));
    }
    const DenseMatrix h = rand_matrix(d);
    return SLHModel(space, S, L, Operator(space, DenseMatrix(0.5 * (h + h.adjoint()))));
  };
  auto diff = [](const SLHModel& a, const SLHModel& b) {
    double w = max_abs_diff(a.H(), b.H());
    for (int i = 0; i < a.n_ports(); ++i) {
      w = std::max(w, max_abs_diff(a.L(i), b.L(i)));
      for (int j = 0; j < a.n_ports(); ++j) w = std::max(w, max_abs_diff(a.S(i, j), b.S(i, j)));
    }
    return w;
  };

  double assoc = 0.0, unitarity = 0.0, displace_l = 0.0, displace_h = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const HilbertSpace space = HilbertSpace::single("q", dims(rng));
    const int n = ports(rng);
    const SLHModel g1 = rand_model(space, n), g2 = rand_model(space, n), g3 = rand_model(space, n);
    assoc = std::max(assoc, diff(series(g3, series(g2, g1)), series(series(g3, g2), g1)));
    unitarity = std::max(unitarity, series(g2, g1).unitarity_defect());
    DriveVector d(static_cast<std::size_t>(n));
    for (auto& x : d) x = cplx(u(rng), u(rng));
    const SLHModel a = series(g1, SLHModel::source(space, d)), b = displace(g1, d);
    for (int i = 0; i < n; ++i) displace_l = std::max(displace_l, max_abs_diff(a.L(i), b.L(i)));
    const DenseMatrix dh = (a.H() - b.H()).to_dense();
    displace_h = std::max(displace_h, (dh - dh(0, 0).real() * DenseMatrix::Identity(dh.rows(), dh.cols()))
                                          .cwiseAbs()
                                          .maxCoeff());
  }

  // Intermediate generator versus (i) displacing the SLH model and (ii) the
  // hand-written Hamiltonian and jump operators, written in the basis with
  // |s> -> -|s> in which the displaced drive term takes the +i sqrt(gamma) form.
  double cross = 0.0, literal = 0.0;
  const HilbertSpace space3 = intermediate_space();
  DenseMatrix U = DenseMatrix::Identity(3, 3);
  U(2, 2) = -1.0;
  auto unit = [](int r, int c) {
    DenseMatrix m = DenseMatrix::Zero(3, 3);
    m(r, c) = 1.0;
    return m;
  };
  const DenseMatrix s_gs = unit(0, 2), s_hs = unit(1, 2), pi_g = unit(0, 0), pi_hs = unit(1, 1) + unit(2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const double gamma = 0.5 + 4.0 * (u(rng) + 1.0), Gamma = 0.5 * (u(rng) + 1.0);
    const DriveAmplitudes d{cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
    const Generator gen = displaced_intermediate_generator(gamma, Gamma, d);
    const Generator ref =
        generator(displace(build_intermediate(gamma, Gamma), drive_vector(ModelKind::kIntermediate, d)));
    const DenseMatrix h_lit =
        kI * std::sqrt(gamma) * (d.alpha_s * s_gs.adjoint() - std::conj(d.alpha_s) * s_gs) +
        kI * std::sqrt(gamma) * (d.alpha_r * s_hs.adjoint() - std::conj(d.alpha_r) * s_hs);
    const double c = std::sqrt(Gamma + 2.0 * gamma);
    const std::vector<Operator> l_lit{Operator(space3, DenseMatrix(c * s_gs)), Operator(space3, DenseMatrix(c * s_hs)),
                                      Operator(space3, DenseMatrix(d.beta * pi_g)),
                                      Operator(space3, DenseMatrix(d.beta * pi_hs))};
    const Operator H_lit(space3, h_lit);
    DenseMatrix m = rand_matrix(3);
    DenseMatrix rho = m * m.adjoint();
    rho /= rho.trace();
    rho = 0.5 * (rho + rho.adjoint());
    const DensityMatrix state(space3, rho), rotated(space3, DenseMatrix(U * rho * U));
    const DenseMatrix ours = lindblad_rhs(state, gen.H, gen.L);
    cross = std::max(cross, (ours - lindblad_rhs(state, ref.H, ref.L)).cwiseAbs().maxCoeff());
    literal = std::max(literal, (U * ours * U - lindblad_rhs(rotated, H_lit, l_lit)).cwiseAbs().maxCoeff());
  }
  const bool ok = assoc < 1e-10 && unitarity < 1e-9 && displace_l < 1e-10 && displace_h < 1e-10 &&
                  cross < 1e-10 && literal < 1e-10;
  return {ok, "assoc " + fmt("%.1e", assoc) + ", unitarity " + fmt("%.1e", unitarity) + ", displace L " +
                  fmt("%.1e", displace_l) + " H " + fmt("%.1e", displace_h) + ", generator vs displaced " +
                  fmt("%.1e", cross) + ", vs hand-built " + fmt("%.1e", literal)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  // Criterion 7 aggregates the health of all runs, so it goes last.
  const std::vector<Criterion> criteria{
      {1, "empty-cavity oracle", empty_cavity},
      {2, "switching behaviour", fig2_reproduction},
      {3, "contrast ratio", contrast},
      {4, "switching cost", switching_cost},
      {5, "limit-model equilibrium", limit_equilibrium_check},
      {6, "limit convergence", limit_convergence},
      {8, "composition algebra", algebra},
      {7, "conservation", conservation},
  };
  std::vector<std::pair<int, std::string>> lines;
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && o.pass;
    lines.emplace_back(c.id, std::string(o.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(c.id) + " (" +
                                 c.name + "): " + o.detail + " [" + fmt("%.1f", secs) + " s]");
    std::fprintf(stderr, "%s\n", lines.back().second.c_str());
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [id, text] : lines) std::printf("%s\n", text.c_str());
  return all ? 0 : 1;
}
