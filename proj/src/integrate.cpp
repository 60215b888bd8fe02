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
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "cqedswitch/dynamics.hpp"
#include "propagator.hpp"

namespace cqedswitch {

std::string Diagnostics::summary() const {
  std::ostringstream os;
  os << "t=" << final_time << " steps=" << steps << " rhs=" << rhs_evaluations
     << " max_trace_drift=" << max_trace_drift << " max_hermiticity_defect=" << max_hermiticity_defect
     << " min_eigenvalue=" << min_eigenvalue;
  if (projection_start >= 0.0) {
    os << " projection_start=" << projection_start << " projection_dim=" << projection_dim
       << " projection_defect=" << projection_defect;
  }
  if (projection_fallback) os << " projection_fallback=1";
  if (settle_criterion > 0.0) {
    os << " last_residual=" << last_residual << " settle_criterion=" << settle_criterion
       << " t_max=" << t_max;
  }
  return os.str();
}

void IntegrationConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw InvalidArgument("t_final must be positive");
  if (record_stride < 1) throw InvalidArgument("record_stride must be >= 1");
  if (!(trace_tol > 0.0)) throw InvalidArgument("trace tolerance must be positive");
  if (!(positivity_floor <= 0.0)) throw InvalidArgument("positivity floor must be <= 0");
  if (!(hermiticity_tol > 0.0)) throw InvalidArgument("hermiticity tolerance must be positive");
  if (method == Method::kDopri5 && (!(rtol > 0.0) || !(atol > 0.0))) {
    throw InvalidArgument("Dopri5 tolerances must be positive");
  }
  if (projection.enabled) {
    if (!(projection.snapshot_interval > 0.0)) throw InvalidArgument("snapshot interval must be positive");
    if (projection.start_time < 0.0) throw InvalidArgument("projection start time must be >= 0");
    if (projection.max_basis < 3) throw InvalidArgument("projection basis must allow >= 3 vectors");
    if (!(projection.skip_tol > 0.0) || !(projection.defect_tol > 0.0)) {
      throw InvalidArgument("projection tolerances must be positive");
    }
  }
}

long IntegrationConfig::step_count() const { return std::max(1L, std::lround(t_final / dt)); }

const std::vector<cplx>& Trajectory::channel(const std::string& name) const {
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == name) return channels[k];
  }
  throw InvalidArgument("trajectory has no channel '" + name + "'");
}

bool Trajectory::has_channel(const std::string& name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

namespace detail {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA[7][6] = {
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kE[7] = {71.0 / 57600,      0,           -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

}  // namespace

Propagator::Propagator(const Liouvillian& lv, const IntegrationConfig& config, DenseMatrix rho0,
                       bool check_defect)
    : lv_(lv), cfg_(config), check_defect_(check_defect), rho_(std::move(rho0)) {
  const Index n = lv_.dim();
  const int stages = cfg_.method == Method::kDopri5 ? 7 : 4;
  k_.assign(static_cast<std::size_t>(stages), DenseMatrix(n, n));
  tmp_.resize(n, n);
  next_.resize(n, n);
  h_ = cfg_.dt;
}

const DenseMatrix& Propagator::derivative() {
  if (!deriv_valid_) {
    lv_.apply_hermitian(rho_, deriv_);
    ++diag_.rhs_evaluations;
    deriv_valid_ = true;
  }
  return deriv_;
}

void Propagator::step_rk4(double h) {
  lv_.apply_hermitian(rho_, k_[0]);
  tmp_ = rho_ + (0.5 * h) * k_[0];
  lv_.apply_hermitian(tmp_, k_[1]);
  tmp_ = rho_ + (0.5 * h) * k_[1];
  lv_.apply_hermitian(tmp_, k_[2]);
  tmp_ = rho_ + h * k_[2];
  lv_.apply_hermitian(tmp_, k_[3]);
  rho_ += (h / 6.0) * (k_[0] + 2.0 * k_[1] + 2.0 * k_[2] + k_[3]);
  diag_.rhs_evaluations += 4;
  ++diag_.steps;
}

double Propagator::try_dopri5(double h) {
  if (!fsal_valid_) {
    lv_.apply_hermitian(rho_, k_[0]);
    ++diag_.rhs_evaluations;
    fsal_valid_ = true;
  }
  for (int s = 1; s < 7; ++s) {
    tmp_ = rho_;
    for (int j = 0; j < s; ++j) {
      if (kA[s][j] != 0.0) tmp_ += (h * kA[s][j]) * k_[static_cast<std::size_t>(j)];
    }
    lv_.apply_hermitian(tmp_, k_[static_cast<std::size_t>(s)]);
    ++diag_.rhs_evaluations;
  }
  next_ = tmp_;  // stage 7 is evaluated at the fifth-order solution
  double err = 0.0;
  const Index n = rho_.rows();
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      cplx e = 0.0;
      for (int s = 0; s < 7; ++s) {
        if (kE[s] != 0.0) e += kE[s] * k_[static_cast<std::size_t>(s)](i, j);
      }
      const double scale =
          cfg_.atol + cfg_.rtol * std::max(std::abs(rho_(i, j)), std::abs(next_(i, j)));
      err = std::max(err, h * std::abs(e) / scale);
    }
  }
  return err;
}

void Propagator::advance_stepping(double t) {
  const double span = t - t_;
  if (span <= 0.0) return;
  deriv_valid_ = false;
  if (cfg_.method == Method::kRK4) {
    const long n = std::max(1L, std::lround(span / cfg_.dt));
    const double h = span / static_cast<double>(n);
    for (long s = 0; s < n; ++s) step_rk4(h);
    t_ = t;
  } else {
    while (t_ < t) {
      const double remaining = t - t_;
      const bool clipped = h_ >= remaining;
      const double h = clipped ? remaining : h_;
      if (h < 1e-14 * std::max(1.0, std::abs(t_))) {
        diag_.final_time = t_;
        throw InstabilityError("adaptive step size underflow at t=" + std::to_string(t_), diag_);
      }
      const double err = try_dopri5(h);
      const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (err <= 1.0 && std::isfinite(err)) {
        rho_.swap(next_);
        std::swap(k_[0], k_[6]);
        t_ = clipped ? t : t_ + h;
        ++diag_.steps;
        h_ = clipped ? std::max(h_, h * fac) : h * fac;
      } else {
        h_ = h * (std::isfinite(err) ? fac : 0.2);
      }
    }
  }
  if (!rho_.allFinite() || rho_.norm() > 10.0) {
    diag_.final_time = t_;
    throw InstabilityError("state norm diverged near t=" + std::to_string(t_) +
                               "; reduce dt",
                           diag_);
  }
}

double Propagator::inner(const DenseMatrix& a, const DenseMatrix& b) const {
  const Index len = 2 * a.size();
  Eigen::Map<const Eigen::VectorXd> va(reinterpret_cast<const double*>(a.data()), len);
  Eigen::Map<const Eigen::VectorXd> vb(reinterpret_cast<const double*>(b.data()), len);
  return va.dot(vb);
}

void Propagator::maybe_snapshot() {
  const auto& pc = cfg_.projection;
  if (!pc.enabled || snapshots_closed_ || projected_) return;
  if (t_ < pc.start_time - 1e-9) return;
  if (last_snapshot_ >= 0.0 && t_ - last_snapshot_ < pc.snapshot_interval - 1e-9) return;
  last_snapshot_ = t_;
  const Index n = rho_.rows();
  if (basis_.empty()) {
    // The identity direction makes the projected dynamics trace preserving.
    basis_.push_back(DenseMatrix::Identity(n, n) / std::sqrt(static_cast<double>(n)));
  }
  DenseMatrix v = rho_;
  const double norm0 = std::sqrt(inner(v, v));
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis_) v -= inner(b, v) * b;
  }
  const double rem = std::sqrt(inner(v, v));
  if (rem <= pc.skip_tol * norm0) {
    if (++skipped_ >= 2) enter_projection();
    return;
  }
  skipped_ = 0;
  if (static_cast<int>(basis_.size()) >= pc.max_basis) {
    snapshots_closed_ = true;
    basis_.clear();
    return;
  }
  basis_.push_back(v / rem);
}

void Propagator::enter_projection() {
  const int m = static_cast<int>(basis_.size());
  Hm_.resize(m, m);
  DenseMatrix image;
  for (int k = 0; k < m; ++k) {
    lv_.apply_hermitian(basis_[static_cast<std::size_t>(k)], image);
    ++diag_.rhs_evaluations;
    for (int j = 0; j < m; ++j) Hm_(j, k) = inner(basis_[static_cast<std::size_t>(j)], image);
  }
  y_.resize(m);
  for (int j = 0; j < m; ++j) y_(j) = inner(basis_[static_cast<std::size_t>(j)], rho_);
  rho_.setZero();
  for (int j = 0; j < m; ++j) rho_ += y_(j) * basis_[static_cast<std::size_t>(j)];
  deriv_valid_ = false;
  const Eigen::VectorXd hy = Hm_ * y_;
  DenseMatrix r = derivative();
  for (int j = 0; j < m; ++j) r -= hy(j) * basis_[static_cast<std::size_t>(j)];
  last_defect_ = r.norm();
  projected_ = true;
  diag_.projection_start = t_;
  diag_.projection_dim = m;
}

void Propagator::advance_projected(double t) {
  const double span = t - t_;
  if (span <= 0.0) return;
  const long long key = std::llround(span * 1e12);
  auto it = propagators_.find(key);
  if (it == propagators_.end()) {
    Eigen::MatrixXd scaled = Hm_ * span;
    it = propagators_.emplace(key, scaled.exp()).first;
  }
  const Eigen::VectorXd y = it->second * y_;
  const int m = static_cast<int>(basis_.size());
  DenseMatrix candidate = DenseMatrix::Zero(rho_.rows(), rho_.cols());
  for (int j = 0; j < m; ++j) candidate += y(j) * basis_[static_cast<std::size_t>(j)];
  DenseMatrix image;
  lv_.apply_hermitian(candidate, image);
  ++diag_.rhs_evaluations;
  const Eigen::VectorXd hy = Hm_ * y;
  DenseMatrix r = image;
  for (int j = 0; j < m; ++j) r -= hy(j) * basis_[static_cast<std::size_t>(j)];
  const double defect = r.norm();
  // ||e||_1 <= sqrt(dim) ||e||_F and the dynamics is trace-norm contractive.
  const double bound = defect_bound_ + span * std::max(defect, last_defect_) *
                                           std::sqrt(static_cast<double>(rho_.rows()));
  if (check_defect_ && !(bound <= cfg_.projection.defect_tol)) {
    projected_ = false;
    snapshots_closed_ = true;
    diag_.projection_fallback = true;
    fsal_valid_ = false;
    advance_stepping(t);
    return;
  }
  defect_bound_ = bound;
  diag_.projection_defect = bound;
  last_defect_ = defect;
  y_ = y;
  rho_.swap(candidate);
  deriv_.swap(image);
  deriv_valid_ = true;
  t_ = t;
  if (!rho_.allFinite() || rho_.norm() > 10.0) {
    diag_.final_time = t_;
    throw InstabilityError("projected state diverged near t=" + std::to_string(t_), diag_);
  }
}

void Propagator::advance_to(double t) {
  if (projected_) {
    advance_projected(t);
  } else {
    advance_stepping(t);
    maybe_snapshot();
  }
  diag_.final_time = t_;
}

void check_health(const DenseMatrix& rho, double t, const IntegrationConfig& cfg, Diagnostics& diag) {
  const DensityMatrix::Health h = DensityMatrix::health(rho);
  diag.max_trace_drift = std::max(diag.max_trace_drift, h.trace_error);
  diag.max_hermiticity_defect = std::max(diag.max_hermiticity_defect, h.hermiticity_defect);
  diag.min_eigenvalue = std::min(diag.min_eigenvalue, h.min_eigenvalue);
  const auto at = " at t=" + std::to_string(t);
  if (!(h.trace_error <= cfg.trace_tol)) {
    throw IntegrationError("trace drift " + std::to_string(h.trace_error) + at, diag);
  }
  if (!(h.hermiticity_defect <= cfg.hermiticity_tol)) {
    throw IntegrationError("hermiticity defect " + std::to_string(h.hermiticity_defect) + at, diag);
  }
  if (!(h.min_eigenvalue >= cfg.positivity_floor)) {
    throw IntegrationError("negative eigenvalue " + std::to_string(h.min_eigenvalue) + at, diag);
  }
}

DenseMatrix hermitian_part(const DenseMatrix& m) {
  DenseMatrix out = m;
  const Index n = m.rows();
  for (Index j = 0; j < n; ++j) {
    out(j, j) = m(j, j).real();
    for (Index i = j + 1; i < n; ++i) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  }
  return out;
}

}  // namespace detail

Trajectory integrate(const Generator& g, const DensityMatrix& rho0, const IntegrationConfig& config,
                     const ObservableList& observables) {
  config.validate();
  if (!(rho0.space() == g.H.space())) {
    throw SpaceMismatch("initial state lives on " + rho0.space().describe() + ", model on " +
                        g.H.space().describe());
  }
  const HilbertSpace& space = rho0.space();
  for (const auto& [name, op] : observables) {
    if (!(op.space() == space)) throw SpaceMismatch("observable '" + name + "' is on another space");
  }
  std::vector<std::string> keep;
  if (!config.reduced_factor.empty()) {
    space.position(config.reduced_factor);  // validates the label
    keep.push_back(config.reduced_factor);
  }
  std::vector<Operator> top_levels;
  if (config.truncation_check) {
    for (const auto& f : space.factors()) {
      if (f.label == factor::atom) continue;
      top_levels.push_back(embed(transition(f.dim, f.dim - 1, f.dim - 1, f.label), f.label, space));
    }
  }

  const Liouvillian lv(g);
  detail::Propagator prop(lv, config, detail::hermitian_part(rho0.matrix()));

  Trajectory traj;
  for (const auto& [name, op] : observables) traj.names.push_back(name);
  traj.channels.resize(observables.size());

  auto record = [&](double t) {
    const DenseMatrix& rho = prop.state();
    detail::check_health(rho, t, config, prop.diagnostics());
    traj.times.push_back(t);
    for (std::size_t k = 0; k < observables.size(); ++k) {
      traj.channels[k].push_back(trace_product(rho, observables[k].second));
    }
    if (!keep.empty()) traj.reduced_states.push_back(partial_trace(rho, space, keep));
    for (const auto& p : top_levels) {
      traj.max_top_fock_population =
          std::max(traj.max_top_fock_population, trace_product(rho, p).real());
    }
  };

  const long steps = config.step_count();
  const long stride = config.record_stride;
  record(0.0);
  for (long s = stride; s < steps + stride; s += stride) {
    const long at = std::min(s, steps);
    const double t = static_cast<double>(at) * config.dt;
    prop.advance_to(t);
    record(t);
  }
  traj.diagnostics = prop.diagnostics();
  traj.final_state.emplace(space, prop.state());
  return traj;
}

Trajectory integrate(const SLHModel& g, const DensityMatrix& rho0, const IntegrationConfig& config,
                     const ObservableList& observables) {
  return integrate(generator(g), rho0, config, observables);
}

ReducedTrajectory reduce(const Trajectory& t, std::vector<std::string> levels) {
  if (t.reduced_states.size() != t.times.size()) {
    throw InvalidArgument("trajectory did not record reduced states");
  }
  for (const auto& s : t.reduced_states) {
    if (s.rows() != static_cast<Index>(levels.size())) {
      throw InvalidArgument("reduced state dimension does not match the level list");
    }
  }
  return ReducedTrajectory{t.times, t.reduced_states, std::move(levels)};
}

double trajectory_distance(const ReducedTrajectory& a, const ReducedTrajectory& b) {
  if (a.times.empty() || b.times.empty()) throw InvalidArgument("empty trajectory");
  if (a.states.size() != a.times.size() || b.states.size() != b.times.size()) {
    throw InvalidArgument("trajectory states and times differ in length");
  }
  std::vector<Index> ia, ib;
  for (std::size_t i = 0; i < a.levels.size(); ++i) {
    const auto it = std::find(b.levels.begin(), b.levels.end(), a.levels[i]);
    if (it != b.levels.end()) {
      ia.push_back(static_cast<Index>(i));
      ib.push_back(static_cast<Index>(it - b.levels.begin()));
    }
  }
  if (ia.size() < 2) throw InvalidArgument("trajectories share fewer than two levels");
  const Index m = static_cast<Index>(ia.size());
  double worst = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    while (j + 1 < b.times.size() && b.times[j + 1] <= a.times[i] + 1e-9) ++j;
    DenseMatrix d(m, m);
    for (Index r = 0; r < m; ++r) {
      for (Index c = 0; c < m; ++c) d(r, c) = a.states[i](ia[r], ia[c]) - b.states[j](ib[r], ib[c]);
    }
    const DenseMatrix herm = 0.5 * (d + d.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(herm, Eigen::EigenvaluesOnly);
    worst = std::max(worst, 0.5 * es.eigenvalues().cwiseAbs().sum());
  }
  return worst;
}

ReducedTrajectory integrate_limit(const LimitState& x0, const DriveAmplitudes& d, double dt,
                                  double t_final, int record_stride) {
  x0.validate();
  if (!(dt > 0.0) || !(t_final > 0.0) || record_stride < 1) {
    throw InvalidArgument("limit integration needs dt > 0, t_final > 0 and stride >= 1");
  }
  const long steps = std::max(1L, std::lround(t_final / dt));
  ReducedTrajectory out;
  out.levels = {"g", "h"};
  LimitState x = x0;
  out.times.push_back(0.0);
  out.states.push_back(x.matrix());
  auto add = [](const LimitState& s, const LimitDerivative& k, double h) {
    return LimitState{s.rho_gg + h * k.d_gg, s.rho_hg + h * k.d_hg};
  };
  for (long s = 1; s <= steps; ++s) {
    const LimitDerivative k1 = limit_rhs(x, d);
    const LimitDerivative k2 = limit_rhs(add(x, k1, 0.5 * dt), d);
    const LimitDerivative k3 = limit_rhs(add(x, k2, 0.5 * dt), d);
    const LimitDerivative k4 = limit_rhs(add(x, k3, dt), d);
    x.rho_gg += dt / 6.0 * (k1.d_gg + 2.0 * k2.d_gg + 2.0 * k3.d_gg + k4.d_gg);
    x.rho_hg += dt / 6.0 * (k1.d_hg + 2.0 * k2.d_hg + 2.0 * k3.d_hg + k4.d_hg);
    if (s % record_stride == 0 || s == steps) {
      out.times.push_back(static_cast<double>(s) * dt);
      out.states.push_back(x.matrix());
    }
  }
  return out;
}

}  // namespace cqedswitch
