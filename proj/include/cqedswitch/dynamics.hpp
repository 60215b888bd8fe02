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

// Lindblad master equation
//
//   d rho / dt = -i [H, rho] + sum_k (L_k rho L_k^dag - {L_k^dag L_k, rho} / 2)
//
// applied in direct form (sparse operators against a dense rho), explicit
// time integration with observable recording, and steady states.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqedswitch/models.hpp"
#include "cqedswitch/slh.hpp"

namespace cqedswitch {

/// Precompiled Lindblad right-hand side.
///
/// Every jump operator is split as L = A + c I with a constant diagonal c; the
/// c part becomes the Hamiltonian term i (c^* A - c A^dag) / 2 and channels
/// whose A are proportional are merged. Jump operators with at most one
/// nonzero per row are applied by index gathering; all others by sparse
/// products.
class Liouvillian {
 public:
  Liouvillian(const Operator& H, std::span<const Operator> L);
  explicit Liouvillian(const Generator& g) : Liouvillian(g.H, g.L) {}

  const HilbertSpace& space() const noexcept { return space_; }
  Index dim() const noexcept { return space_.total_dim(); }
  /// Number of merged dissipative channels.
  std::size_t channel_count() const noexcept { return channels_.size(); }

  /// out = L(rho) for an arbitrary square rho.
  void apply(const DenseMatrix& rho, DenseMatrix& out) const;
  /// out = L(rho) assuming rho is exactly Hermitian; the result is exactly
  /// Hermitian. About twice as fast as apply().
  void apply_hermitian(const DenseMatrix& rho, DenseMatrix& out) const;

  /// Column-major vectorized generator (dim^2 x dim^2). Throws
  /// InvalidArgument above kMaxSuperoperatorDim.
  DenseMatrix superoperator() const;
  static constexpr Index kMaxSuperoperatorDim = 32;

 private:
  struct Channel {
    double weight = 0.0;       // merged |lambda|^2
    bool monomial = false;     // at most one nonzero per row
    std::vector<Index> rows;   // monomial: rows holding a nonzero
    std::vector<Index> cols;   //           its column
    std::vector<cplx> values;  //           its value
    SparseMatrix A;            // general channels
  };

  void add_sandwich(const Channel& ch, const DenseMatrix& rho, DenseMatrix& out, double scale,
                    bool hermitian) const;

  HilbertSpace space_;
  SparseMatrix K_;  // -i H_eff - (1/2) sum_k w_k A_k^dag A_k
  std::vector<Channel> channels_;
};

/// Reference right-hand side on a validated state.
DenseMatrix lindblad_rhs(const DensityMatrix& rho, const Operator& H, std::span<const Operator> L);

enum class Method {
  kRK4,     // classical fixed-step fourth order
  kDopri5,  // Dormand-Prince 5(4) with step-size control
};

/// Subspace-projected propagation for long runs.
///
/// After `start_time`, snapshots of rho are orthonormalised (real inner
/// product Re tr(A^dag B), so the basis stays Hermitian) every
/// `snapshot_interval`. Once two consecutive snapshots add nothing beyond
/// `skip_tol`, the generator is projected on the basis and propagated exactly
/// by a matrix exponential. The residual of the projected solution is checked
/// at every sample; its accumulated trace-norm bound must stay below
/// `defect_tol`, otherwise the run falls back to the time stepper.
struct ProjectionConfig {
  bool enabled = false;
  double start_time = 10.0;
  double snapshot_interval = 2.0;
  int max_basis = 40;
  double skip_tol = 1e-11;
  double defect_tol = 1e-8;
};

struct IntegrationConfig {
  Method method = Method::kRK4;
  double dt = 2e-3;          // RK4 step; initial step for Dopri5
  double t_final = 600.0;
  int record_stride = 500;   // steps of dt between samples
  double trace_tol = 1e-8;   // allowed |tr rho - 1|
  double positivity_floor = -1e-8;
  double hermiticity_tol = 1e-10;
  double rtol = 1e-9;        // Dopri5 only
  double atol = 1e-11;       // Dopri5 only
  /// Record the population of the top Fock level of every non-atomic factor.
  bool truncation_check = false;
  /// Record the reduced state of this factor at every sample (empty: off).
  std::string reduced_factor;
  ProjectionConfig projection;

  void validate() const;
  /// Number of steps of size dt covering t_final (t_final / dt rounded).
  long step_count() const;
};

/// Named operators whose expectations are recorded, in output order.
using ObservableList = std::vector<std::pair<std::string, Operator>>;

struct Trajectory {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<cplx>> channels;  // channels[k][sample]
  std::vector<DenseMatrix> reduced_states;  // when requested
  std::optional<DensityMatrix> final_state;
  Diagnostics diagnostics;
  double max_top_fock_population = 0.0;     // when requested

  /// Samples of a named channel; throws InvalidArgument if absent.
  const std::vector<cplx>& channel(const std::string& name) const;
  bool has_channel(const std::string& name) const;
};

/// Integrates the master equation generated by `g` (drives already applied)
/// from rho0. Throws IntegrationError on a tolerance breach and
/// InstabilityError on divergence; both carry the diagnostics.
Trajectory integrate(const SLHModel& g, const DensityMatrix& rho0, const IntegrationConfig& config,
                     const ObservableList& observables = {});
Trajectory integrate(const Generator& g, const DensityMatrix& rho0, const IntegrationConfig& config,
                     const ObservableList& observables = {});

struct SteadyStateConfig {
  /// Settled once ||L(rho)||_F <= residual_tol; 0 selects 1e-9 * dim.
  double residual_tol = 0.0;
  /// Give up at this time; 0 selects 10 * integration.t_final.
  double t_max = 0.0;
  IntegrationConfig integration;
};

struct SteadyStateResult {
  DensityMatrix state;
  Diagnostics diagnostics;
};

/// Integrates until the generator residual settles. Throws SteadyStateTimeout
/// carrying the last residual.
SteadyStateResult steady_state(const Generator& g, const DensityMatrix& rho0,
                               const SteadyStateConfig& config = {});
SteadyStateResult steady_state(const SLHModel& g, const DensityMatrix& rho0,
                               const SteadyStateConfig& config = {});

/// Unique stationary state from the kernel of the vectorized generator
/// (dim <= 16). Throws InvalidArgument for larger spaces and
/// NoUniqueEquilibrium when the kernel is degenerate.
DensityMatrix steady_state_exact(const Generator& g);
inline constexpr Index kExactSteadyStateMaxDim = 16;

/// Reduced atomic states on a common time grid.
struct ReducedTrajectory {
  std::vector<double> times;
  std::vector<DenseMatrix> states;
  std::vector<std::string> levels;  // basis labels, e.g. {"g","h","e","s"}
};

/// Builds a ReducedTrajectory from a run that recorded reduced states.
ReducedTrajectory reduce(const Trajectory& t, std::vector<std::string> levels);

/// Largest trace distance (1/2)||A - B||_1 over A's time grid, after
/// projecting both onto their shared levels and sampling B at its latest
/// time not after each of A's (earliest sample if none). Throws
/// InvalidArgument when fewer than two levels are shared.
double trajectory_distance(const ReducedTrajectory& a, const ReducedTrajectory& b);

/// Integrates the limit-model equations with RK4 at step dt, sampling every
/// `record_stride` steps.
ReducedTrajectory integrate_limit(const LimitState& x0, const DriveAmplitudes& d, double dt,
                                  double t_final, int record_stride);

}  // namespace cqedswitch
