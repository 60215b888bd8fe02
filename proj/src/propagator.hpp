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

// Internal: sample-to-sample propagation shared by integrate() and
// steady_state().

#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "cqedswitch/dynamics.hpp"

namespace cqedswitch::detail {

class Propagator {
 public:
  /// `rho0` must be exactly Hermitian. When `check_defect` is false the
  /// projected phase never falls back (callers verify the result directly).
  Propagator(const Liouvillian& lv, const IntegrationConfig& config, DenseMatrix rho0,
             bool check_defect = true);

  /// Advances to time `t` (>= time()). Snapshots for the projected phase are
  /// taken only at these boundaries.
  void advance_to(double t);

  double time() const noexcept { return t_; }
  const DenseMatrix& state() const noexcept { return rho_; }
  /// L(rho) at the current state.
  const DenseMatrix& derivative();
  bool projected() const noexcept { return projected_; }

  Diagnostics& diagnostics() noexcept { return diag_; }

 private:
  void step_rk4(double h);
  /// One attempted Dopri5 step; returns the scaled error norm.
  double try_dopri5(double h);
  void advance_stepping(double t);
  void advance_projected(double t);
  void maybe_snapshot();
  void enter_projection();
  double inner(const DenseMatrix& a, const DenseMatrix& b) const;

  const Liouvillian& lv_;
  IntegrationConfig cfg_;
  bool check_defect_;
  DenseMatrix rho_;
  double t_ = 0.0;
  Diagnostics diag_;

  // Time-stepping buffers.
  std::vector<DenseMatrix> k_;
  DenseMatrix tmp_, next_;
  double h_ = 0.0;          // Dopri5 step proposal
  bool fsal_valid_ = false;  // k_[0] holds L(rho_)

  DenseMatrix deriv_;
  bool deriv_valid_ = false;

  // Projected phase.
  std::vector<DenseMatrix> basis_;
  int skipped_ = 0;
  double last_snapshot_ = -1.0;
  bool snapshots_closed_ = false;
  bool projected_ = false;
  Eigen::MatrixXd Hm_;
  Eigen::VectorXd y_;
  std::map<long long, Eigen::MatrixXd> propagators_;  // keyed by span in 1e-12 units
  double defect_bound_ = 0.0;
  double last_defect_ = 0.0;
};

/// Records state health into `diag`; throws IntegrationError on a breach.
void check_health(const DenseMatrix& rho, double t, const IntegrationConfig& cfg, Diagnostics& diag);

/// (m + m^dag) / 2 with an exactly real diagonal.
DenseMatrix hermitian_part(const DenseMatrix& m);

}  // namespace cqedswitch::detail
