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

#include <Eigen/SVD>

#include "cqedswitch/dynamics.hpp"
#include "propagator.hpp"

namespace cqedswitch {

SteadyStateResult steady_state(const Generator& g, const DensityMatrix& rho0,
                               const SteadyStateConfig& config) {
  const IntegrationConfig& ic = config.integration;
  ic.validate();
  if (!(rho0.space() == g.H.space())) {
    throw SpaceMismatch("initial state lives on " + rho0.space().describe() + ", model on " +
                        g.H.space().describe());
  }
  const double tol = config.residual_tol > 0.0
                         ? config.residual_tol
                         : 1e-9 * static_cast<double>(rho0.space().total_dim());
  const double t_max = config.t_max > 0.0 ? config.t_max : 10.0 * ic.t_final;

  const Liouvillian lv(g);
  // The settle test below checks the residual of the returned state directly,
  // so a projected phase may run without its own defect bound.
  detail::Propagator prop(lv, ic, detail::hermitian_part(rho0.matrix()), false);
  Diagnostics& diag = prop.diagnostics();
  diag.settle_criterion = tol;
  diag.t_max = t_max;

  const double interval = ic.dt * static_cast<double>(ic.record_stride);
  for (long k = 0;; ++k) {
    const double t = std::min(static_cast<double>(k) * interval, t_max);
    prop.advance_to(t);
    detail::check_health(prop.state(), t, ic, diag);
    diag.last_residual = prop.derivative().norm();
    if (diag.last_residual <= tol) {
      return SteadyStateResult{DensityMatrix(rho0.space(), prop.state()), diag};
    }
    if (t >= t_max) {
      throw SteadyStateTimeout("steady state not reached by t_max=" + std::to_string(t_max) +
                                   " (last residual " + std::to_string(diag.last_residual) +
                                   ", criterion " + std::to_string(tol) + ")",
                               diag);
    }
  }
}

SteadyStateResult steady_state(const SLHModel& g, const DensityMatrix& rho0,
                               const SteadyStateConfig& config) {
  return steady_state(generator(g), rho0, config);
}

DensityMatrix steady_state_exact(const Generator& g) {
  const Liouvillian lv(g);
  const Index n = lv.dim();
  if (n > kExactSteadyStateMaxDim) {
    throw InvalidArgument("exact steady state is limited to dim <= " +
                          std::to_string(kExactSteadyStateMaxDim) + ", got " + std::to_string(n));
  }
  const DenseMatrix sup = lv.superoperator();
  Eigen::JacobiSVD<DenseMatrix> svd(sup, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();  // descending
  const double cutoff = 1e-9 * std::max(1.0, sv(0));
  Index kernel = 0;
  for (Index i = 0; i < sv.size(); ++i) kernel += sv(i) <= cutoff ? 1 : 0;
  if (kernel != 1) {
    throw NoUniqueEquilibrium("generator kernel has dimension " + std::to_string(kernel));
  }
  const Eigen::VectorXcd v = svd.matrixV().col(sv.size() - 1);
  DenseMatrix rho = Eigen::Map<const DenseMatrix>(v.data(), n, n);
  rho /= rho.trace();
  return DensityMatrix(g.H.space(), detail::hermitian_part(rho));
}

}  // namespace cqedswitch
