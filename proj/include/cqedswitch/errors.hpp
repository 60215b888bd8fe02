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

#pragma once

#include <stdexcept>
#include <string>

namespace cqedswitch {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed parameters, out-of-range indices, unknown labels,
/// inconsistent scenarios, malformed config files.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two objects that must live on the same Hilbert space do not.
class SpaceMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Port counts of composed SLH models or drive vectors disagree.
class PortMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// No drive is applied to the limit model, so every population is stationary.
class NoUniqueEquilibrium : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Summary of the numerical health of a propagation run.
struct Diagnostics {
  double max_trace_drift = 0.0;
  double max_hermiticity_defect = 0.0;
  double min_eigenvalue = 1.0;
  double final_time = 0.0;
  long steps = 0;
  long rhs_evaluations = 0;
  // Slow-subspace propagation bookkeeping; switch time is negative when unused.
  double projection_start = -1.0;
  int projection_dim = 0;
  double projection_defect = 0.0;
  bool projection_fallback = false;
  // Steady-state search.
  double last_residual = 0.0;
  double settle_criterion = 0.0;
  double t_max = 0.0;

  std::string summary() const;
};

/// Integration aborted: trace drift or negativity beyond the configured floor.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, Diagnostics diagnostics)
      : Error(what), diagnostics_(diagnostics) {}
  const Diagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  Diagnostics diagnostics_;
};

/// The state norm diverged, usually because dt exceeds the stability limit.
class InstabilityError : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

/// Steady-state search did not settle before t_max.
class SteadyStateTimeout : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

/// The target population never reached the switching threshold.
class NoSwitchError : public Error {
 public:
  using Error::Error;
};

}  // namespace cqedswitch
