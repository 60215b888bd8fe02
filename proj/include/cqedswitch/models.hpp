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

// Builders for the cavity-QED set-reset switch at three levels of description:
//
//   primary       4-level atom (g, h, e, s) coupled to the POWER, SET and RESET
//                 cavity modes; 10 ports.
//   intermediate  3-level atom (g, h, s) after eliminating e and the SET/RESET
//                 cavities; 8 ports, enhanced rate gamma = g^2 / kappa.
//   limit         2-level atom (g, h) after gamma -> infinity; 6 ports, pure
//                 scattering (L = 0, H = 0).
//
// Port layout (0-based): 0 = POWER in/OUT-bar, 1 = POWER OUT, 2/3 = SET,
// 4/5 = RESET, then spontaneous-emission channels. Coherent drives enter on
// ports 0 (beta), 2 (alpha_s) and 4 (alpha_r).

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "cqedswitch/slh.hpp"

namespace cqedswitch {

/// Atomic basis indices. The 4-level atom is ordered (g, h, e, s); the
/// 3-level atom keeps (g, h, s) at indices (0, 1, 2); the 2-level atom (g, h).
namespace level {
inline constexpr int g = 0;
inline constexpr int h = 1;
inline constexpr int e = 2;
inline constexpr int s = 3;
inline constexpr int s3 = 2;  // |s> in the 3-level basis
}  // namespace level

/// Factor labels used by every builder.
namespace factor {
inline const std::string atom = "atom";
inline const std::string power = "power";
inline const std::string set = "set";
inline const std::string reset = "reset";
}  // namespace factor

enum class ModelKind { kPrimary, kIntermediate, kLimit };

std::string_view to_string(ModelKind kind);
/// Accepts "primary", "intermediate" or "limit"; throws InvalidArgument.
ModelKind parse_model_kind(std::string_view name);

/// Physical rates in inverse time units; the drive amplitudes share the unit
/// sqrt(1/time).
struct SwitchParameters {
  double Gamma = 0.3;    // spontaneous emission, same on all four channels
  double kappa_p = 50.0;  // POWER cavity field decay
  double kappa_s = 50.0;  // SET cavity
  double kappa_r = 50.0;  // RESET cavity
  double g_p = 50.0;      // atom-POWER coupling on g <-> e
  double g_s = 10.0;      // atom-SET coupling on g <-> s
  double g_r = 10.0;      // atom-RESET coupling on h <-> s
  double k1 = 1.0;        // POWER scaling parameter
  double k2 = 1.0;        // SET/RESET scaling parameter
  int trunc_p = 3;        // Fock levels kept per mode
  int trunc_s = 3;
  int trunc_r = 3;

  /// Throws InvalidArgument on negative or non-finite rates, non-positive
  /// scalings or truncations below 2.
  void validate() const;
};

struct DriveAmplitudes {
  cplx beta = 0.0;     // POWER
  cplx alpha_s = 0.0;  // SET
  cplx alpha_r = 0.0;  // RESET
};

/// Enhanced rate gamma = g^2 / kappa. Requires g_s == g_r and
/// kappa_s == kappa_r (relative 1e-12); throws InvalidArgument otherwise.
double enhanced_rate(const SwitchParameters& p);

/// Hilbert space of the primary model: atom(4) x power x set x reset.
HilbertSpace primary_space(const SwitchParameters& p);
HilbertSpace intermediate_space();
HilbertSpace limit_space();

SLHModel build_primary(const SwitchParameters& p);
SLHModel build_intermediate(double gamma, double Gamma);
SLHModel build_limit();

/// Number of ports of each model.
int port_count(ModelKind kind);

/// Drive vector placing beta, alpha_s, alpha_r on ports 0, 2 and 4.
DriveVector drive_vector(ModelKind kind, const DriveAmplitudes& d);

/// Generator of the driven intermediate model written out directly:
///   H' = -i sqrt(gamma) (alpha_s s_gs^dag - alpha_s^* s_gs)
///        -i sqrt(gamma) (alpha_r s_hs^dag - alpha_r^* s_hs),
///   L  = { sqrt(Gamma + 2 gamma) s_gs, sqrt(Gamma + 2 gamma) s_hs,
///          beta Pi_g, beta Pi_hs },
/// where s_xy = |x><y|. The beta channels dephase g against {h, s} at |beta|^2.
/// The signs of H' follow from the displacement rule with Im{X} = (X - X^dag)/(2i);
/// conjugating by diag(1, 1, -1) flips both signs without changing any
/// population or g/h coherence.
Generator displaced_intermediate_generator(double gamma, double Gamma, const DriveAmplitudes& d);

/// Reduced state of the 2-level limit model; rho_hh = 1 - rho_gg.
struct LimitState {
  double rho_gg = 1.0;
  cplx rho_hg = 0.0;

  static constexpr double kPositivityTol = 1e-10;

  /// Throws InvalidArgument unless rho_gg in [0,1] and
  /// rho_gg (1 - rho_gg) >= |rho_hg|^2 (within kPositivityTol).
  void validate() const;
  /// 2x2 density matrix in the (g, h) basis.
  DenseMatrix matrix() const;
  static LimitState from_matrix(const DenseMatrix& rho);
};

struct LimitDerivative {
  double d_gg = 0.0;
  cplx d_hg = 0.0;
};

/// Time derivative of the limit-model state:
///   d rho_gg / dt = (-|alpha_s|^2 rho_gg + |alpha_r|^2 rho_hh) / 2
///   d rho_hg / dt = -alpha_s alpha_r^* / 2
///                   - rho_hg (|beta|^2 + |alpha_s|^2 / 2 + |alpha_r|^2 / 2)
LimitDerivative limit_rhs(const LimitState& x, const DriveAmplitudes& d);

/// Closed-form fixed point of limit_rhs. Throws NoUniqueEquilibrium when
/// alpha_s = alpha_r = 0.
LimitState limit_equilibrium(const DriveAmplitudes& d);

/// Expectation of every (already displaced) coupling operator: the coherent
/// amplitude leaving each output port.
std::vector<cplx> output_amplitudes(const SLHModel& displaced, const DensityMatrix& rho);

/// A named operating point: rates plus the drive magnitudes for SET/RESET.
struct Preset {
  std::string name;
  std::string description;
  SwitchParameters params;
  cplx beta = 0.0;
  cplx alpha = 0.0;  // magnitude used for whichever control drive is active
};

/// "paper-fig2", "gaas-inas" or "gap-nv"; throws InvalidArgument.
Preset preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace cqedswitch
