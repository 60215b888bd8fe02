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

// (S, L, H) descriptions of open quantum components and their composition.
//
// Conventions:
//   * Ports are numbered from 0.
//   * Im{X} = (X - X^dagger) / (2i).
//   * series(G2, G1) feeds the outputs of G1 into the inputs of G2:
//       S = S2 S1,  L = L2 + S2 L1,  H = H1 + H2 + Im{L2^dagger S2 L1}.
//   * All operands must already live on one common HilbertSpace.

#pragma once

#include <span>
#include <vector>

#include "cqedswitch/opalg.hpp"

namespace cqedswitch {

/// Coherent input amplitudes, one per port, in sqrt(photons per unit time).
using DriveVector = std::vector<cplx>;

/// Lindblad generator: Hamiltonian plus jump operators.
struct Generator {
  Operator H;
  std::vector<Operator> L;
};

class SLHModel {
 public:
  /// Tolerance used to validate that H is Hermitian, relative to max(1, max|H_ij|).
  static constexpr double kHermitianTol = 1e-12;

  /// `S` holds n*n operators in row-major order. Throws SpaceMismatch if an
  /// entry lives elsewhere, InvalidArgument on inconsistent sizes or
  /// non-Hermitian H.
  SLHModel(HilbertSpace space, std::vector<Operator> S, std::vector<Operator> L, Operator H);

  /// (I, 0, 0) with n ports.
  static SLHModel identity(const HilbertSpace& space, int n_ports);
  /// (I, d, 0): a bank of coherent sources.
  static SLHModel source(const HilbertSpace& space, const DriveVector& d);

  const HilbertSpace& space() const noexcept { return space_; }
  int n_ports() const noexcept { return n_; }
  const Operator& S(int row, int col) const;
  const Operator& L(int port) const;
  const std::vector<Operator>& L() const noexcept { return L_; }
  const Operator& H() const noexcept { return H_; }

  /// Largest entry of sum_k S(k,i)^dagger S(k,j) - delta_ij I.
  double unitarity_defect() const;
  bool is_unitary(double tol) const { return unitarity_defect() <= tol; }

 private:
  HilbertSpace space_;
  int n_ = 0;
  std::vector<Operator> S_;
  std::vector<Operator> L_;
  Operator H_;
};

/// Outputs of g1 feed the inputs of g2.
SLHModel series(const SLHModel& g2, const SLHModel& g1);

/// Side-by-side composition; g1's ports come first.
SLHModel concat(const SLHModel& g1, const SLHModel& g2);

/// Replaces vacuum inputs by coherent amplitudes d:
///   L -> L + S d,  H -> H + Im{L^dagger S d}  (with the original L).
SLHModel displace(const SLHModel& g, const DriveVector& d);

/// Which port labels a permutation renames.
enum class PortSide {
  kOutputs,  // rows of S and entries of L: new output i is old output perm[i]
  kInputs,   // columns of S: new input j is old input perm[j]
  kBoth,     // relabel a port pair consistently on both sides
};

/// `perm` is a 0-based permutation of the n ports; throws InvalidArgument otherwise.
SLHModel permute_ports(const SLHModel& g, std::span<const int> perm,
                       PortSide side = PortSide::kOutputs);

/// Hamiltonian and jump operators of the master equation; S does not enter.
Generator generator(const SLHModel& g);

}  // namespace cqedswitch
