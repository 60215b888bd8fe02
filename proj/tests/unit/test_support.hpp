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

// Shared helpers for the unit tests: seeded random operators, states and
// SLH models, plus independent reference constructions.

#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "cqedswitch/dynamics.hpp"
#include "cqedswitch/slh.hpp"

namespace testing {

using cqedswitch::cplx;
using cqedswitch::DenseMatrix;
using cqedswitch::HilbertSpace;
using cqedswitch::Index;
using cqedswitch::Operator;

class Rng {
 public:
  explicit Rng(unsigned long long seed) : engine_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  cplx complex(double scale = 1.0) { return scale * cplx(uniform(), uniform()); }

  DenseMatrix matrix(Index n, double scale = 1.0) {
    DenseMatrix m(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) m(i, j) = complex(scale);
    return m;
  }
  DenseMatrix hermitian(Index n, double scale = 1.0) {
    const DenseMatrix m = matrix(n, scale);
    return 0.5 * (m + m.adjoint());
  }
  // Haar-ish unitary from the QR decomposition of a Gaussian-like matrix.
  DenseMatrix unitary(Index n) {
    Eigen::HouseholderQR<DenseMatrix> qr(matrix(n));
    return qr.householderQ() * DenseMatrix::Identity(n, n);
  }
  // Full-rank mixed state: M M† / tr.
  DenseMatrix density(Index n) {
    const DenseMatrix m = matrix(n);
    DenseMatrix rho = m * m.adjoint();
    rho /= rho.trace();
    return 0.5 * (rho + rho.adjoint());
  }

 private:
  std::mt19937_64 engine_;
};

inline HilbertSpace single(int dim) { return HilbertSpace::single("q", dim); }

inline double max_abs(const DenseMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Random n-port model with a unitary scalar-valued S (each entry a multiple
// of the identity), random L and Hermitian H.
inline cqedswitch::SLHModel random_model(Rng& rng, const HilbertSpace& space, int n_ports) {
  const Index d = space.total_dim();
  const DenseMatrix u = rng.unitary(n_ports);
  const Operator id = Operator::identity(space);
  std::vector<Operator> S;
  for (int i = 0; i < n_ports; ++i)
    for (int j = 0; j < n_ports; ++j) S.push_back(u(i, j) * id);
  std::vector<Operator> L;
  for (int i = 0; i < n_ports; ++i) L.emplace_back(space, rng.matrix(d, 0.5));
  return cqedswitch::SLHModel(space, S, L, Operator(space, rng.hermitian(d)));
}

// Random model whose S entries are genuine operators: S = U ⊗-structured
// block unitary on (ports × space), drawn as one unitary of size n·d.
inline cqedswitch::SLHModel random_operator_model(Rng& rng, const HilbertSpace& space, int n_ports) {
  const Index d = space.total_dim();
  const DenseMatrix u = rng.unitary(n_ports * d);
  std::vector<Operator> S;
  for (int i = 0; i < n_ports; ++i)
    for (int j = 0; j < n_ports; ++j) S.emplace_back(space, DenseMatrix(u.block(i * d, j * d, d, d)));
  std::vector<Operator> L;
  for (int i = 0; i < n_ports; ++i) L.emplace_back(space, rng.matrix(d, 0.5));
  return cqedswitch::SLHModel(space, S, L, Operator(space, rng.hermitian(d)));
}

// Vectorized Liouvillian built column by column from the textbook formula,
// using column-major vec(): vec(A X B) = (Bᵀ ⊗ A) vec(X).
inline DenseMatrix reference_superoperator(const DenseMatrix& H, const std::vector<DenseMatrix>& L) {
  const Index d = H.rows();
  const DenseMatrix I = DenseMatrix::Identity(d, d);
  auto kronecker = [](const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
  };
  const cplx i(0.0, 1.0);
  DenseMatrix S = -i * (kronecker(I, H) - kronecker(H.transpose(), I));
  for (const auto& l : L) {
    const DenseMatrix ldl = l.adjoint() * l;
    S += kronecker(l.conjugate(), l) - 0.5 * kronecker(I, ldl) - 0.5 * kronecker(ldl.transpose(), I);
  }
  return S;
}

inline Eigen::VectorXcd vec(const DenseMatrix& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

}  // namespace testing
