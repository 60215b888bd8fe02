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

#include "cqedswitch/dynamics.hpp"

namespace cqedswitch {

namespace {

constexpr cplx kI{0.0, 1.0};

// Relative tolerance under which two normalised jump operators are merged.
constexpr double kMergeTol = 1e-14;

// Constant diagonal of m when every diagonal entry (explicit or implicit
// zero) is equal, else zero.
cplx constant_diagonal(const SparseMatrix& m) {
  const Index n = m.rows();
  const cplx first = m.coeff(0, 0);
  if (first == cplx(0.0)) return 0.0;
  for (Index i = 1; i < n; ++i) {
    if (m.coeff(i, i) != first) return 0.0;
  }
  return first;
}

cplx first_nonzero(const SparseMatrix& m) {
  for (Index k = 0; k < m.nonZeros(); ++k) {
    if (m.valuePtr()[k] != cplx(0.0)) return m.valuePtr()[k];
  }
  return 0.0;
}

bool same_operator(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.nonZeros() != b.nonZeros()) return false;
  SparseMatrix d = a - b;
  for (Index k = 0; k < d.nonZeros(); ++k) {
    if (std::abs(d.valuePtr()[k]) > kMergeTol) return false;
  }
  return true;
}

// Y = rho K^dag, column j of Y being sum_k conj(K_jk) rho(:, k).
void right_multiply_adjoint(const SparseMatrix& K, const DenseMatrix& rho, DenseMatrix& Y) {
  const Index n = rho.rows();
  for (Index j = 0; j < K.outerSize(); ++j) {
    cplx* y = Y.col(j).data();
    std::fill(y, y + n, cplx(0.0));
    for (SparseMatrix::InnerIterator it(K, j); it; ++it) {
      const cplx w = std::conj(it.value());
      const cplx* r = rho.col(it.col()).data();
      for (Index i = 0; i < n; ++i) y[i] += w * r[i];
    }
  }
}

}  // namespace

Liouvillian::Liouvillian(const Operator& H, std::span<const Operator> L) : space_(H.space()) {
  const Index n = space_.total_dim();
  SparseMatrix h_eff = H.to_sparse();
  std::vector<SparseMatrix> normalised;

  for (const auto& op : L) {
    if (!(op.space() == space_)) {
      throw SpaceMismatch("jump operator lives on " + op.space().describe() + ", H on " +
                          space_.describe());
    }
    SparseMatrix A = op.to_sparse();
    const cplx c = constant_diagonal(A);
    if (c != cplx(0.0)) {
      SparseMatrix shift(n, n);
      shift.setIdentity();
      A -= c * shift;
      A.prune(cplx(0.0), 0.0);
    }
    const cplx lambda = first_nonzero(A);
    if (lambda == cplx(0.0)) continue;  // a pure constant has no dynamical effect
    if (c != cplx(0.0)) {
      SparseMatrix Ad = A.adjoint();
      SparseMatrix term = (0.5 * kI * std::conj(c)) * A;
      term -= (0.5 * kI * c) * Ad;
      h_eff += term;
    }
    SparseMatrix B = A / lambda;
    B.makeCompressed();
    bool merged = false;
    for (std::size_t k = 0; k < normalised.size(); ++k) {
      if (same_operator(normalised[k], B)) {
        channels_[k].weight += std::norm(lambda);
        merged = true;
        break;
      }
    }
    if (merged) continue;
    Channel ch;
    ch.weight = std::norm(lambda);
    ch.monomial = true;
    for (Index r = 0; r < B.outerSize(); ++r) {
      if (B.innerVector(r).nonZeros() > 1) ch.monomial = false;
    }
    if (ch.monomial) {
      for (Index r = 0; r < B.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(B, r); it; ++it) {
          ch.rows.push_back(r);
          ch.cols.push_back(it.col());
          ch.values.push_back(it.value());
        }
      }
    }
    ch.A = B;
    channels_.push_back(std::move(ch));
    normalised.push_back(std::move(B));
  }

  K_ = (-kI) * h_eff;
  for (const auto& ch : channels_) {
    SparseMatrix Ad = ch.A.adjoint();
    SparseMatrix AdA = Ad * ch.A;
    K_ -= (0.5 * ch.weight) * AdA;
  }
  K_.prune(cplx(0.0), 0.0);
  K_.makeCompressed();
}

void Liouvillian::add_sandwich(const Channel& ch, const DenseMatrix& rho, DenseMatrix& out,
                               double scale, bool hermitian) const {
  const double s = scale * ch.weight;
  if (ch.monomial) {
    // (A rho A^dag)_ij = v_i conj(v_j) rho(c_i, c_j)
    const std::size_t m = ch.rows.size();
    for (std::size_t b = 0; b < m; ++b) {
      const cplx wb = s * std::conj(ch.values[b]);
      const cplx* src = rho.col(ch.cols[b]).data();
      cplx* dst = out.col(ch.rows[b]).data();
      for (std::size_t a = 0; a < m; ++a) dst[ch.rows[a]] += ch.values[a] * wb * src[ch.cols[a]];
    }
    return;
  }
  if (hermitian) {
    const DenseMatrix T = ch.A * rho;  // A rho A^dag = A (A rho)^dag
    out.noalias() += s * (ch.A * T.adjoint());
  } else {
    const DenseMatrix T = ch.A * rho.adjoint();  // A rho A^dag = A (A rho^dag)^dag
    out.noalias() += s * (ch.A * T.adjoint());
  }
}

void Liouvillian::apply_hermitian(const DenseMatrix& rho, DenseMatrix& out) const {
  const Index n = dim();
  if (rho.rows() != n || rho.cols() != n) throw SpaceMismatch("state dimension mismatch");
  out.resize(n, n);
  // X = rho K^dag + (1/2) sum_k w_k A_k rho A_k^dag, then L(rho) = X + X^dag.
  right_multiply_adjoint(K_, rho, out);
  for (const auto& ch : channels_) add_sandwich(ch, rho, out, 0.5, true);
  for (Index j = 0; j < n; ++j) {
    out(j, j) = 2.0 * out(j, j).real();
    for (Index i = j + 1; i < n; ++i) {
      const cplx v = out(i, j) + std::conj(out(j, i));
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  }
}

void Liouvillian::apply(const DenseMatrix& rho, DenseMatrix& out) const {
  const Index n = dim();
  if (rho.rows() != n || rho.cols() != n) throw SpaceMismatch("state dimension mismatch");
  out.resize(n, n);
  right_multiply_adjoint(K_, rho, out);
  out.noalias() += K_ * rho;
  for (const auto& ch : channels_) add_sandwich(ch, rho, out, 1.0, false);
}

DenseMatrix Liouvillian::superoperator() const {
  const Index n = dim();
  if (n > kMaxSuperoperatorDim) {
    throw InvalidArgument("vectorized generator requested for dim " + std::to_string(n) +
                          " (limit " + std::to_string(kMaxSuperoperatorDim) + ")");
  }
  DenseMatrix sup(n * n, n * n);
  DenseMatrix basis = DenseMatrix::Zero(n, n);
  DenseMatrix image;
  for (Index col = 0; col < n; ++col) {
    for (Index row = 0; row < n; ++row) {
      basis(row, col) = 1.0;
      apply(basis, image);
      sup.col(row + col * n) = Eigen::Map<const Eigen::VectorXcd>(image.data(), n * n);
      basis(row, col) = 0.0;
    }
  }
  return sup;
}

DenseMatrix lindblad_rhs(const DensityMatrix& rho, const Operator& H, std::span<const Operator> L) {
  if (!(rho.space() == H.space())) {
    throw SpaceMismatch("state lives on " + rho.space().describe() + ", H on " +
                        H.space().describe());
  }
  Liouvillian lv(H, L);
  DenseMatrix out;
  lv.apply(rho.matrix(), out);
  return out;
}

}  // namespace cqedswitch
