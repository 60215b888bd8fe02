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

// Finite-dimensional operator algebra on tensor products of labelled factors.
//
// Kronecker ordering follows the factor list: for factors (A, B, C) the basis
// index of |a b c> is (a * dim(B) + b) * dim(C) + c.

#pragma once

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cqedswitch/errors.hpp"

namespace cqedswitch {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

struct Factor {
  std::string label;
  int dim = 0;

  bool operator==(const Factor&) const = default;
};

class HilbertSpace {
 public:
  HilbertSpace() = default;
  /// Throws InvalidArgument on duplicate labels or dims below 2.
  explicit HilbertSpace(std::vector<Factor> factors);

  static HilbertSpace single(std::string label, int dim);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  Index total_dim() const noexcept { return total_dim_; }
  std::size_t num_factors() const noexcept { return factors_.size(); }

  bool contains(const std::string& label) const;
  /// Position of `label` in the factor list; throws InvalidArgument if absent.
  std::size_t position(const std::string& label) const;
  int dim_of(const std::string& label) const;

  /// Space made of the listed factors, kept in this space's order.
  HilbertSpace subspace(std::span<const std::string> keep) const;

  std::string describe() const;

  bool operator==(const HilbertSpace& other) const { return factors_ == other.factors_; }

 private:
  std::vector<Factor> factors_;
  Index total_dim_ = 0;
};

/// Square complex matrix acting on a HilbertSpace.
///
/// Storage is sparse or dense, picked from the nonzero density after every
/// construction; results never depend on which one is active.
class Operator {
 public:
  Operator() = default;
  Operator(HilbertSpace space, SparseMatrix m);
  Operator(HilbertSpace space, DenseMatrix m);

  static Operator zero(const HilbertSpace& space);
  static Operator identity(const HilbertSpace& space);

  const HilbertSpace& space() const noexcept { return space_; }
  Index dim() const noexcept { return space_.total_dim(); }

  bool is_sparse() const noexcept { return std::holds_alternative<SparseMatrix>(data_); }
  const SparseMatrix* sparse_ptr() const noexcept { return std::get_if<SparseMatrix>(&data_); }
  const DenseMatrix* dense_ptr() const noexcept { return std::get_if<DenseMatrix>(&data_); }
  SparseMatrix to_sparse() const;
  DenseMatrix to_dense() const;
  Index non_zeros() const;
  cplx coeff(Index row, Index col) const;

  Operator adjoint() const;
  bool is_zero(double tol = 0.0) const;
  bool is_hermitian(double tol) const;
  bool is_unitary(double tol) const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(cplx s);

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);
  friend Operator operator*(cplx s, Operator op) { return op *= s; }
  friend Operator operator*(Operator op, cplx s) { return op *= s; }
  friend Operator operator-(Operator op) { return op *= -1.0; }

 private:
  void choose_storage();

  HilbertSpace space_;
  std::variant<SparseMatrix, DenseMatrix> data_;
};

/// Largest entrywise modulus of a - b; throws SpaceMismatch.
double max_abs_diff(const Operator& a, const Operator& b);

/// Im{X} = (X - X^dagger) / (2i).
Operator imag_part(const Operator& x);

/// State of a HilbertSpace. Construction validates: Hermitian within 1e-10,
/// unit trace within 1e-8 and smallest eigenvalue at least -1e-8.
class DensityMatrix {
 public:
  struct Health {
    double hermiticity_defect = 0.0;
    double trace_error = 0.0;
    double min_eigenvalue = 0.0;
  };

  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kTraceTol = 1e-8;
  static constexpr double kPositivityTol = 1e-8;

  DensityMatrix(HilbertSpace space, DenseMatrix m);

  /// Projector onto a basis state of the full space.
  static DensityMatrix basis_state(const HilbertSpace& space, Index index);
  static DensityMatrix pure(const HilbertSpace& space, const Eigen::VectorXcd& psi);
  static DensityMatrix maximally_mixed(const HilbertSpace& space);
  /// Tensor product of per-factor states, given in the space's factor order.
  static DensityMatrix product(const HilbertSpace& space, std::span<const DenseMatrix> factors);

  static Health health(const DenseMatrix& m);

  const HilbertSpace& space() const noexcept { return space_; }
  const DenseMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return space_.total_dim(); }

 private:
  HilbertSpace space_;
  DenseMatrix m_;
};

/// a on an N-level Fock truncation: <n|a|n+1> = sqrt(n+1).
Operator annihilation(int trunc, const std::string& label = "mode");

/// |to><from| on a single d-dimensional factor; projectors are to == from.
Operator transition(int dim, int from, int to, const std::string& label = "atom");

/// Places a single-factor operator into `slot` of `space` (identity elsewhere).
Operator embed(const Operator& op, const std::string& slot, const HilbertSpace& space);

cplx expectation(const DensityMatrix& rho, const Operator& op);
/// trace(rho * op) for a raw matrix; dimensions must agree.
cplx trace_product(const DenseMatrix& rho, const Operator& op);

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep);
/// Same reduction on a raw matrix, used during propagation.
DenseMatrix partial_trace(const DenseMatrix& rho, const HilbertSpace& space,
                          std::span<const std::string> keep);

/// Kronecker product of two sparse matrices.
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace cqedswitch
