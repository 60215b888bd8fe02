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

#include "cqedswitch/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace cqedswitch {

namespace {

// Above this fraction of nonzeros an operator is stored densely.
constexpr double kDenseFraction = 0.25;

SparseMatrix identity_sparse(Index n) {
  SparseMatrix m(n, n);
  m.setIdentity();
  return m;
}

void require_same_space(const HilbertSpace& a, const HilbertSpace& b, const char* what) {
  if (!(a == b)) {
    throw SpaceMismatch(std::string(what) + ": operands live on " + a.describe() + " and " +
                        b.describe());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// HilbertSpace

HilbertSpace::HilbertSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw InvalidArgument("HilbertSpace needs at least one factor");
  std::set<std::string> seen;
  total_dim_ = 1;
  for (const auto& f : factors_) {
    if (f.dim < 2) {
      throw InvalidArgument("factor '" + f.label + "' has dim " + std::to_string(f.dim) +
                            "; dims must be >= 2");
    }
    if (!seen.insert(f.label).second) {
      throw InvalidArgument("duplicate factor label '" + f.label + "'");
    }
    total_dim_ *= f.dim;
  }
}

HilbertSpace HilbertSpace::single(std::string label, int dim) {
  return HilbertSpace({Factor{std::move(label), dim}});
}

bool HilbertSpace::contains(const std::string& label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

std::size_t HilbertSpace::position(const std::string& label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].label == label) return i;
  }
  throw InvalidArgument("unknown factor label '" + label + "' in " + describe());
}

int HilbertSpace::dim_of(const std::string& label) const { return factors_[position(label)].dim; }

HilbertSpace HilbertSpace::subspace(std::span<const std::string> keep) const {
  std::vector<bool> kept(factors_.size(), false);
  for (const auto& label : keep) kept[position(label)] = true;
  std::vector<Factor> out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (kept[i]) out.push_back(factors_[i]);
  }
  return HilbertSpace(std::move(out));
}

std::string HilbertSpace::describe() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " x ";
    os << factors_[i].label << ':' << factors_[i].dim;
  }
  os << ']';
  return os.str();
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(HilbertSpace space, SparseMatrix m) : space_(std::move(space)) {
  if (m.rows() != space_.total_dim() || m.cols() != space_.total_dim()) {
    throw InvalidArgument("operator matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + " but space " + space_.describe() +
                          " has dim " + std::to_string(space_.total_dim()));
  }
  m.prune(cplx(0.0), 0.0);
  m.makeCompressed();
  data_ = std::move(m);
  choose_storage();
}

Operator::Operator(HilbertSpace space, DenseMatrix m) : space_(std::move(space)) {
  if (m.rows() != space_.total_dim() || m.cols() != space_.total_dim()) {
    throw InvalidArgument("operator matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + " but space " + space_.describe() +
                          " has dim " + std::to_string(space_.total_dim()));
  }
  data_ = std::move(m);
  choose_storage();
}

Operator Operator::zero(const HilbertSpace& space) {
  return Operator(space, SparseMatrix(space.total_dim(), space.total_dim()));
}

Operator Operator::identity(const HilbertSpace& space) {
  return Operator(space, identity_sparse(space.total_dim()));
}

void Operator::choose_storage() {
  const double cells = static_cast<double>(dim()) * static_cast<double>(dim());
  if (cells == 0.0) return;
  if (auto* s = std::get_if<SparseMatrix>(&data_)) {
    if (static_cast<double>(s->nonZeros()) > kDenseFraction * cells) data_ = DenseMatrix(*s);
  } else {
    const auto& d = std::get<DenseMatrix>(data_);
    const Index nnz = (d.array() != cplx(0.0)).count();
    if (static_cast<double>(nnz) <= kDenseFraction * cells) {
      SparseMatrix s = d.sparseView(cplx(0.0), 0.0);
      s.makeCompressed();
      data_ = std::move(s);
    }
  }
}

SparseMatrix Operator::to_sparse() const {
  if (const auto* s = sparse_ptr()) return *s;
  SparseMatrix s = std::get<DenseMatrix>(data_).sparseView(cplx(0.0), 0.0);
  s.makeCompressed();
  return s;
}

DenseMatrix Operator::to_dense() const {
  if (const auto* d = dense_ptr()) return *d;
  return DenseMatrix(std::get<SparseMatrix>(data_));
}

Index Operator::non_zeros() const {
  if (const auto* s = sparse_ptr()) return s->nonZeros();
  return (std::get<DenseMatrix>(data_).array() != cplx(0.0)).count();
}

cplx Operator::coeff(Index row, Index col) const {
  if (const auto* s = sparse_ptr()) return s->coeff(row, col);
  return std::get<DenseMatrix>(data_)(row, col);
}

Operator Operator::adjoint() const {
  if (const auto* s = sparse_ptr()) return Operator(space_, SparseMatrix(s->adjoint()));
  return Operator(space_, DenseMatrix(std::get<DenseMatrix>(data_).adjoint()));
}

bool Operator::is_zero(double tol) const {
  if (const auto* s = sparse_ptr()) {
    for (Index k = 0; k < s->nonZeros(); ++k) {
      if (std::abs(s->valuePtr()[k]) > tol) return false;
    }
    return true;
  }
  const auto& d = std::get<DenseMatrix>(data_);
  return d.size() == 0 || d.cwiseAbs().maxCoeff() <= tol;
}

bool Operator::is_hermitian(double tol) const { return max_abs_diff(*this, adjoint()) <= tol; }

bool Operator::is_unitary(double tol) const {
  return max_abs_diff(adjoint() * *this, identity(space_)) <= tol;
}

Operator& Operator::operator+=(const Operator& rhs) {
  require_same_space(space_, rhs.space_, "operator sum");
  if (is_sparse() && rhs.is_sparse()) {
    SparseMatrix sum = *sparse_ptr() + *rhs.sparse_ptr();
    sum.prune(cplx(0.0), 0.0);
    data_ = std::move(sum);
  } else {
    DenseMatrix sum = to_dense();
    if (const auto* s = rhs.sparse_ptr()) {
      sum += *s;
    } else {
      sum += *rhs.dense_ptr();
    }
    data_ = std::move(sum);
  }
  choose_storage();
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) { return *this += -1.0 * rhs; }

Operator& Operator::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    data_ = SparseMatrix(dim(), dim());
    return *this;
  }
  std::visit([s](auto& m) { m *= s; }, data_);
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  require_same_space(lhs.space_, rhs.space_, "operator product");
  if (lhs.is_sparse() && rhs.is_sparse()) {
    SparseMatrix prod = (*lhs.sparse_ptr()) * (*rhs.sparse_ptr());
    return Operator(lhs.space_, std::move(prod));
  }
  if (lhs.is_sparse()) {
    return Operator(lhs.space_, DenseMatrix((*lhs.sparse_ptr()) * (*rhs.dense_ptr())));
  }
  if (rhs.is_sparse()) {
    return Operator(lhs.space_, DenseMatrix((*lhs.dense_ptr()) * (*rhs.sparse_ptr())));
  }
  return Operator(lhs.space_, DenseMatrix((*lhs.dense_ptr()) * (*rhs.dense_ptr())));
}

double max_abs_diff(const Operator& a, const Operator& b) {
  require_same_space(a.space(), b.space(), "operator comparison");
  if (a.is_sparse() && b.is_sparse()) {
    SparseMatrix d = *a.sparse_ptr() - *b.sparse_ptr();
    double m = 0.0;
    for (Index k = 0; k < d.nonZeros(); ++k) m = std::max(m, std::abs(d.valuePtr()[k]));
    return m;
  }
  const DenseMatrix d = a.to_dense() - b.to_dense();
  return d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
}

Operator imag_part(const Operator& x) { return cplx(0.0, -0.5) * (x - x.adjoint()); }

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(HilbertSpace space, DenseMatrix m)
    : space_(std::move(space)), m_(std::move(m)) {
  if (m_.rows() != space_.total_dim() || m_.cols() != space_.total_dim()) {
    throw InvalidArgument("density matrix shape does not match " + space_.describe());
  }
  const Health h = health(m_);
  if (h.hermiticity_defect > kHermitianTol) {
    throw InvalidArgument("density matrix is not Hermitian (defect " +
                          std::to_string(h.hermiticity_defect) + ")");
  }
  if (h.trace_error > kTraceTol) {
    throw InvalidArgument("density matrix trace differs from 1 by " +
                          std::to_string(h.trace_error));
  }
  if (h.min_eigenvalue < -kPositivityTol) {
    throw InvalidArgument("density matrix has eigenvalue " + std::to_string(h.min_eigenvalue));
  }
}

DensityMatrix::Health DensityMatrix::health(const DenseMatrix& m) {
  Health h;
  h.hermiticity_defect = m.size() ? (m - m.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  h.trace_error = std::abs(m.trace() - cplx(1.0));
  const DenseMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(herm, Eigen::EigenvaluesOnly);
  h.min_eigenvalue = es.eigenvalues().minCoeff();
  return h;
}

DensityMatrix DensityMatrix::basis_state(const HilbertSpace& space, Index index) {
  if (index < 0 || index >= space.total_dim()) {
    throw InvalidArgument("basis index " + std::to_string(index) + " out of range for " +
                          space.describe());
  }
  DenseMatrix m = DenseMatrix::Zero(space.total_dim(), space.total_dim());
  m(index, index) = 1.0;
  return DensityMatrix(space, std::move(m));
}

DensityMatrix DensityMatrix::pure(const HilbertSpace& space, const Eigen::VectorXcd& psi) {
  if (psi.size() != space.total_dim()) {
    throw InvalidArgument("state vector length does not match " + space.describe());
  }
  const double n = psi.norm();
  if (n == 0.0) throw InvalidArgument("zero state vector");
  const Eigen::VectorXcd u = psi / n;
  return DensityMatrix(space, u * u.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(const HilbertSpace& space) {
  const Index d = space.total_dim();
  return DensityMatrix(space, DenseMatrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::product(const HilbertSpace& space,
                                     std::span<const DenseMatrix> factors) {
  if (factors.size() != space.num_factors()) {
    throw InvalidArgument("product state needs one matrix per factor of " + space.describe());
  }
  DenseMatrix out = DenseMatrix::Ones(1, 1);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].rows() != space.factors()[i].dim || factors[i].cols() != space.factors()[i].dim) {
      throw InvalidArgument("factor state " + std::to_string(i) + " has wrong shape");
    }
    out = DenseMatrix(Eigen::kroneckerProduct(out, factors[i]));
  }
  return DensityMatrix(space, std::move(out));
}

// ---------------------------------------------------------------------------
// Constructors and maps

Operator annihilation(int trunc, const std::string& label) {
  if (trunc < 2) {
    throw InvalidArgument("Fock truncation must be >= 2, got " + std::to_string(trunc));
  }
  SparseMatrix a(trunc, trunc);
  a.reserve(trunc - 1);
  for (int n = 0; n + 1 < trunc; ++n) a.insert(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
  return Operator(HilbertSpace::single(label, trunc), std::move(a));
}

Operator transition(int dim, int from, int to, const std::string& label) {
  if (dim < 2) throw InvalidArgument("transition needs dim >= 2");
  if (from < 0 || from >= dim || to < 0 || to >= dim) {
    throw InvalidArgument("transition |" + std::to_string(to) + "><" + std::to_string(from) +
                          "| out of range for dim " + std::to_string(dim));
  }
  SparseMatrix m(dim, dim);
  m.insert(to, from) = 1.0;
  return Operator(HilbertSpace::single(label, dim), std::move(m));
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out = Eigen::kroneckerProduct(a, b);
  out.makeCompressed();
  return out;
}

Operator embed(const Operator& op, const std::string& slot, const HilbertSpace& space) {
  if (op.space().num_factors() != 1) {
    throw InvalidArgument("embed expects a single-factor operator, got " + op.space().describe());
  }
  const std::size_t pos = space.position(slot);
  if (op.dim() != space.factors()[pos].dim) {
    throw InvalidArgument("cannot embed a dim-" + std::to_string(op.dim()) + " operator into slot '" +
                          slot + "' of dim " + std::to_string(space.factors()[pos].dim));
  }
  Index before = 1, after = 1;
  for (std::size_t i = 0; i < pos; ++i) before *= space.factors()[i].dim;
  for (std::size_t i = pos + 1; i < space.num_factors(); ++i) after *= space.factors()[i].dim;
  SparseMatrix m = kron(kron(identity_sparse(before), op.to_sparse()), identity_sparse(after));
  return Operator(space, std::move(m));
}

cplx trace_product(const DenseMatrix& rho, const Operator& op) {
  if (rho.rows() != op.dim() || rho.cols() != op.dim()) {
    throw SpaceMismatch("state and operator dimensions differ");
  }
  cplx acc = 0.0;
  if (const auto* s = op.sparse_ptr()) {
    // trace(rho op) = sum_ij rho_ji op_ij
    for (Index i = 0; i < s->outerSize(); ++i) {
      for (SparseMatrix::InnerIterator it(*s, i); it; ++it) acc += rho(it.col(), i) * it.value();
    }
    return acc;
  }
  return (rho.transpose().array() * op.dense_ptr()->array()).sum();
}

cplx expectation(const DensityMatrix& rho, const Operator& op) {
  if (!(rho.space() == op.space())) {
    throw SpaceMismatch("expectation: state on " + rho.space().describe() + ", operator on " +
                        op.space().describe());
  }
  return trace_product(rho.matrix(), op);
}

DenseMatrix partial_trace(const DenseMatrix& rho, const HilbertSpace& space,
                          std::span<const std::string> keep) {
  const std::size_t nf = space.num_factors();
  std::vector<bool> kept(nf, false);
  for (const auto& label : keep) kept[space.position(label)] = true;

  // Split every full index into (kept index, traced index).
  const Index d = space.total_dim();
  Index dk = 1, dt = 1;
  for (std::size_t f = 0; f < nf; ++f) (kept[f] ? dk : dt) *= space.factors()[f].dim;
  std::vector<Index> full_of(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) {
    Index rem = i, k = 0, t = 0, kstride = 1, tstride = 1;
    for (std::size_t f = nf; f-- > 0;) {
      const int fd = space.factors()[f].dim;
      const Index digit = rem % fd;
      rem /= fd;
      if (kept[f]) {
        k += digit * kstride;
        kstride *= fd;
      } else {
        t += digit * tstride;
        tstride *= fd;
      }
    }
    full_of[static_cast<std::size_t>(k * dt + t)] = i;
  }
  DenseMatrix out = DenseMatrix::Zero(dk, dk);
  for (Index c = 0; c < dk; ++c) {
    for (Index r = 0; r < dk; ++r) {
      cplx acc = 0.0;
      for (Index t = 0; t < dt; ++t) {
        acc += rho(full_of[static_cast<std::size_t>(r * dt + t)],
                   full_of[static_cast<std::size_t>(c * dt + t)]);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep) {
  HilbertSpace sub = rho.space().subspace(keep);
  return DensityMatrix(std::move(sub), partial_trace(rho.matrix(), rho.space(), keep));
}

}  // namespace cqedswitch
