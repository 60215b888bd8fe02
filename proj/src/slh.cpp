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

#include "cqedswitch/slh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cqedswitch {

namespace {

void require_space(const HilbertSpace& expected, const HilbertSpace& got, const char* what) {
  if (!(expected == got)) {
    throw SpaceMismatch(std::string(what) + " lives on " + got.describe() + ", expected " +
                        expected.describe());
  }
}

double max_abs(const Operator& op) {
  if (const auto* s = op.sparse_ptr()) {
    double m = 0.0;
    for (Index k = 0; k < s->nonZeros(); ++k) m = std::max(m, std::abs(s->valuePtr()[k]));
    return m;
  }
  const auto& d = *op.dense_ptr();
  return d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

SLHModel::SLHModel(HilbertSpace space, std::vector<Operator> S, std::vector<Operator> L,
                   Operator H)
    : space_(std::move(space)), S_(std::move(S)), L_(std::move(L)), H_(std::move(H)) {
  n_ = static_cast<int>(L_.size());
  if (n_ < 1) throw InvalidArgument("an SLH model needs at least one port");
  if (S_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_)) {
    throw PortMismatch("S has " + std::to_string(S_.size()) + " entries but L has " +
                       std::to_string(n_) + " ports");
  }
  for (const auto& s : S_) require_space(space_, s.space(), "S entry");
  for (const auto& l : L_) require_space(space_, l.space(), "L entry");
  require_space(space_, H_.space(), "H");
  const double scale = std::max(1.0, max_abs(H_));
  if (max_abs_diff(H_, H_.adjoint()) > kHermitianTol * scale) {
    throw InvalidArgument("SLH Hamiltonian is not Hermitian");
  }
}

SLHModel SLHModel::identity(const HilbertSpace& space, int n_ports) {
  if (n_ports < 1) throw InvalidArgument("identity model needs at least one port");
  std::vector<Operator> S;
  S.reserve(static_cast<std::size_t>(n_ports * n_ports));
  for (int i = 0; i < n_ports; ++i) {
    for (int j = 0; j < n_ports; ++j) {
      S.push_back(i == j ? Operator::identity(space) : Operator::zero(space));
    }
  }
  std::vector<Operator> L(static_cast<std::size_t>(n_ports), Operator::zero(space));
  return SLHModel(space, std::move(S), std::move(L), Operator::zero(space));
}

SLHModel SLHModel::source(const HilbertSpace& space, const DriveVector& d) {
  const int n = static_cast<int>(d.size());
  SLHModel id = identity(space, n);
  std::vector<Operator> L;
  L.reserve(d.size());
  for (const cplx& v : d) L.push_back(v * Operator::identity(space));
  return SLHModel(space, std::move(id.S_), std::move(L), Operator::zero(space));
}

const Operator& SLHModel::S(int row, int col) const {
  if (row < 0 || row >= n_ || col < 0 || col >= n_) {
    throw InvalidArgument("S index (" + std::to_string(row) + "," + std::to_string(col) +
                          ") out of range for " + std::to_string(n_) + " ports");
  }
  return S_[static_cast<std::size_t>(row * n_ + col)];
}

const Operator& SLHModel::L(int port) const {
  if (port < 0 || port >= n_) {
    throw InvalidArgument("port " + std::to_string(port) + " out of range for " +
                          std::to_string(n_) + " ports");
  }
  return L_[static_cast<std::size_t>(port)];
}

double SLHModel::unitarity_defect() const {
  double worst = 0.0;
  const Operator id = Operator::identity(space_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      Operator acc = Operator::zero(space_);
      for (int k = 0; k < n_; ++k) acc += S(k, i).adjoint() * S(k, j);
      if (i == j) acc -= id;
      worst = std::max(worst, max_abs(acc));
    }
  }
  return worst;
}

SLHModel series(const SLHModel& g2, const SLHModel& g1) {
  if (g1.n_ports() != g2.n_ports()) {
    throw PortMismatch("series of " + std::to_string(g2.n_ports()) + "-port and " +
                       std::to_string(g1.n_ports()) + "-port models");
  }
  require_space(g2.space(), g1.space(), "series operand");
  const HilbertSpace& space = g1.space();
  const int n = g1.n_ports();

  std::vector<Operator> S;
  S.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Operator acc = Operator::zero(space);
      for (int k = 0; k < n; ++k) acc += g2.S(i, k) * g1.S(k, j);
      S.push_back(std::move(acc));
    }
  }

  // S2 L1, reused for both L and the Hamiltonian correction.
  std::vector<Operator> s2l1;
  s2l1.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Operator acc = Operator::zero(space);
    for (int k = 0; k < n; ++k) acc += g2.S(i, k) * g1.L(k);
    s2l1.push_back(std::move(acc));
  }

  std::vector<Operator> L;
  L.reserve(static_cast<std::size_t>(n));
  Operator cross = Operator::zero(space);
  for (int i = 0; i < n; ++i) {
    L.push_back(g2.L(i) + s2l1[static_cast<std::size_t>(i)]);
    cross += g2.L(i).adjoint() * s2l1[static_cast<std::size_t>(i)];
  }
  Operator H = g1.H() + g2.H() + imag_part(cross);
  return SLHModel(space, std::move(S), std::move(L), std::move(H));
}

SLHModel concat(const SLHModel& g1, const SLHModel& g2) {
  require_space(g1.space(), g2.space(), "concat operand");
  const HilbertSpace& space = g1.space();
  const int n1 = g1.n_ports();
  const int n = n1 + g2.n_ports();
  std::vector<Operator> S;
  S.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i < n1 && j < n1) {
        S.push_back(g1.S(i, j));
      } else if (i >= n1 && j >= n1) {
        S.push_back(g2.S(i - n1, j - n1));
      } else {
        S.push_back(Operator::zero(space));
      }
    }
  }
  std::vector<Operator> L = g1.L();
  L.insert(L.end(), g2.L().begin(), g2.L().end());
  return SLHModel(space, std::move(S), std::move(L), g1.H() + g2.H());
}

SLHModel displace(const SLHModel& g, const DriveVector& d) {
  const int n = g.n_ports();
  if (static_cast<int>(d.size()) != n) {
    throw PortMismatch("drive vector has " + std::to_string(d.size()) + " entries for a " +
                       std::to_string(n) + "-port model");
  }
  const HilbertSpace& space = g.space();
  std::vector<Operator> S;
  S.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) S.push_back(g.S(i, j));
  }
  std::vector<Operator> L;
  L.reserve(static_cast<std::size_t>(n));
  Operator cross = Operator::zero(space);
  for (int i = 0; i < n; ++i) {
    Operator sd = Operator::zero(space);
    for (int j = 0; j < n; ++j) {
      if (d[static_cast<std::size_t>(j)] != cplx(0.0)) sd += d[static_cast<std::size_t>(j)] * g.S(i, j);
    }
    cross += g.L(i).adjoint() * sd;
    L.push_back(g.L(i) + sd);
  }
  return SLHModel(space, std::move(S), std::move(L), g.H() + imag_part(cross));
}

SLHModel permute_ports(const SLHModel& g, std::span<const int> perm, PortSide side) {
  const int n = g.n_ports();
  if (static_cast<int>(perm.size()) != n) {
    throw InvalidArgument("permutation has " + std::to_string(perm.size()) + " entries for " +
                          std::to_string(n) + " ports");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) {
      throw InvalidArgument("port list is not a permutation of 0.." + std::to_string(n - 1));
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
  const bool rows = side != PortSide::kInputs;
  const bool cols = side != PortSide::kOutputs;
  std::vector<Operator> S;
  S.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      S.push_back(g.S(rows ? perm[static_cast<std::size_t>(i)] : i,
                      cols ? perm[static_cast<std::size_t>(j)] : j));
    }
  }
  std::vector<Operator> L;
  L.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) L.push_back(g.L(rows ? perm[static_cast<std::size_t>(i)] : i));
  return SLHModel(g.space(), std::move(S), std::move(L), g.H());
}

Generator generator(const SLHModel& g) { return Generator{g.H(), g.L()}; }

}  // namespace cqedswitch
