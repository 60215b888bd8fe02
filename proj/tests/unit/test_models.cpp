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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cqedswitch/dynamics.hpp"
#include "cqedswitch/models.hpp"
#include "test_support.hpp"

using namespace cqedswitch;
using testing::max_abs;
using testing::Rng;

namespace {

const cplx kI(0.0, 1.0);

// Builds a 3-level operator from dense entries, bypassing the library helpers.
Operator atom3(std::initializer_list<std::tuple<int, int, cplx>> entries) {
  DenseMatrix m = DenseMatrix::Zero(3, 3);
  for (const auto& [r, c, v] : entries) m(r, c) += v;
  return Operator(intermediate_space(), m);
}

DriveAmplitudes random_drives(Rng& rng) { return {rng.complex(), rng.complex(), rng.complex()}; }

}  // namespace

TEST_CASE("primary model structure") {
  const SwitchParameters p;
  const SLHModel g = build_primary(p);
  CHECK(g.space().total_dim() == 108);
  CHECK(g.n_ports() == 10);
  CHECK(g.H().is_hermitian(1e-12));
  CHECK(g.unitarity_defect() == 0.0);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const DenseMatrix s = g.S(i, j).to_dense();
      const DenseMatrix expect = i == j ? DenseMatrix(DenseMatrix::Identity(108, 108)) : DenseMatrix(DenseMatrix::Zero(108, 108));
      CHECK(max_abs(s - expect) == 0.0);
    }

  SwitchParameters dark = p;
  dark.g_p = dark.g_s = dark.g_r = 0.0;
  CHECK(build_primary(dark).H().is_zero());

  SwitchParameters bad = p;
  bad.trunc_p = 1;
  CHECK_THROWS_AS(build_primary(bad), InvalidArgument);
  bad = p;
  bad.k1 = 0.0;
  CHECK_THROWS_AS(build_primary(bad), InvalidArgument);
  bad = p;
  bad.Gamma = -1.0;
  CHECK_THROWS_AS(build_primary(bad), InvalidArgument);
}

TEST_CASE("primary coefficients match a hand-built Kronecker construction") {
  SwitchParameters p;
  p.trunc_p = 3;
  p.trunc_s = 2;
  p.trunc_r = 2;
  p.k1 = 1.3;
  p.k2 = 0.7;
  const SLHModel g = build_primary(p);
  // Dense Kronecker products in factor order atom ⊗ power ⊗ set ⊗ reset.
  auto kron4 = [](const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& c, const DenseMatrix& d) {
    auto k = [](const DenseMatrix& x, const DenseMatrix& y) {
      DenseMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
      for (Index i = 0; i < x.rows(); ++i)
        for (Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
      return out;
    };
    return k(k(k(a, b), c), d);
  };
  auto ket_bra = [](int n, int i, int j) {
    DenseMatrix m = DenseMatrix::Zero(n, n);
    m(i, j) = 1.0;
    return m;
  };
  auto destroy = [](int n) {
    DenseMatrix m = DenseMatrix::Zero(n, n);
    for (int k = 1; k < n; ++k) m(k - 1, k) = std::sqrt(static_cast<double>(k));
    return m;
  };
  const DenseMatrix I4 = DenseMatrix::Identity(4, 4), I3 = DenseMatrix::Identity(3, 3),
                    I2 = DenseMatrix::Identity(2, 2);
  const DenseMatrix a = kron4(I4, destroy(3), I2, I2);
  const DenseMatrix b = kron4(I4, I3, destroy(2), I2);
  const DenseMatrix c = kron4(I4, I3, I2, destroy(2));
  auto sigma = [&](int to, int from) { return kron4(ket_bra(4, to, from), I3, I2, I2); };
  const DenseMatrix s_ge = sigma(0, 2), s_he = sigma(1, 2), s_gs = sigma(0, 3), s_hs = sigma(1, 3);

  const double sG = std::sqrt(p.Gamma);
  const std::vector<DenseMatrix> L{p.k1 * std::sqrt(p.kappa_p) * a, p.k1 * std::sqrt(p.kappa_p) * a,
                                   p.k2 * std::sqrt(p.kappa_s) * b, p.k2 * std::sqrt(p.kappa_s) * b,
                                   p.k2 * std::sqrt(p.kappa_r) * c, p.k2 * std::sqrt(p.kappa_r) * c,
                                   sG * s_gs, sG * s_hs, sG * s_ge, sG * s_he};
  for (int i = 0; i < 10; ++i) CHECK(max_abs(g.L(i).to_dense() - L[static_cast<std::size_t>(i)]) < 1e-13);
  const DenseMatrix H =
      kI * p.k1 * p.k1 * p.g_p * (a.adjoint() * s_ge - a * s_ge.adjoint()) +
      kI * p.k2 * p.g_s * (b.adjoint() * s_gs - b * s_gs.adjoint()) +
      kI * p.k2 * p.g_r * (c.adjoint() * s_hs - c * s_hs.adjoint());
  CHECK(max_abs(g.H().to_dense() - H) < 1e-12);
}

TEST_CASE("intermediate model structure") {
  const SwitchParameters p;
  CHECK(enhanced_rate(p) == doctest::Approx(2.0));
  const SLHModel g = build_intermediate(2.0, 0.3);
  CHECK(g.n_ports() == 8);
  CHECK(g.space().total_dim() == 3);
  CHECK(g.unitarity_defect() == 0.0);
  CHECK(g.H().is_zero());

  const Operator pi_g = atom3({{0, 0, 1.0}});
  const Operator pi_hs = atom3({{1, 1, 1.0}, {2, 2, 1.0}});
  const Operator id = Operator::identity(intermediate_space());
  CHECK(max_abs_diff(g.S(0, 0), pi_g) == 0.0);
  CHECK(max_abs_diff(g.S(1, 1), pi_g) == 0.0);
  CHECK(max_abs_diff(g.S(0, 1), -pi_hs) == 0.0);
  CHECK(max_abs_diff(g.S(1, 0), -pi_hs) == 0.0);
  for (auto [i, j] : {std::pair{2, 3}, {3, 2}, {4, 5}, {5, 4}, {6, 6}, {7, 7}})
    CHECK(max_abs_diff(g.S(i, j), id) == 0.0);
  CHECK(g.S(2, 2).is_zero());
  CHECK(g.S(0, 2).is_zero());
  const Operator s_gs = atom3({{0, 2, 1.0}}), s_hs = atom3({{1, 2, 1.0}});
  CHECK(max_abs_diff(g.L(2), std::sqrt(2.0) * s_gs) < 1e-15);
  CHECK(max_abs_diff(g.L(5), std::sqrt(2.0) * s_hs) < 1e-15);
  CHECK(max_abs_diff(g.L(6), std::sqrt(0.3) * s_gs) < 1e-15);
  CHECK(g.L(0).is_zero());

  SwitchParameters unequal = p;
  unequal.g_r = 11.0;
  CHECK_THROWS_AS(enhanced_rate(unequal), InvalidArgument);
  CHECK_THROWS_AS(build_intermediate(-1.0, 0.3), InvalidArgument);
}

TEST_CASE("undriven |s> decays at twice Gamma + 2 gamma") {
  const double gamma = 2.0, Gamma = 0.3;
  IntegrationConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 1.0;
  cfg.record_stride = 100;
  const ObservableList obs{{"pop_s", atom3({{2, 2, 1.0}})}};
  const Trajectory t =
      integrate(build_intermediate(gamma, Gamma), DensityMatrix::basis_state(intermediate_space(), 2), cfg, obs);
  const auto& pop = t.channel("pop_s");
  for (std::size_t k = 0; k < t.times.size(); ++k)
    CHECK(std::abs(pop[k].real() - std::exp(-2.0 * (Gamma + 2.0 * gamma) * t.times[k])) < 1e-8);
}

TEST_CASE("displaced intermediate generator agrees with displacing the SLH model") {
  Rng rng(31);
  const HilbertSpace space = intermediate_space();
  for (int trial = 0; trial < 20; ++trial) {
    const double gamma = rng.uniform(0.1, 5.0), Gamma = rng.uniform(0.0, 1.0);
    const DriveAmplitudes d = random_drives(rng);
    const Generator literal = displaced_intermediate_generator(gamma, Gamma, d);
    const Generator derived =
        generator(displace(build_intermediate(gamma, Gamma), drive_vector(ModelKind::kIntermediate, d)));
    const DensityMatrix rho(space, rng.density(3));
    CHECK(max_abs(lindblad_rhs(rho, literal.H, literal.L) - lindblad_rhs(rho, derived.H, derived.L)) < 1e-10);
  }
  CHECK(displaced_intermediate_generator(2.0, 0.3, {0.5, 0.0, 0.0}).H.is_zero());
}

TEST_CASE("POWER drive dephases the g-h coherence at |beta|^2") {
  const DriveAmplitudes d{0.5, 0.0, 0.0};
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(3);
  psi(level::g) = psi(level::h) = 1.0 / std::sqrt(2.0);
  IntegrationConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_final = 8.0;
  cfg.record_stride = 50;
  const ObservableList obs{{"coh", atom3({{0, 1, 1.0}})}};  // tr(rho |g><h|) = rho_hg
  const Trajectory t = integrate(displaced_intermediate_generator(2.0, 0.3, d),
                                 DensityMatrix::pure(intermediate_space(), psi), cfg, obs);
  for (std::size_t k = 0; k < t.times.size(); ++k)
    CHECK(std::abs(t.channel("coh")[k] - 0.5 * std::exp(-0.25 * t.times[k])) < 1e-9);
}

TEST_CASE("scattering-limit model") {
  const SLHModel g = build_limit();
  CHECK(g.n_ports() == 6);
  CHECK(g.unitarity_defect() < 1e-12);
  CHECK(g.H().is_zero());
  for (int i = 0; i < 6; ++i) CHECK(g.L(i).is_zero());
  // POWER block: reflected for |g>, transmitted with a sign flip for |h>.
  CHECK(g.S(0, 0).coeff(0, 0) == cplx(1.0));
  CHECK(g.S(1, 1).coeff(0, 0) == cplx(1.0));
  CHECK(g.S(0, 1).coeff(0, 0) == cplx(0.0));
  CHECK(g.S(0, 1).coeff(1, 1) == cplx(-1.0));
  CHECK(g.S(1, 0).coeff(1, 1) == cplx(-1.0));
  CHECK(g.S(0, 0).coeff(1, 1) == cplx(0.0));
  CHECK(g.S(3, 5).coeff(level::g, level::h) == cplx(-0.5));  // -sigma_gh / 2
  CHECK(g.S(5, 3).coeff(level::h, level::g) == cplx(-0.5));  // -sigma_hg / 2
  CHECK(g.S(2, 3).coeff(1, 1) == cplx(1.0));
  CHECK(g.S(2, 3).coeff(0, 0) == cplx(0.5));
}

TEST_CASE("limit dynamics") {
  SUBCASE("hold freezes populations and dephases") {
    const LimitState x{0.3, cplx(0.1, 0.2)};
    const LimitDerivative r = limit_rhs(x, {0.5, 0.0, 0.0});
    CHECK(r.d_gg == 0.0);
    CHECK(std::abs(r.d_hg + 0.25 * x.rho_hg) < 1e-15);
  }
  SUBCASE("SET-only rate independent of beta") {
    for (double beta : {0.0, 0.5, 3.0}) {
      const LimitDerivative r = limit_rhs({0.8, 0.0}, {beta, 0.4, 0.0});
      CHECK(r.d_gg == doctest::Approx(-0.5 * 0.16 * 0.8));
    }
  }
  SUBCASE("equilibria") {
    LimitState x = limit_equilibrium({0.0, 1.0, 0.0});
    CHECK(x.rho_gg == 0.0);
    CHECK(x.rho_hg == cplx(0.0));
    x = limit_equilibrium({0.0, 0.3, 0.3});
    CHECK(x.rho_gg == doctest::Approx(0.5));
    CHECK(std::abs(x.rho_hg + 0.5) < 1e-15);
    x = limit_equilibrium({0.3, 0.3, 0.3});
    CHECK(std::abs(x.rho_hg + 0.25) < 1e-15);
    CHECK_THROWS_AS(limit_equilibrium({0.5, 0.0, 0.0}), NoUniqueEquilibrium);
  }
  SUBCASE("equilibrium zeroes the right-hand side") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
      const DriveAmplitudes d = random_drives(rng);
      const LimitDerivative r = limit_rhs(limit_equilibrium(d), d);
      CHECK(std::abs(r.d_gg) < 1e-12);
      CHECK(std::abs(r.d_hg) < 1e-12);
    }
  }
  SUBCASE("state validation and round trip") {
    CHECK_THROWS_AS(LimitState({1.2, 0.0}).validate(), InvalidArgument);
    CHECK_THROWS_AS(LimitState({0.5, 0.6}).validate(), InvalidArgument);
    const LimitState x{0.25, cplx(0.1, -0.2)};
    const LimitState y = LimitState::from_matrix(x.matrix());
    CHECK(y.rho_gg == x.rho_gg);
    CHECK(y.rho_hg == x.rho_hg);
  }
}

TEST_CASE("output amplitudes") {
  const SwitchParameters p;
  const SLHModel undriven = build_primary(p);
  const auto zero = output_amplitudes(undriven, DensityMatrix::basis_state(undriven.space(), 0));
  for (const cplx z : zero) CHECK(z == cplx(0.0));

  // Relay parked in |h>: the POWER mode decouples and transmits fully.
  const cplx beta = 0.5;
  const SLHModel driven = displace(undriven, drive_vector(ModelKind::kPrimary, {beta, 0.0, 0.0}));
  const Index h_index = level::h * (undriven.space().total_dim() / 4);
  SteadyStateConfig cfg;
  cfg.integration.t_final = 10.0;
  cfg.integration.record_stride = 250;
  const auto ss = steady_state(driven, DensityMatrix::basis_state(undriven.space(), h_index), cfg);
  const auto out = output_amplitudes(driven, ss.state);
  // Three Fock levels truncate the coherent state at the 1e-5 level.
  CHECK(std::abs(out[1] + beta) < 1e-4 * std::abs(beta));
  CHECK(std::abs(out[0]) < 1e-4 * std::abs(beta));
}

TEST_CASE("presets") {
  const Preset fig2 = preset("paper-fig2");
  CHECK(fig2.params.Gamma == 0.3);
  CHECK(fig2.params.g_p == 50.0);
  CHECK(fig2.params.g_s == 10.0);
  CHECK(fig2.params.kappa_p == 50.0);
  CHECK(fig2.beta == cplx(0.5));
  CHECK(std::norm(fig2.beta) / std::norm(fig2.alpha) == doctest::Approx(10.0));
  CHECK(std::norm(fig2.alpha) == doctest::Approx(0.025));

  const Preset gaas = preset("gaas-inas");
  CHECK(gaas.params.g_p == doctest::Approx(2.0 * std::numbers::pi * 16.0));
  CHECK(gaas.params.Gamma == doctest::Approx(2.0 * std::numbers::pi * 0.1));
  const Preset nv = preset("gap-nv");
  CHECK(nv.params.kappa_s == doctest::Approx(2.0 * std::numbers::pi * 0.16));
  for (const auto& name : preset_names()) {
    CHECK(preset(name).name == name);
    CHECK_NOTHROW(preset(name).params.validate());
  }
  CHECK_THROWS_AS(preset("nope"), InvalidArgument);
  CHECK(parse_model_kind("intermediate") == ModelKind::kIntermediate);
  CHECK(to_string(ModelKind::kLimit) == "limit");
  CHECK_THROWS_AS(parse_model_kind("quantum"), InvalidArgument);
}
