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

#include "cqedswitch/models.hpp"

#include <cmath>
#include <numbers>

namespace cqedswitch {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_rate(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw InvalidArgument(std::string(name) + " must be a finite non-negative rate, got " +
                          std::to_string(v));
  }
}

bool close_rel(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Builds an n x n operator matrix from a sparse list of entries.
struct SBuilder {
  SBuilder(const HilbertSpace& space, int n) : n(n), S(static_cast<std::size_t>(n * n), Operator::zero(space)) {}
  void set(int row, int col, Operator op) { S[static_cast<std::size_t>(row * n + col)] = std::move(op); }
  int n;
  std::vector<Operator> S;
};

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kPrimary:
      return "primary";
    case ModelKind::kIntermediate:
      return "intermediate";
    case ModelKind::kLimit:
      return "limit";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "primary") return ModelKind::kPrimary;
  if (name == "intermediate") return ModelKind::kIntermediate;
  if (name == "limit") return ModelKind::kLimit;
  throw InvalidArgument("unknown model '" + std::string(name) +
                        "' (expected primary, intermediate or limit)");
}

void SwitchParameters::validate() const {
  require_rate(Gamma, "Gamma");
  require_rate(kappa_p, "kappa_p");
  require_rate(kappa_s, "kappa_s");
  require_rate(kappa_r, "kappa_r");
  require_rate(g_p, "g_p");
  require_rate(g_s, "g_s");
  require_rate(g_r, "g_r");
  if (!std::isfinite(k1) || k1 <= 0.0) throw InvalidArgument("k1 must be positive");
  if (!std::isfinite(k2) || k2 <= 0.0) throw InvalidArgument("k2 must be positive");
  for (int t : {trunc_p, trunc_s, trunc_r}) {
    if (t < 2) throw InvalidArgument("Fock truncation must be >= 2, got " + std::to_string(t));
  }
}

double enhanced_rate(const SwitchParameters& p) {
  p.validate();
  if (!close_rel(p.g_s, p.g_r) || !close_rel(p.kappa_s, p.kappa_r)) {
    throw InvalidArgument(
        "the intermediate model needs g_s == g_r and kappa_s == kappa_r; set gamma explicitly");
  }
  if (p.kappa_s == 0.0) throw InvalidArgument("kappa_s must be positive to define gamma");
  return p.g_s * p.g_s / p.kappa_s;
}

HilbertSpace primary_space(const SwitchParameters& p) {
  p.validate();
  return HilbertSpace({{factor::atom, 4},
                       {factor::power, p.trunc_p},
                       {factor::set, p.trunc_s},
                       {factor::reset, p.trunc_r}});
}

HilbertSpace intermediate_space() { return HilbertSpace::single(factor::atom, 3); }
HilbertSpace limit_space() { return HilbertSpace::single(factor::atom, 2); }

SLHModel build_primary(const SwitchParameters& p) {
  const HilbertSpace space = primary_space(p);
  auto atom = [&](int from, int to) { return embed(transition(4, from, to, factor::atom), factor::atom, space); };
  const Operator a = embed(annihilation(p.trunc_p, factor::power), factor::power, space);
  const Operator b = embed(annihilation(p.trunc_s, factor::set), factor::set, space);
  const Operator c = embed(annihilation(p.trunc_r, factor::reset), factor::reset, space);
  const Operator s_ge = atom(level::e, level::g);
  const Operator s_he = atom(level::e, level::h);
  const Operator s_gs = atom(level::s, level::g);
  const Operator s_hs = atom(level::s, level::h);

  const double sg = std::sqrt(p.Gamma);
  const Operator La = p.k1 * std::sqrt(p.kappa_p) * a;
  const Operator Lb = p.k2 * std::sqrt(p.kappa_s) * b;
  const Operator Lc = p.k2 * std::sqrt(p.kappa_r) * c;
  std::vector<Operator> L{La, La, Lb, Lb, Lc, Lc, sg * s_gs, sg * s_hs, sg * s_ge, sg * s_he};

  auto jc = [](double g, const Operator& mode, const Operator& sigma) {
    return (kI * g) * (mode.adjoint() * sigma - mode * sigma.adjoint());
  };
  Operator H = jc(p.k1 * p.k1 * p.g_p, a, s_ge) + jc(p.k2 * p.g_s, b, s_gs) + jc(p.k2 * p.g_r, c, s_hs);

  SBuilder S(space, 10);
  for (int i = 0; i < 10; ++i) S.set(i, i, Operator::identity(space));
  return SLHModel(space, std::move(S.S), std::move(L), std::move(H));
}

SLHModel build_intermediate(double gamma, double Gamma) {
  require_rate(gamma, "gamma");
  require_rate(Gamma, "Gamma");
  const HilbertSpace space = intermediate_space();
  const Operator pi_g = transition(3, level::g, level::g, factor::atom);
  const Operator pi_hs = transition(3, level::h, level::h, factor::atom) +
                         transition(3, level::s3, level::s3, factor::atom);
  const Operator s_gs = transition(3, level::s3, level::g, factor::atom);
  const Operator s_hs = transition(3, level::s3, level::h, factor::atom);
  const Operator id = Operator::identity(space);

  SBuilder S(space, 8);
  S.set(0, 0, pi_g);
  S.set(1, 1, pi_g);
  S.set(0, 1, -pi_hs);
  S.set(1, 0, -pi_hs);
  S.set(2, 3, id);
  S.set(3, 2, id);
  S.set(4, 5, id);
  S.set(5, 4, id);
  S.set(6, 6, id);
  S.set(7, 7, id);

  const double sg = std::sqrt(gamma);
  const double sG = std::sqrt(Gamma);
  std::vector<Operator> L{Operator::zero(space), Operator::zero(space), sg * s_gs, sg * s_gs,
                          sg * s_hs,             sg * s_hs,             sG * s_gs, sG * s_hs};
  return SLHModel(space, std::move(S.S), std::move(L), Operator::zero(space));
}

SLHModel build_limit() {
  const HilbertSpace space = limit_space();
  const Operator pi_g = transition(2, level::g, level::g, factor::atom);
  const Operator pi_h = transition(2, level::h, level::h, factor::atom);
  const Operator s_gh = transition(2, level::h, level::g, factor::atom);
  const Operator s_hg = transition(2, level::g, level::h, factor::atom);
  const Operator id = Operator::identity(space);

  SBuilder S(space, 6);
  S.set(0, 0, pi_g);
  S.set(1, 1, pi_g);
  S.set(0, 1, -pi_h);
  S.set(1, 0, -pi_h);
  S.set(2, 2, -0.5 * pi_g);
  S.set(3, 3, -0.5 * pi_g);
  S.set(2, 3, id - 0.5 * pi_g);
  S.set(3, 2, id - 0.5 * pi_g);
  S.set(4, 4, -0.5 * pi_h);
  S.set(5, 5, -0.5 * pi_h);
  S.set(4, 5, id - 0.5 * pi_h);
  S.set(5, 4, id - 0.5 * pi_h);
  for (int row : {2, 3}) {
    for (int col : {4, 5}) S.set(row, col, -0.5 * s_gh);
  }
  for (int row : {4, 5}) {
    for (int col : {2, 3}) S.set(row, col, -0.5 * s_hg);
  }
  std::vector<Operator> L(6, Operator::zero(space));
  return SLHModel(space, std::move(S.S), std::move(L), Operator::zero(space));
}

int port_count(ModelKind kind) {
  switch (kind) {
    case ModelKind::kPrimary:
      return 10;
    case ModelKind::kIntermediate:
      return 8;
    case ModelKind::kLimit:
      return 6;
  }
  return 0;
}

DriveVector drive_vector(ModelKind kind, const DriveAmplitudes& d) {
  DriveVector v(static_cast<std::size_t>(port_count(kind)), cplx(0.0));
  v[0] = d.beta;
  v[2] = d.alpha_s;
  v[4] = d.alpha_r;
  return v;
}

Generator displaced_intermediate_generator(double gamma, double Gamma, const DriveAmplitudes& d) {
  require_rate(gamma, "gamma");
  require_rate(Gamma, "Gamma");
  const HilbertSpace space = intermediate_space();
  const Operator pi_g = transition(3, level::g, level::g, factor::atom);
  const Operator pi_hs = transition(3, level::h, level::h, factor::atom) +
                         transition(3, level::s3, level::s3, factor::atom);
  const Operator s_gs = transition(3, level::s3, level::g, factor::atom);
  const Operator s_hs = transition(3, level::s3, level::h, factor::atom);

  const double sg = std::sqrt(gamma);
  auto drive = [&](cplx alpha, const Operator& sigma) {
    return (-kI * sg) * (alpha * sigma.adjoint() - std::conj(alpha) * sigma);
  };
  Operator H = drive(d.alpha_s, s_gs) + drive(d.alpha_r, s_hs);
  const double decay = std::sqrt(Gamma + 2.0 * gamma);
  std::vector<Operator> L{decay * s_gs, decay * s_hs, d.beta * pi_g, d.beta * pi_hs};
  return Generator{std::move(H), std::move(L)};
}

void LimitState::validate() const {
  if (!std::isfinite(rho_gg) || !std::isfinite(rho_hg.real()) || !std::isfinite(rho_hg.imag())) {
    throw InvalidArgument("limit state has non-finite entries");
  }
  if (rho_gg < -kPositivityTol || rho_gg > 1.0 + kPositivityTol) {
    throw InvalidArgument("limit state rho_gg = " + std::to_string(rho_gg) + " outside [0, 1]");
  }
  if (rho_gg * (1.0 - rho_gg) - std::norm(rho_hg) < -kPositivityTol) {
    throw InvalidArgument("limit state is not positive: rho_gg (1 - rho_gg) < |rho_hg|^2");
  }
}

DenseMatrix LimitState::matrix() const {
  DenseMatrix m(2, 2);
  m(level::g, level::g) = rho_gg;
  m(level::h, level::h) = 1.0 - rho_gg;
  m(level::h, level::g) = rho_hg;
  m(level::g, level::h) = std::conj(rho_hg);
  return m;
}

LimitState LimitState::from_matrix(const DenseMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw InvalidArgument("limit state needs a 2x2 matrix");
  return LimitState{rho(level::g, level::g).real(), rho(level::h, level::g)};
}

LimitDerivative limit_rhs(const LimitState& x, const DriveAmplitudes& d) {
  const double as2 = std::norm(d.alpha_s);
  const double ar2 = std::norm(d.alpha_r);
  const double b2 = std::norm(d.beta);
  LimitDerivative out;
  out.d_gg = 0.5 * (-as2 * x.rho_gg + ar2 * (1.0 - x.rho_gg));
  out.d_hg = -0.5 * d.alpha_s * std::conj(d.alpha_r) - x.rho_hg * (b2 + 0.5 * as2 + 0.5 * ar2);
  return out;
}

LimitState limit_equilibrium(const DriveAmplitudes& d) {
  const double as2 = std::norm(d.alpha_s);
  const double ar2 = std::norm(d.alpha_r);
  if (as2 + ar2 == 0.0) {
    throw NoUniqueEquilibrium("without SET or RESET drive every population is stationary");
  }
  LimitState x;
  x.rho_gg = ar2 / (as2 + ar2);
  x.rho_hg = -d.alpha_s * std::conj(d.alpha_r) / (2.0 * std::norm(d.beta) + as2 + ar2);
  return x;
}

std::vector<cplx> output_amplitudes(const SLHModel& displaced, const DensityMatrix& rho) {
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(displaced.n_ports()));
  for (const auto& l : displaced.L()) out.push_back(expectation(rho, l));
  return out;
}

Preset preset(std::string_view name) {
  if (name == "paper-fig2") {
    Preset p;
    p.name = "paper-fig2";
    p.description =
        "Gamma=0.3, g_p=50, g_s=g_r=10, kappa=50, beta=0.5, |alpha|^2=|beta|^2/10";
    p.beta = 0.5;
    p.alpha = std::sqrt(0.025);
    return p;
  }
  // Solid-state presets: rates are (g, kappa, Gamma) * 2 pi in rad/ns; time is
  // in ns. The couplings are taken equal on all three transitions and the
  // drives keep beta^2 / kappa = 0.005 with power gain 10, as in paper-fig2.
  auto solid_state = [](std::string n, std::string desc, double g, double kappa, double Gamma) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Preset p;
    p.name = std::move(n);
    p.description = std::move(desc);
    p.params.Gamma = two_pi * Gamma;
    p.params.kappa_p = p.params.kappa_s = p.params.kappa_r = two_pi * kappa;
    p.params.g_p = p.params.g_s = p.params.g_r = two_pi * g;
    const double beta2 = 0.005 * p.params.kappa_p;
    p.beta = std::sqrt(beta2);
    p.alpha = std::sqrt(beta2 / 10.0);
    return p;
  };
  if (name == "gaas-inas") {
    return solid_state("gaas-inas", "(g, kappa, Gamma) / 2pi = (16, 16, 0.1) GHz, time in ns", 16.0,
                       16.0, 0.1);
  }
  if (name == "gap-nv") {
    return solid_state("gap-nv", "(g, kappa, Gamma) / 2pi = (2.25, 0.16, 0.013) GHz, time in ns",
                       2.25, 0.16, 0.013);
  }
  throw InvalidArgument("unknown preset '" + std::string(name) +
                        "' (expected paper-fig2, gaas-inas or gap-nv)");
}

std::vector<std::string> preset_names() { return {"paper-fig2", "gaas-inas", "gap-nv"}; }

}  // namespace cqedswitch
