// Copyright 2026 The protectq Authors
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

// Circuit Hamiltonians against independent oracles: exact charge parabolas,
// analytic harmonic gaps, separable two-mode enumeration, explicit Kronecker
// assembly, junction band limits, and coupling-operator forms.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "protectq/circuits.hpp"
#include "protectq/eigensolver.hpp"
#include "protectq/spectral.hpp"

using namespace protectq;

namespace {

constexpr double kPi = std::numbers::pi;

CircuitModel makeModel(CircuitSpec spec, double nGate = 0.0, double phiExt = 0.0) {
  CircuitModel m;
  m.spec = std::move(spec);
  m.point = {nGate, phiExt};
  return m;
}

// a-major Kronecker product written out longhand as an assembly oracle.
DenseMatrix kronOracle(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index ia = 0; ia < a.rows(); ++ia)
    for (Index ja = 0; ja < a.cols(); ++ja)
      for (Index ib = 0; ib < b.rows(); ++ib)
        for (Index jb = 0; jb < b.cols(); ++jb)
          out(ia * b.rows() + ib, ja * b.cols() + jb) = a(ia, ja) * b(ib, jb);
  return out;
}

}  // namespace

TEST_CASE("charge_hamiltonian_entries_are_gated_parabola_and_half_shifts") {
  const ChargeModeSpec s{0.7, 3.0};
  const ControlPoint pt{0.3, 0.0};
  const ModeOperators mode = charge_ops(4);
  const DenseMatrix h = h_charge(s, pt, mode).toDense();
  for (Index i = 0; i < h.rows(); ++i) {
    const double n = static_cast<double>(i) - 4.0;
    CHECK(h(i, i).real() ==
          doctest::Approx(4.0 * s.eC * (n - pt.nGate) * (n - pt.nGate)));
    if (i + 1 < h.rows()) {
      CHECK(h(i, i + 1).real() == doctest::Approx(-s.eJ / 2.0));
      CHECK(std::abs(h(i, i + 1).imag()) < 1e-15);
    }
    if (i + 2 < h.rows()) CHECK(std::abs(h(i, i + 2)) < 1e-15);
  }
}

TEST_CASE("ej_zero_charge_bands_are_exact_parabolas") {
  const double eC = 1.3;
  for (double nGate : {0.0, 0.2, 0.5}) {
    CircuitModel m = makeModel(ChargeModeSpec{eC, 0.0}, nGate);
    const EigenSolution sol = converge(m, 5);
    std::vector<double> expected;
    for (int n = -6; n <= 6; ++n)
      expected.push_back(4.0 * eC * (n - nGate) * (n - nGate));
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < 5; ++i)
      CHECK(sol.energies[static_cast<size_t>(i)] ==
            doctest::Approx(expected[static_cast<size_t>(i)]).epsilon(1e-12));
  }
  // Half-integer gate: the lowest pair is exactly degenerate.
  CircuitModel half = makeModel(ChargeModeSpec{eC, 0.0}, 0.5);
  const EigenSolution sol = converge(half, 2);
  CHECK(sol.e01() == doctest::Approx(0.0));
}

TEST_CASE("flux_mode_ej_zero_is_harmonic_with_analytic_gap") {
  const double eC = 2.1, eL = 0.9;
  for (double phiExt : {0.0, 0.5}) {
    CircuitModel m = makeModel(FluxModeSpec{eC, 0.0, eL}, 0.0, phiExt);
    const EigenSolution sol = converge(m, 4);
    const double gap = std::sqrt(8.0 * eC * eL);
    for (int i = 0; i + 1 < 4; ++i)
      CHECK(sol.energies[static_cast<size_t>(i + 1)] -
                sol.energies[static_cast<size_t>(i)] ==
            doctest::Approx(gap).epsilon(1e-8));
    // The flux offset only displaces the well; the ground energy stays
    // omega/2 above the potential minimum of zero.
    CHECK(sol.energies[0] == doctest::Approx(gap / 2.0).epsilon(1e-8));
  }
}

TEST_CASE("two_mode_ej_zero_separates_into_band_plus_oscillator") {
  const TwoModeSpec s{1.1, 0.8, 0.0, 0.3};
  const double nGate = 0.2, phiExt = 0.7;
  CircuitModel m = makeModel(s, nGate, phiExt);
  const EigenSolution sol = converge(m, 6);
  // E(n, p) = 4 E_Ct (n - n_g)^2 + omega (p + 1/2) with the phi curvature
  // E_L phi^2 = (2 E_L / 2) phi^2, so omega = sqrt(16 E_Ct_phi E_L).
  const double omega = std::sqrt(16.0 * s.eCPhi * s.eL);
  std::vector<double> expected;
  for (int n = -4; n <= 4; ++n)
    for (int p = 0; p < 8; ++p)
      expected.push_back(4.0 * s.eCTheta * (n - nGate) * (n - nGate) +
                         omega * (p + 0.5));
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 6; ++i)
    CHECK(sol.energies[static_cast<size_t>(i)] ==
          doctest::Approx(expected[static_cast<size_t>(i)]).epsilon(1e-7));
}

TEST_CASE("two_mode_assembly_matches_explicit_kron_oracle") {
  const TwoModeSpec s{0.9, 1.4, 2.2, 0.6};
  const ControlPoint pt{0.15, 0.35};
  CircuitModel m = makeModel(s, pt.nGate, pt.phiExt);
  m.basisPlan = {BasisSpec::MakeCharge(3), BasisSpec::MakeOscillator(6,
                 std::pow(2.0 * s.eCPhi / (2.0 * s.eL), 0.25))};
  const CircuitOperators ops = buildOperators(m);
  const DenseMatrix h = buildHamiltonian(m, ops).toDense();

  const ModeOperators theta = charge_ops(3);
  const ModeOperators phi = oscillator_ops(6, s.eCPhi, 2.0 * s.eL);
  const DenseMatrix iTheta = DenseMatrix::Identity(theta.dim(), theta.dim());
  const DenseMatrix iPhi = DenseMatrix::Identity(phi.dim(), phi.dim());
  DenseMatrix hTheta(theta.dim(), theta.dim());
  hTheta.setZero();
  for (Index i = 0; i < theta.dim(); ++i) {
    const double n = static_cast<double>(i) - 3.0;
    hTheta(i, i) = 4.0 * s.eCTheta * (n - pt.nGate) * (n - pt.nGate);
  }
  const DenseMatrix phiShift =
      phi.phase_op->toDense() - kPi * pt.phiExt * iPhi;
  const DenseMatrix hPhi = 4.0 * s.eCPhi * phi.number_sq.toDense() +
                           s.eL * phiShift * phiShift;
  DenseMatrix expected = kronOracle(hTheta, iPhi) + kronOracle(iTheta, hPhi) +
                         2.0 * s.eJ *
                             kronOracle(theta.cos_op.toDense(),
                                        phi.cos_op.toDense());
  if (!ops.thetaOuter)
    expected = kronOracle(iPhi, hTheta) + kronOracle(hPhi, iTheta) +
               2.0 * s.eJ *
                   kronOracle(phi.cos_op.toDense(), theta.cos_op.toDense());
  CHECK((h - expected).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("junction_taylor_limit_reduces_to_cosine_with_ej_sum_t_over_four") {
  const double delta = 11.0;
  const std::vector<double> t{0.004, 0.006, 0.002};
  const double eJ = delta * (t[0] + t[1] + t[2]) / 4.0;
  const double u0 = junction_potential(delta, t, 0.0);
  for (double theta : {0.3, 1.1, 2.0, 3.0}) {
    const double u = junction_potential(delta, t, theta) - u0;
    CHECK(u == doctest::Approx(eJ * (1.0 - std::cos(theta))).epsilon(2e-3));
  }
}

TEST_CASE("unit_transmission_band_is_abs_cos_half_with_analytic_fourier") {
  const double delta = 5.0;
  const std::vector<double> t{1.0};
  for (double theta : {0.0, 0.9, 2.5, kPi, 4.0})
    CHECK(junction_potential(delta, t, theta) ==
          doctest::Approx(-delta * std::abs(std::cos(theta / 2.0))).epsilon(1e-12));
  const int n = 4096;
  std::vector<double> samples(n);
  for (int i = 0; i < n; ++i)
    samples[static_cast<size_t>(i)] =
        junction_potential(delta, t, 2.0 * kPi * i / n);
  const FourierSeries f = fourier_harmonics(samples, 4);
  CHECK(f.a0 == doctest::Approx(-2.0 * delta / kPi).epsilon(1e-6));
  for (int k = 1; k <= 4; ++k) {
    const double exact =
        -delta * (4.0 / kPi) * ((k % 2 == 1) ? 1.0 : -1.0) / (4.0 * k * k - 1.0);
    CHECK(f.cosK[static_cast<size_t>(k - 1)] ==
          doctest::Approx(exact).epsilon(1e-4));
    CHECK(std::abs(f.sinK[static_cast<size_t>(k - 1)]) < 1e-10);
  }
}

TEST_CASE("junction_derivative_matches_finite_difference_and_unit_t_midpoint") {
  const double delta = 7.0;
  const std::vector<double> t{0.95, 0.4};
  for (double theta : {0.4, 1.3, 2.2, 2.9, 5.1}) {
    const double h = 1e-6;
    const double fd = (junction_potential(delta, t, theta + h) -
                       junction_potential(delta, t, theta - h)) /
                      (2.0 * h);
    CHECK(junction_potential_derivative(delta, t, theta) ==
          doctest::Approx(fd).epsilon(1e-6));
  }
  // T = 1 band kinks at theta = pi; the derivative resolves to the midpoint.
  const std::vector<double> unit{1.0};
  CHECK(junction_potential_derivative(delta, unit, kPi) == doctest::Approx(0.0));
}

TEST_CASE("identical_junctions_at_half_flux_make_a_pi_periodic_potential") {
  HybridSpec s;
  s.eC = 0.3;
  s.delta = 9.0;
  s.tJ1 = {0.9, 0.55};
  s.tJ2 = {0.9, 0.55};
  for (double theta : {0.1, 0.7, 1.9, 3.0})
    CHECK(hybridPotential(s, 0.5, theta) ==
          doctest::Approx(hybridPotential(s, 0.5, theta + kPi)).epsilon(1e-12));
  const int n = 2048;
  std::vector<double> samples(n);
  for (int i = 0; i < n; ++i)
    samples[static_cast<size_t>(i)] = hybridPotential(s, 0.5, 2.0 * kPi * i / n);
  const FourierSeries f = fourier_harmonics(samples, 6);
  // Only even harmonics survive; cos(2 theta) dominates.
  for (int k = 1; k <= 6; k += 2)
    CHECK(std::abs(f.cosK[static_cast<size_t>(k - 1)]) < 1e-10 * s.delta);
  CHECK(std::abs(f.cosK[1]) > 1e-3 * s.delta);
}

TEST_CASE("hybrid_small_t_reduces_to_interferometer_cosine") {
  HybridSpec s;
  s.eC = 0.3;
  s.delta = 20.0;
  s.tJ1 = {0.01, 0.02};
  s.tJ2 = {0.01, 0.02};
  const double eJ1 = s.delta * 0.03 / 4.0;
  for (double phiExt : {0.0, 0.3, 0.5}) {
    const int n = 1024;
    std::vector<double> samples(n);
    for (int i = 0; i < n; ++i)
      samples[static_cast<size_t>(i)] =
          hybridPotential(s, phiExt, 2.0 * kPi * i / n);
    const FourierSeries f = fourier_harmonics(samples, 2);
    // U_tot ~ const - 2 E_J1 cos(pi phi_ext) cos(theta) to first order in T.
    const double expected = -2.0 * eJ1 * std::cos(kPi * phiExt);
    if (std::abs(expected) > 1e-12)
      CHECK(f.cosK[0] == doctest::Approx(expected).epsilon(1e-2));
    else
      CHECK(std::abs(f.cosK[0]) < 1e-4 * eJ1);
  }
}

TEST_CASE("hybrid_charge_basis_agrees_with_direct_grid_solve") {
  HybridSpec s;
  s.eC = 0.3;
  s.delta = 8.0;
  s.tJ1 = {0.8, 0.5};
  s.tJ2 = {0.9};
  CircuitModel m = makeModel(s, 0.2, 0.3);
  ConvergeOptions opt;
  opt.tol = 1e-9;
  const EigenSolution basisSol = converge(m, 3, opt);

  const ModeOperators grid = grid_ops(1501, -kPi, kPi, true);
  std::vector<double> u(grid.nodes.size());
  for (size_t i = 0; i < u.size(); ++i)
    u[i] = hybridPotential(s, m.point.phiExt, grid.nodes[i]);
  const ComplexMatrix h =
      gridKineticGauged(grid, s.eC, m.point.nGate).plus(gridDiagonal(grid, u));
  const EigsResult gridSol = eigsLowest(h, {.k = 3});
  for (int i = 0; i < 3; ++i)
    CHECK(basisSol.energies[static_cast<size_t>(i)] ==
          doctest::Approx(gridSol.values(i)).epsilon(1e-5));
}

TEST_CASE("fourier_round_trip_recovers_known_coefficients") {
  const int n = 256;
  std::vector<double> samples(n);
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * kPi * i / n;
    samples[static_cast<size_t>(i)] =
        1.5 + 2.0 * std::cos(x) + 0.5 * std::sin(3.0 * x) - 0.25 * std::cos(4.0 * x);
  }
  const FourierSeries f = fourier_harmonics(samples, 5);
  CHECK(f.a0 == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(f.cosK[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.sinK[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.cosK[3] == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(std::abs(f.cosK[1]) < 1e-12);
  for (double x : {0.0, 0.4, 2.0})
    CHECK(fourierEval(f, x) ==
          doctest::Approx(1.5 + 2.0 * std::cos(x) + 0.5 * std::sin(3.0 * x) -
                          0.25 * std::cos(4.0 * x))
              .epsilon(1e-10));
}

TEST_CASE("channel_presence_follows_circuit_family") {
  CHECK(channelPresent(CircuitFamily::ChargeMode, NoiseChannel::Charge));
  CHECK(!channelPresent(CircuitFamily::ChargeMode, NoiseChannel::Flux));
  CHECK(!channelPresent(CircuitFamily::FluxMode, NoiseChannel::Charge));
  CHECK(channelPresent(CircuitFamily::FluxMode, NoiseChannel::Flux));
  CHECK(channelPresent(CircuitFamily::TwoMode, NoiseChannel::Charge));
  CHECK(channelPresent(CircuitFamily::TwoMode, NoiseChannel::Flux));
  CHECK(channelPresent(CircuitFamily::Hybrid, NoiseChannel::Charge));
  CHECK(channelPresent(CircuitFamily::Hybrid, NoiseChannel::Flux));
}

TEST_CASE("charge_coupling_is_minus_eight_ec_number_operator") {
  CircuitModel m = makeModel(ChargeModeSpec{0.6, 4.0}, 0.25);
  m.basisPlan = {BasisSpec::MakeCharge(5)};
  const CircuitOperators ops = buildOperators(m);
  const DenseMatrix nc = noise_coupling(m, ops, NoiseChannel::Charge).toDense();
  for (Index i = 0; i < nc.rows(); ++i) {
    const double n = static_cast<double>(i) - 5.0;
    CHECK(nc(i, i).real() == doctest::Approx(-8.0 * 0.6 * n));
  }
  CHECK(nc.cwiseAbs().sum() ==
        doctest::Approx(nc.diagonal().cwiseAbs().sum()));  // diagonal operator
  CHECK_THROWS_AS(noise_coupling(m, ops, NoiseChannel::Flux),
                  ChannelNotPresentError);
}

TEST_CASE("flux_coupling_is_minus_el_phase_operator") {
  CircuitModel m = makeModel(FluxModeSpec{1.0, 2.0, 0.5}, 0.0, 0.3);
  m.basisPlan = {BasisSpec::MakeOscillator(12, std::pow(2.0 / 0.5, 0.25))};
  const CircuitOperators ops = buildOperators(m);
  const DenseMatrix nc = noise_coupling(m, ops, NoiseChannel::Flux).toDense();
  const DenseMatrix expected = -0.5 * ops.modes[0].phase_op->toDense();
  CHECK((nc - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(noise_coupling(m, ops, NoiseChannel::Charge),
                  ChannelNotPresentError);
}

TEST_CASE("hybrid_flux_coupling_matches_hamiltonian_flux_derivative") {
  HybridSpec s;
  s.eC = 0.4;
  s.delta = 10.0;
  s.tJ1 = {0.7, 0.3};
  s.tJ2 = {0.85};
  CircuitModel m = makeModel(s, 0.1, 0.35);
  m.basisPlan = {BasisSpec::MakeCharge(16)};
  const CircuitOperators ops = buildOperators(m);
  const DenseMatrix nc = noise_coupling(m, ops, NoiseChannel::Flux).toDense();

  const double h = 1e-5;
  CircuitModel plus = m, minus = m;
  plus.point.phiExt += h;
  minus.point.phiExt -= h;
  const DenseMatrix fd = (buildHamiltonian(plus, ops).toDense() -
                          buildHamiltonian(minus, ops).toDense()) /
                         (2.0 * h);
  // Equal up to a multiple of the identity (constant offsets are dropped).
  const cplx offset = (nc - fd)(0, 0);
  const DenseMatrix ident = DenseMatrix::Identity(nc.rows(), nc.cols());
  CHECK((nc - fd - offset * ident).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("two_mode_couplings_embed_on_the_right_factors") {
  const TwoModeSpec s{1.2, 0.9, 3.0, 0.4};
  CircuitModel m = makeModel(s, 0.3, 0.2);
  m.basisPlan = {BasisSpec::MakeCharge(3),
                 BasisSpec::MakeOscillator(5, std::pow(2.0 * 0.9 / 0.8, 0.25))};
  const CircuitOperators ops = buildOperators(m);
  const DenseMatrix qc = noise_coupling(m, ops, NoiseChannel::Charge).toDense();
  const DenseMatrix fc = noise_coupling(m, ops, NoiseChannel::Flux).toDense();
  // Basis vector at (theta index i, phi index j) per the stride contract.
  const Index sTheta = ops.stride(0), sPhi = ops.stride(1);
  const Index dim = ops.dim();
  auto unit = [dim](Index at) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
    e(at) = 1.0;
    return e;
  };
  const ModeOperators theta = charge_ops(3);
  const ModeOperators phi = *std::find_if(
      ops.modes.begin(), ops.modes.end(),
      [](const ModeOperators& mo) { return mo.basis.kind == BasisKind::Oscillator; });
  for (Index it = 0; it < 7; ++it)
    for (Index ip = 0; ip < 5; ++ip) {
      const Index row = it * sTheta + ip * sPhi;
      // Charge coupling: -8 E_Ct n_theta, diagonal in both factors.
      CHECK(std::abs(qc(row, row) -
                     cplx(-8.0 * s.eCTheta * (static_cast<double>(it) - 3.0), 0.0)) <
            1e-12);
      // Flux coupling: -E_L phi acts only on the phi factor.
      for (Index jp = 0; jp < 5; ++jp) {
        const Index col = it * sTheta + jp * sPhi;
        CHECK(std::abs(fc(row, col) - (-s.eL) * phi.phase_op->coeff(ip, jp)) <
              1e-12);
      }
      if (it + 1 < 7)
        CHECK(std::abs(fc(row, (it + 1) * sTheta + ip * sPhi)) < 1e-14);
    }
  (void)unit;
}

TEST_CASE("bare_channel_operators_are_unscaled_conjugate_variables") {
  CircuitModel m = makeModel(ChargeModeSpec{0.6, 4.0}, 0.25);
  m.basisPlan = {BasisSpec::MakeCharge(5)};
  const CircuitOperators ops = buildOperators(m);
  const DenseMatrix bare = bareChannelOperator(m, ops, NoiseChannel::Charge).toDense();
  CHECK(bare(0, 0).real() == doctest::Approx(-5.0));
  CHECK(bare(10, 10).real() == doctest::Approx(5.0));

  CircuitModel f = makeModel(FluxModeSpec{1.0, 2.0, 0.5}, 0.0, 0.3);
  f.basisPlan = {BasisSpec::MakeOscillator(12, std::pow(2.0 / 0.5, 0.25))};
  const CircuitOperators fops = buildOperators(f);
  const DenseMatrix fbare = bareChannelOperator(f, fops, NoiseChannel::Flux).toDense();
  CHECK((fbare - fops.modes[0].phase_op->toDense()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spec_validation_rejects_nonpositive_scales_and_bad_transmissions") {
  CHECK_THROWS_AS(validateSpec(ChargeModeSpec{-1.0, 5.0}), InvalidArgumentError);
  CHECK_THROWS_AS(validateSpec(ChargeModeSpec{0.0, 5.0}), InvalidArgumentError);
  CHECK_THROWS_AS(validateSpec(FluxModeSpec{1.0, 2.0, -0.1}), InvalidArgumentError);
  CHECK_THROWS_AS(validateSpec(TwoModeSpec{1.0, -2.0, 3.0, 0.4}), InvalidArgumentError);
  HybridSpec bad;
  bad.eC = 0.3;
  bad.delta = 10.0;
  bad.tJ1 = {1.2};
  bad.tJ2 = {0.5};
  CHECK_THROWS_AS(validateSpec(bad), InvalidArgumentError);
  bad.tJ1 = {};
  CHECK_THROWS_AS(validateSpec(bad), InvalidArgumentError);
  // E_J = 0 is allowed (decoupled junction limit).
  validateSpec(ChargeModeSpec{1.0, 0.0});
}

TEST_CASE("default_basis_plans_pick_family_appropriate_kinds") {
  const auto chargePlan = defaultBasisPlan(ChargeModeSpec{0.2, 20.0});
  REQUIRE(chargePlan.size() == 1);
  CHECK(chargePlan[0].kind == BasisKind::Charge);

  const auto fluxPlan = defaultBasisPlan(FluxModeSpec{0.46, 8.11, 0.24});
  REQUIRE(fluxPlan.size() == 1);
  CHECK(fluxPlan[0].kind == BasisKind::Oscillator);

  const auto twoPlan = defaultBasisPlan(TwoModeSpec{0.03, 20.0, 10.0, 0.05});
  REQUIRE(twoPlan.size() == 2);
  CHECK(twoPlan[0].kind == BasisKind::Charge);

  HybridSpec hs;
  hs.eC = 0.284;
  hs.delta = 45.0;
  hs.tJ1 = {1.0, 1.0, 0.6};
  hs.tJ2 = {0.99, 0.78};
  const auto hybridPlan = defaultBasisPlan(hs);
  REQUIRE(hybridPlan.size() == 1);
  CHECK(hybridPlan[0].kind == BasisKind::Charge);
}

TEST_CASE("assembled_hamiltonians_are_hermitian_across_families") {
  std::vector<CircuitModel> models;
  models.push_back(makeModel(ChargeModeSpec{0.2, 20.0}, 0.3));
  models.push_back(makeModel(FluxModeSpec{0.46, 8.11, 0.24}, 0.0, 0.37));
  models.push_back(makeModel(TwoModeSpec{0.9, 1.4, 2.2, 0.6}, 0.15, 0.35));
  HybridSpec hs;
  hs.eC = 0.3;
  hs.delta = 8.0;
  hs.tJ1 = {0.8, 0.5};
  hs.tJ2 = {0.9};
  models.push_back(makeModel(hs, 0.2, 0.3));
  for (CircuitModel& m : models) {
    m.basisPlan = defaultBasisPlan(m.spec);
    const CircuitOperators ops = buildOperators(m);
    CHECK(buildHamiltonian(m, ops).hermiticityDefect() < 1e-11);
  }
}
