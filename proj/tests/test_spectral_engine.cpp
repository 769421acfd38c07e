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

// Spectral engine against independent oracles: analytic harmonic spectra and
// matrix elements, closed-form Gaussian wavefunctions and overlaps, separate
// finite-difference slope evaluations, and the dual-route grid validation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "protectq/presets.hpp"
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

}  // namespace

TEST_CASE("converged_harmonic_spectrum_matches_sqrt_eight_ec_el") {
  CircuitModel m = makeModel(FluxModeSpec{1.0, 0.0, 1.0});
  const EigenSolution sol = converge(m, 3);
  CHECK(sol.converged);
  const double gap = std::sqrt(8.0);
  CHECK(sol.e01() == doctest::Approx(gap).epsilon(1e-10));
  CHECK(sol.energies[2] - sol.energies[1] == doctest::Approx(gap).epsilon(1e-10));
}

TEST_CASE("transmon_converges_within_a_modest_charge_cutoff") {
  CircuitModel m = makeModel(ChargeModeSpec{0.2, 20.0});
  ConvergeOptions opt;
  opt.tol = 1e-10;
  const EigenSolution sol = converge(m, 5, opt);
  CHECK(sol.converged);
  REQUIRE(sol.basisUsed.size() == 1);
  CHECK(sol.basisUsed[0].kind == BasisKind::Charge);
  CHECK(sol.basisUsed[0].chargeCutoff <= 40);
}

TEST_CASE("converged_solution_states_are_orthonormal") {
  CircuitModel m = makeModel(ChargeModeSpec{0.2, 20.0}, 0.2);
  const EigenSolution sol = converge(m, 5);
  const Eigen::MatrixXcd gram = sol.states.adjoint() * sol.states;
  const Eigen::MatrixXcd ident =
      Eigen::MatrixXcd::Identity(gram.rows(), gram.cols());
  CHECK((gram - ident).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("charge_truncation_is_variational_in_the_ground_energy") {
  CircuitModel m = makeModel(ChargeModeSpec{0.2, 20.0}, 0.1);
  double prev = std::numeric_limits<double>::infinity();
  for (int cutoff : {8, 12, 16, 20}) {
    m.basisPlan = {BasisSpec::MakeCharge(cutoff)};
    const EigenSolution sol = eigensolve(m, 2);
    CHECK(sol.energies[0] <= prev + 1e-13);
    prev = sol.energies[0];
  }
}

TEST_CASE("ej_zero_charge_matrix_element_is_the_zero_point_amplitude") {
  const double eC = 0.5, eL = 1.0;
  CircuitModel m = makeModel(FluxModeSpec{eC, 0.0, eL});
  const EigenSolution sol = converge(m, 2);
  CircuitModel used = m;
  used.basisPlan = sol.basisUsed;
  const CircuitOperators ops = buildOperators(used);
  const double me = std::abs(matrix_element(sol, ops.modes[0].number_op, 0, 1));
  const double nZpf = std::pow(eL / (32.0 * eC), 0.25);
  CHECK(nZpf == doctest::Approx(0.5));
  CHECK(me == doctest::Approx(nZpf).epsilon(1e-10));
}

TEST_CASE("matrix_elements_are_hermitian_and_validated") {
  CircuitModel m = makeModel(ChargeModeSpec{0.2, 20.0}, 0.2);
  const EigenSolution sol = converge(m, 3);
  CircuitModel used = m;
  used.basisPlan = sol.basisUsed;
  const CircuitOperators ops = buildOperators(used);
  const cplx a = matrix_element(sol, ops.modes[0].number_op, 0, 1);
  const cplx b = matrix_element(sol, ops.modes[0].number_op, 1, 0);
  CHECK(std::abs(a - std::conj(b)) < 1e-12);
  CHECK(pairBlockRadius(sol, ops.modes[0].number_op) >= std::abs(a) - 1e-12);
  CHECK_THROWS_AS(matrix_element(sol, ops.modes[0].number_op, 0, 7),
                  InvalidArgumentError);
  const ComplexMatrix wrong = ComplexMatrix::identity(3);
  CHECK_THROWS_AS(matrix_element(sol, wrong, 0, 1), InvalidArgumentError);
}

TEST_CASE("dispersion_slope_matches_independent_finite_difference") {
  const CircuitModel m = presetModel("blochnium");
  CircuitModel at = m;
  at.point.phiExt = 0.3;
  const SlopeEstimate est = dispersion_slope(at, "phi_ext", 0.3);
  ConvergeOptions opt;
  opt.tol = 1e-10;
  auto e01At = [&](double phi) {
    CircuitModel p = m;
    p.point.phiExt = phi;
    return converge(p, 2, opt).e01();
  };
  const double h = 1e-3;
  const double fd = (e01At(0.3 + h) - e01At(0.3 - h)) / (2.0 * h);
  CHECK(est.slope == doctest::Approx(fd).epsilon(1e-3));
  CHECK(est.converged);
}

TEST_CASE("slope_vanishes_at_the_gate_symmetry_point") {
  CircuitModel m = makeModel(ChargeModeSpec{1.0, 5.0});
  const SlopeEstimate est = dispersion_slope(m, "n_gate", 0.0);
  CHECK(std::abs(est.slope) < 1e-8);
}

TEST_CASE("dispersion_amplitude_matches_extreme_point_difference") {
  // Charge qubit regime: dispersion is set by the band edges at 0 and 1/2.
  CircuitModel m = makeModel(ChargeModeSpec{1.0, 2.0});
  const AmplitudeReport rep = dispersion_amplitude(m, "n_gate", 2);
  ConvergeOptions opt;
  auto e01At = [&](double ng) {
    CircuitModel p = m;
    p.point.nGate = ng;
    return converge(p, 2, opt).e01();
  };
  const double direct = std::abs(e01At(0.0) - e01At(0.5));
  CHECK(rep.converged);
  CHECK(rep.amplitude == doctest::Approx(direct).epsilon(1e-6));
  CHECK(rep.mean > 0.0);
  CHECK(rep.eta == doctest::Approx(-std::log(rep.amplitude / rep.mean)));
  // Extremes of the charge dispersion sit at integer and half-integer gates.
  const double foldMax = std::min(rep.argMax, 1.0 - rep.argMax);
  const double foldMin = std::min(rep.argMin, 1.0 - rep.argMin);
  CHECK(std::min(foldMax, std::abs(foldMax - 0.5)) < 1e-3);
  CHECK(std::min(foldMin, std::abs(foldMin - 0.5)) < 1e-3);
}

TEST_CASE("sweep_energies_match_per_point_converge_results") {
  const CircuitModel m = presetModel("blochnium");
  SweepRequest req;
  req.parameter = "phi_ext";
  req.grid = {0.1, 0.15, 0.2, 0.25, 0.3};
  req.k = 3;
  const SpectrumTable table = sweep(m, req);
  CHECK(table.converged);
  REQUIRE(table.grid.size() == 5);
  ConvergeOptions opt;
  for (size_t i = 0; i < table.grid.size(); ++i) {
    CHECK(table.pointConverged[i] == 1);
    CircuitModel p = m;
    p.point.phiExt = table.grid[i];
    const EigenSolution sol = converge(p, 3, opt);
    for (int j = 0; j < 3; ++j)
      CHECK(table.energies[i][static_cast<size_t>(j)] ==
            doctest::Approx(sol.energies[static_cast<size_t>(j)]).epsilon(1e-6));
  }
}

TEST_CASE("sweep_is_deterministic_across_thread_counts") {
  const CircuitModel m = presetModel("heavy-fluxonium");
  SweepRequest req;
  req.parameter = "phi_ext";
  req.grid = {0.0, 0.125, 0.25, 0.375, 0.5};
  req.k = 2;
  const SpectrumTable one = sweep(m, req);
  req.threads = 3;
  const SpectrumTable three = sweep(m, req);
  for (size_t i = 0; i < one.grid.size(); ++i)
    for (size_t j = 0; j < 2; ++j)
      CHECK(one.energies[i][j] == three.energies[i][j]);  // bitwise
}

TEST_CASE("spectral_entry_points_validate_their_arguments") {
  CircuitModel m = makeModel(ChargeModeSpec{1.0, 2.0});
  ConvergeOptions bad;
  bad.tol = -1.0;
  CHECK_THROWS_AS(converge(m, 2, bad), InvalidArgumentError);
  CHECK_THROWS_AS(converge(m, 1), InvalidArgumentError);
  CHECK_THROWS_AS(dispersion_slope(m, "n_gate", 0.2, 0.0), InvalidArgumentError);
  SweepRequest req;
  req.parameter = "n_gate";
  CHECK_THROWS_AS(sweep(m, req), InvalidArgumentError);
  req.grid = {0.0, 0.5, 0.5};
  CHECK_THROWS_AS(sweep(m, req), InvalidArgumentError);
  req.grid = {0.0, 0.5};
  req.parameter = "E_L";
  CHECK_THROWS_AS(sweep(m, req), InvalidArgumentError);
  CHECK_THROWS_AS(dispersion_amplitude(m, "E_C", 2), InvalidArgumentError);
}

TEST_CASE("set_parameter_updates_spec_fields_and_rejects_absent_channels") {
  CircuitModel m = makeModel(FluxModeSpec{1.0, 2.0, 0.5}, 0.0, 0.3);
  setParameter(m, "E_J", 3.5);
  CHECK(std::get<FluxModeSpec>(m.spec).eJ == 3.5);
  setParameter(m, "phi_ext", 0.4);
  CHECK(m.point.phiExt == 0.4);
  CHECK_THROWS_AS(setParameter(m, "n_gate", 0.1), InvalidArgumentError);
  CHECK_THROWS_AS(setParameter(m, "E_C_theta", 1.0), InvalidArgumentError);
  CHECK(parameterIsPeriodic("n_gate"));
  CHECK(parameterIsPeriodic("phi_ext"));
  CHECK(!parameterIsPeriodic("E_J"));
  const auto names = parameterNames(CircuitFamily::TwoMode);
  CHECK(std::find(names.begin(), names.end(), "E_C_phi") != names.end());
}

TEST_CASE("ej_zero_ground_wavefunction_is_the_displaced_gaussian") {
  const double eC = 0.5, eL = 1.0, phiExt = 0.25;
  CircuitModel m = makeModel(FluxModeSpec{eC, 0.0, eL}, 0.0, phiExt);
  ConvergeOptions tight;
  tight.tol = 1e-11;  // amplitude tails converge slower than energies
  const EigenSolution sol = converge(m, 2, tight);
  const std::vector<double> x = defaultPhaseWindow(sol.basisUsed[0], 401);
  const Wavefunction1D w = wavefunction_phase(sol, 0, x);
  const double sigma = std::pow(2.0 * eC / eL, 0.25);  // phi zero-point spread
  const double center = 2.0 * kPi * phiExt;
  const double sign = w.amplitude[w.x.size() / 2].real() >= 0.0 ? 1.0 : -1.0;
  for (size_t i = 0; i < w.x.size(); ++i) {
    const double u = (w.x[i] - center) / sigma;
    const double exact = std::pow(2.0 * kPi * sigma * sigma, -0.25) *
                         std::exp(-0.25 * u * u);
    CHECK(std::abs(sign * w.amplitude[i].real() - exact) < 1e-6);
    CHECK(std::abs(w.amplitude[i].imag()) < 1e-9);
  }
}

TEST_CASE("phase_wavefunction_norm_is_one_on_a_covering_window") {
  const CircuitModel m = presetModel("heavy-fluxonium");
  const EigenSolution sol = converge(m, 2);
  const std::vector<double> x = defaultPhaseWindow(sol.basisUsed[0], 2001);
  for (int level : {0, 1}) {
    const Wavefunction1D w = wavefunction_phase(sol, level, x);
    double norm = 0.0;
    for (const cplx& a : w.amplitude) norm += std::norm(a);
    norm *= w.cell;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("charge_wavefunction_is_normalized_and_gate_symmetric") {
  CircuitModel m = makeModel(ChargeModeSpec{0.2, 20.0}, 0.0);
  const EigenSolution sol = converge(m, 2);
  const Wavefunction1D w = wavefunction_charge(sol, 0);
  CHECK(w.cell == 1.0);
  double norm = 0.0;
  for (const cplx& a : w.amplitude) norm += std::norm(a);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  // At n_gate = 0 the ground state is even in n.
  const size_t mid = w.x.size() / 2;
  CHECK(w.x[mid] == 0.0);
  for (size_t d = 1; d <= 5; ++d)
    CHECK(std::abs(w.amplitude[mid + d] - w.amplitude[mid - d]) < 1e-9);
}

TEST_CASE("two_mode_wavefunction_norm_is_one") {
  const CircuitModel m = presetModel("zeropi-ideal");
  const EigenSolution sol = converge(m, 2);
  const std::vector<double> theta = defaultPhaseWindow(sol.basisUsed[0], 1001);
  const std::vector<double> phi = defaultPhaseWindow(sol.basisUsed[1], 801);
  const Wavefunction2D w = wavefunction2d(sol, 0, theta, phi);
  const double norm = w.amplitude.array().abs2().sum() * w.cellTheta * w.cellPhi;
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(wavefunction2d(sol, 5, theta, phi), InvalidArgumentError);
}

TEST_CASE("default_phase_window_spans_the_charge_period_half_open") {
  const std::vector<double> x = defaultPhaseWindow(BasisSpec::MakeCharge(10), 8);
  REQUIRE(x.size() == 8);
  CHECK(x.front() == doctest::Approx(-kPi));
  CHECK(x.back() == doctest::Approx(kPi - 2.0 * kPi / 8.0));
}

TEST_CASE("disjointness_of_gaussian_densities_matches_closed_form") {
  // Overlap of identical unit-width Gaussians: integral |psi|^4 = 1/(2 sqrt(pi)).
  const int n = 4001;
  const double lo = -12.0, hi = 12.0;
  const double dx = (hi - lo) / (n - 1);
  auto gaussian = [&](double center) {
    Wavefunction1D w;
    w.cell = dx;
    for (int i = 0; i < n; ++i) {
      const double x = lo + i * dx;
      w.x.push_back(x);
      w.amplitude.push_back(std::pow(2.0 * kPi, -0.25) *
                            std::exp(-0.25 * (x - center) * (x - center)));
    }
    return w;
  };
  const Wavefunction1D a = gaussian(0.0);
  CHECK(disjointness(a, a) == doctest::Approx(1.0 / (2.0 * std::sqrt(kPi))).epsilon(1e-8));
  // Densities ten sigma apart share essentially no support.
  CHECK(disjointness(a, gaussian(10.0)) < 1e-10);
  Wavefunction1D mismatched = a;
  mismatched.cell *= 2.0;
  CHECK_THROWS_AS(disjointness(a, mismatched), InvalidArgumentError);
}

TEST_CASE("log_suppression_handles_zero_and_negative_magnitudes") {
  CHECK(logSuppression(std::exp(-3.0)) == doctest::Approx(3.0));
  CHECK(std::isinf(logSuppression(0.0)));
  CHECK(std::isinf(logSuppression(-1.0)));
}

TEST_CASE("cross_validation_discrepancy_is_small_across_families") {
  CHECK(cross_validate(presetModel("transmon"), 5).maxRelativeDiscrepancy < 1e-7);
  CHECK(cross_validate(presetModel("blochnium"), 5).maxRelativeDiscrepancy < 1e-6);
  CHECK(cross_validate(presetModel("hybrid-cos2theta"), 4).maxRelativeDiscrepancy <
        1e-6);
}

TEST_CASE("protection_trends_toward_half_flux_in_heavy_fluxonium") {
  // Approaching half flux the charge matrix element between the well-localized
  // doublet falls monotonically; the density overlap is not monotone (barrier
  // tails grow as the wells come into resonance) but stays disjoint throughout.
  const CircuitModel base = presetModel("heavy-fluxonium");
  std::vector<double> lnMe;
  for (double phiExt : {0.3, 0.35, 0.4, 0.45}) {
    CircuitModel m = base;
    m.point.phiExt = phiExt;
    const EigenSolution sol = converge(m, 2);
    CircuitModel used = m;
    used.basisPlan = sol.basisUsed;
    const CircuitOperators ops = buildOperators(used);
    lnMe.push_back(
        std::log(std::abs(matrix_element(sol, ops.modes[0].number_op, 0, 1))));
    const std::vector<double> x = defaultPhaseWindow(sol.basisUsed[0], 1501);
    const Wavefunction1D w0 = wavefunction_phase(sol, 0, x);
    const Wavefunction1D w1 = wavefunction_phase(sol, 1, x);
    CHECK(disjointness(w0, w1) < 1e-6);
  }
  for (size_t i = 0; i + 1 < lnMe.size(); ++i) CHECK(lnMe[i + 1] < lnMe[i]);
}

TEST_CASE("eigensolve_with_prebuilt_operators_matches_plain_eigensolve") {
  CircuitModel m = makeModel(ChargeModeSpec{0.2, 20.0}, 0.2);
  m.basisPlan = {BasisSpec::MakeCharge(25)};
  const CircuitOperators ops = buildOperators(m);
  const EigenSolution a = eigensolve(m, 4);
  const EigenSolution b = eigensolveWithOps(m, ops, 4);
  for (int i = 0; i < 4; ++i)
    CHECK(a.energies[static_cast<size_t>(i)] == b.energies[static_cast<size_t>(i)]);
}
