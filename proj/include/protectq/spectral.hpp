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

#pragma once

#include <string>
#include <vector>

#include "protectq/circuits.hpp"
#include "protectq/eigensolver.hpp"

namespace protectq {

// Lowest-k eigenpairs of a circuit model. Energies ascending in GHz; states
// are orthonormal columns under the deterministic gauge (largest-magnitude
// component real positive).
struct EigenSolution {
  std::vector<double> energies;
  Eigen::MatrixXcd states;
  std::vector<BasisSpec> basisUsed;
  bool thetaOuter = true;
  bool converged = true;
  double maxResidual = 0.0;

  int levels() const { return static_cast<int>(energies.size()); }
  double e01() const { return energies.at(1) - energies.at(0); }
};

struct SolveOptions {
  double tol = 1e-10;       // eigensolver residual tolerance (relative)
  bool preferSparse = false;
};

// Diagonalize on the model's basis plan as given (no growth).
EigenSolution eigensolve(const CircuitModel& model, int k,
                         const SolveOptions& opt = {});

// As above but with prebuilt operators (reused across sweep points).
EigenSolution eigensolveWithOps(const CircuitModel& model,
                                const CircuitOperators& ops, int k,
                                const SolveOptions& opt = {});

struct ConvergeOptions {
  double tol = 1e-8;        // GHz: allowed movement of tracked levels per round
  Index dimCeiling = 120000;
  int maxRounds = 8;
  SolveOptions solve;
};

// Grow the basis plan (charge cutoff x1.5, oscillator levels x1.5, grid
// points x2, window widening when an open-grid state reaches the boundary)
// until the lowest k energies are stable to tol. basisUsed records the
// validated plan; converged=false when the ceiling cuts the loop short.
EigenSolution converge(const CircuitModel& model, int k,
                       const ConvergeOptions& opt = {});

// Sweepable parameters: control point ("n_gate", "phi_ext") or spec fields
// ("E_C", "E_J", "E_L", "E_C_theta", "E_C_phi", "delta").
void setParameter(CircuitModel& model, const std::string& name, double value);
bool parameterIsPeriodic(const std::string& name);
std::vector<std::string> parameterNames(CircuitFamily family);

struct SweepRequest {
  std::string parameter;
  std::vector<double> grid;
  int k = 5;
  double tol = 1e-8;
  int threads = 1;
  SolveOptions solve;
};

// Energies over a parameter grid. The basis is converged at both grid
// extremes and the merged plan is reused for every point; per-point flags
// record solver failures (excluded rows keep NaN energies).
struct SpectrumTable {
  std::string parameter;
  std::vector<double> grid;
  std::vector<std::vector<double>> energies;  // [point][level]
  std::vector<char> pointConverged;
  std::vector<BasisSpec> basisUsed;
  bool converged = true;
};

SpectrumTable sweep(const CircuitModel& model, const SweepRequest& req);

struct SlopeEstimate {
  double slope = 0.0;           // dE01/dparameter, GHz per unit
  double errorEstimate = 0.0;   // Richardson step-halving discrepancy
  bool converged = true;
};

// Central difference of E01 with one Richardson halving, on a basis
// converged once at the expansion point.
SlopeEstimate dispersion_slope(const CircuitModel& model,
                               const std::string& parameter, double at,
                               double step = 1e-4, int k = 2,
                               const ConvergeOptions& opt = {});

struct AmplitudeReport {
  double amplitude = 0.0;  // max-min of E01 over one parameter period
  double mean = 0.0;       // average E01 over the coarse scan
  double eta = 0.0;        // -ln(amplitude/mean); +inf when amplitude is 0
  double argMax = 0.0;
  double argMin = 0.0;
  int coarsePoints = 0;
  int unconverged = 0;     // coarse points excluded after solver failure
  bool converged = true;
};

// Dispersion amplitude of E01 over one period of a periodic parameter:
// coarse scan then golden-section refinement of both extrema. Refinement is
// skipped when the coarse range sits at the solver noise floor.
AmplitudeReport dispersion_amplitude(const CircuitModel& model,
                                     const std::string& parameter, int k = 2,
                                     const ConvergeOptions& opt = {},
                                     int coarsePoints = 101, int threads = 1);

// <i|op|j> in the solution's gauge.
cplx matrix_element(const EigenSolution& sol, const ComplexMatrix& op, int i,
                    int j);

// Rotation-invariant strength of op on the {0,1} pair: spectral radius of
// the 2x2 restricted block. Reported alongside raw elements when the pair is
// quasi-degenerate (raw off-diagonal elements are gauge-dependent there).
double pairBlockRadius(const EigenSolution& sol, const ComplexMatrix& op);

// -ln(x) for x > 0, +infinity otherwise (log-suppression exponents eta, zeta).
double logSuppression(double magnitude);

struct Wavefunction1D {
  std::vector<double> x;        // phase nodes, or charge indices
  std::vector<cplx> amplitude;  // psi(x)
  double cell = 1.0;            // quadrature cell (dx; 1 for charge indices)
};

struct Wavefunction2D {
  std::vector<double> theta;
  std::vector<double> phi;
  Eigen::MatrixXcd amplitude;   // theta rows, phi columns
  double cellTheta = 1.0;
  double cellPhi = 1.0;
};

// Uniform sampling window adapted to the basis support.
std::vector<double> defaultPhaseWindow(const BasisSpec& basis, int points);

// Real-space amplitudes of a single-mode solution on an explicit grid;
// normalized so sum |psi|^2 * cell ~ 1 when the grid covers the support.
Wavefunction1D wavefunction_phase(const EigenSolution& sol, int level,
                                  const std::vector<double>& x);

// Charge-basis coefficients of a single-mode solution (cell = 1).
Wavefunction1D wavefunction_charge(const EigenSolution& sol, int level);

// Joint (theta, phi) amplitudes of a two-mode solution.
Wavefunction2D wavefunction2d(const EigenSolution& sol, int level,
                              const std::vector<double>& theta,
                              const std::vector<double>& phi);

// Overlap integral of probability densities: sum |a|^2 |b|^2 * cell.
double disjointness(const Wavefunction1D& a, const Wavefunction1D& b);
double disjointness(const Wavefunction2D& a, const Wavefunction2D& b);

struct CrossValidationReport {
  std::vector<double> basisEnergies;
  std::vector<double> gridEnergies;  // Richardson-extrapolated
  double maxRelativeDiscrepancy = 0.0;
  bool converged = true;
  std::string detail;
};

// Solve the model in its basis-expansion representation and independently on
// a real-space finite-difference grid (second order, Richardson-extrapolated
// over a mesh halving); report the worst per-level relative discrepancy,
// with |energy| floored at 1 GHz in the denominator.
CrossValidationReport cross_validate(const CircuitModel& model, int k = 5,
                                     double tol = 1e-8);

}  // namespace protectq
