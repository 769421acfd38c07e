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

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "protectq/basis.hpp"

namespace protectq {

// All energies are E/h in GHz. Phases are in radians, offset charge in units
// of 2e, external flux in units of the flux quantum.

// Single compact mode with a gate: 4E_C (n - n_g)^2 - E_J cos(theta).
struct ChargeModeSpec {
  double eC = 0.0;
  double eJ = 0.0;
};

// Single extended mode with a shunt inductor:
// 4E_C n^2 - E_J cos(phi) + (E_L/2) (phi - 2 pi phi_ext)^2.
struct FluxModeSpec {
  double eC = 0.0;
  double eJ = 0.0;
  double eL = 0.0;
};

// Two-mode circuit (compact theta with a gate, extended phi with a shunt):
// 4E_Ct (n_t - n_g)^2 + 4E_Cp n_p^2 + E_L (phi - pi phi_ext)^2
//   + 2E_J cos(phi) cos(theta).
struct TwoModeSpec {
  double eCTheta = 0.0;
  double eCPhi = 0.0;
  double eJ = 0.0;
  double eL = 0.0;
};

// Compact mode shunted by two multi-channel junctions with transmissions
// tJ1/tJ2 and gap delta (GHz): 4E_C (n - n_g)^2 + U_tot(theta) with
// U_tot(theta) = U_1(theta - pi phi_ext) + U_2(theta + pi phi_ext),
// U_i(x) = -delta * sum_c sqrt(1 - T_c sin^2(x/2)).
struct HybridSpec {
  double eC = 0.0;
  double delta = 0.0;
  std::vector<double> tJ1;
  std::vector<double> tJ2;
};

using CircuitSpec = std::variant<ChargeModeSpec, FluxModeSpec, TwoModeSpec, HybridSpec>;

enum class CircuitFamily { ChargeMode, FluxMode, TwoMode, Hybrid };
CircuitFamily familyOf(const CircuitSpec& spec);
std::string familyName(CircuitFamily f);

struct ControlPoint {
  double nGate = 0.0;
  double phiExt = 0.0;
};

struct CircuitModel {
  CircuitSpec spec;
  ControlPoint point;
  std::vector<BasisSpec> basisPlan;  // one entry per mode
  std::string label;                 // preset name, empty for ad hoc models

  CircuitFamily family() const { return familyOf(spec); }
  int modeCount() const { return family() == CircuitFamily::TwoMode ? 2 : 1; }
};

void validateSpec(const CircuitSpec& spec);
void validatePlan(const CircuitModel& model);

// Default basis plan sized from the model's energy scales; the convergence
// loop enlarges it as needed.
std::vector<BasisSpec> defaultBasisPlan(const CircuitSpec& spec);

// Mode operators realized for a model's basis plan. For two-mode models the
// theta (charge) factor is kron-major when phi is an oscillator and
// kron-minor when phi is a grid; thetaOuter records which.
struct CircuitOperators {
  std::vector<ModeOperators> modes;
  bool thetaOuter = true;

  Index dim() const;
  // Strides of each mode's index in the flattened tensor basis.
  Index stride(int mode) const;
};

CircuitOperators buildOperators(const CircuitModel& model);

// Hamiltonian assembly. Dimensions follow the basis plan; Hermitian by
// construction.
ComplexMatrix buildHamiltonian(const CircuitModel& model, const CircuitOperators& ops);

ComplexMatrix h_charge(const ChargeModeSpec& s, const ControlPoint& pt,
                       const ModeOperators& mode);
ComplexMatrix h_flux(const FluxModeSpec& s, const ControlPoint& pt,
                     const ModeOperators& mode);
ComplexMatrix h_two_mode(const TwoModeSpec& s, const ControlPoint& pt,
                         const ModeOperators& theta, const ModeOperators& phi,
                         bool thetaOuter);
ComplexMatrix h_hybrid(const HybridSpec& s, const ControlPoint& pt,
                       const ModeOperators& mode);

// Multi-channel junction band energy at fixed phase difference.
double junction_potential(double delta, std::span<const double> transmissions,
                          double theta);

// d/dtheta of junction_potential; the T -> 1 limit is taken analytically so
// near-unity channels stay finite (the jump at theta = pi resolves to the
// midpoint 0).
double junction_potential_derivative(double delta, std::span<const double> transmissions,
                                     double theta);

// Total two-junction potential of the hybrid circuit at flux phi_ext.
double hybridPotential(const HybridSpec& s, double phiExt, double theta);

// Trigonometric series of uniform samples over [0, 2pi):
// f(x) ~ a0 + sum_k (cosK[k-1] cos(kx) + sinK[k-1] sin(kx)).
struct FourierSeries {
  double a0 = 0.0;
  std::vector<double> cosK;
  std::vector<double> sinK;
};
FourierSeries fourier_harmonics(std::span<const double> samples, int kMax);

// Evaluate a FourierSeries at x.
double fourierEval(const FourierSeries& f, double x);

enum class NoiseChannel { Charge, Flux };
std::string channelName(NoiseChannel ch);
bool channelPresent(CircuitFamily family, NoiseChannel ch);

// Operator coupling the circuit to a noise channel, in the model's basis:
// charge -> -8 E_C n (gated mode), flux -> -E_L phi (shunted mode); for the
// hybrid circuit the flux channel is the phi_ext derivative of U_tot.
// Constant offsets are dropped (they do not move transition elements).
ComplexMatrix noise_coupling(const CircuitModel& model, const CircuitOperators& ops,
                             NoiseChannel ch);

// Bare operator of the channel's conjugate variable (n or phi) embedded in
// the full tensor basis; used for the log-suppression metric.
ComplexMatrix bareChannelOperator(const CircuitModel& model, const CircuitOperators& ops,
                                  NoiseChannel ch);

}  // namespace protectq
