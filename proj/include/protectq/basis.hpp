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

#include <optional>
#include <string>
#include <vector>

#include "protectq/matrix.hpp"

namespace protectq {

enum class BasisKind { Charge, Oscillator, Grid };

// One mode's representation. Charge: integer charge states -cutoff..cutoff.
// Oscillator: harmonic ladder with zero-point phase spread phiZpf.
// Grid: uniform real-space phase grid, periodic over [min,max) or open
// (Dirichlet) over [min,max].
struct BasisSpec {
  BasisKind kind = BasisKind::Charge;

  int chargeCutoff = 0;

  int oscLevels = 0;
  double phiZpf = 0.0;

  int gridPoints = 0;
  double gridMin = 0.0;
  double gridMax = 0.0;
  bool periodic = false;

  static BasisSpec MakeCharge(int cutoff);
  static BasisSpec MakeOscillator(int levels, double phiZpf);
  static BasisSpec MakeGrid(int points, double min, double max, bool periodic);

  Index dim() const;
  std::string describe() const;
};

// Operators of a single mode in its representation. phase_op is absent for
// the charge basis (the compact phase has no well-defined operator there;
// cos/sin carry the physics).
struct ModeOperators {
  BasisSpec basis;
  ComplexMatrix number_op;                 // n
  std::optional<ComplexMatrix> phase_op;   // phi
  ComplexMatrix cos_op;                    // cos(phi)
  ComplexMatrix sin_op;                    // sin(phi)
  ComplexMatrix identity;

  // Cached squares used by Hamiltonian assembly. For grids number_sq is the
  // -D2 stencil (the standard discrete kinetic form), not (-i D1)^2.
  ComplexMatrix number_sq;
  ComplexMatrix phase_sq;                  // only when phase_op is present

  // Grid extras: node coordinates and spacing.
  std::vector<double> nodes;
  double spacing = 0.0;

  // Oscillator extras.
  double phiZpf = 0.0;
  double nZpf = 0.0;

  Index dim() const { return basis.dim(); }
};

// Charge basis of dimension 2*cutoff+1: n = diag(-cutoff..cutoff), cos/sin
// act as half-shifts between adjacent charge states.
ModeOperators charge_ops(int cutoff);

// cos(k*theta), sin(k*theta) in the charge basis (k-step shift matrices).
// k beyond the representable range (k > 2*cutoff) yields the zero matrix,
// consistent with basis truncation.
DenseMatrix chargeCosK(int cutoff, int k);
DenseMatrix chargeSinK(int cutoff, int k);

// Harmonic-oscillator basis for an extended phase variable governed by
// 4*E_C*n^2 + (E_L/2)*phi^2: phiZpf = (2 E_C / E_L)^(1/4),
// nZpf = (E_L / 32 E_C)^(1/4). cos/sin of phi are exact matrix functions of
// the truncated phi (via its eigendecomposition).
ModeOperators oscillator_ops(int levels, double eC, double eL);
ModeOperators oscillator_ops_zpf(int levels, double phiZpf);

// Uniform finite-difference grid with 2nd-order stencils. Periodic grids
// span [min, max) with wraparound; open grids span [min, max] with implicit
// zero boundary values. number_op = -i * D1.
ModeOperators grid_ops(int points, double min, double max, bool periodic);

// Second derivative stencil (the Laplacian D2) and first derivative D1 for a
// grid mode; used to assemble kinetic terms.
ComplexMatrix gridLaplacian(const ModeOperators& grid);
ComplexMatrix gridFirstDerivative(const ModeOperators& grid);

// Kinetic term 4*E_C*(-D2) for an ungated mode, or the offset-charge gated
// periodic form 4*E_C*(-D2 + 2i*nGate*D1 + nGate^2*I).
ComplexMatrix gridKinetic(const ModeOperators& grid, double eC);
ComplexMatrix gridKineticGauged(const ModeOperators& grid, double eC,
                                double nGate);

// Diagonal operator from samples at the grid nodes.
ComplexMatrix gridDiagonal(const ModeOperators& grid,
                           const std::vector<double>& values);

}  // namespace protectq
