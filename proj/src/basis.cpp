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

#include "protectq/basis.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace protectq {

BasisSpec BasisSpec::MakeCharge(int cutoff) {
  if (cutoff < 1) throw InvalidArgumentError("charge basis: cutoff must be >= 1");
  BasisSpec b;
  b.kind = BasisKind::Charge;
  b.chargeCutoff = cutoff;
  return b;
}

BasisSpec BasisSpec::MakeOscillator(int levels, double phiZpf) {
  if (levels < 2) throw InvalidArgumentError("oscillator basis: levels must be >= 2");
  if (!(phiZpf > 0.0)) throw InvalidArgumentError("oscillator basis: phiZpf must be > 0");
  BasisSpec b;
  b.kind = BasisKind::Oscillator;
  b.oscLevels = levels;
  b.phiZpf = phiZpf;
  return b;
}

BasisSpec BasisSpec::MakeGrid(int points, double min, double max, bool periodic) {
  if (points < 3) throw InvalidArgumentError("grid basis: need at least 3 points");
  if (!(max > min)) throw InvalidArgumentError("grid basis: max must exceed min");
  BasisSpec b;
  b.kind = BasisKind::Grid;
  b.gridPoints = points;
  b.gridMin = min;
  b.gridMax = max;
  b.periodic = periodic;
  return b;
}

Index BasisSpec::dim() const {
  switch (kind) {
    case BasisKind::Charge: return 2 * static_cast<Index>(chargeCutoff) + 1;
    case BasisKind::Oscillator: return oscLevels;
    case BasisKind::Grid: return gridPoints;
  }
  return 0;
}

std::string BasisSpec::describe() const {
  char buf[128];
  switch (kind) {
    case BasisKind::Charge:
      std::snprintf(buf, sizeof buf, "charge(cutoff=%d)", chargeCutoff);
      break;
    case BasisKind::Oscillator:
      std::snprintf(buf, sizeof buf, "oscillator(levels=%d, phi_zpf=%.6g)", oscLevels,
                    phiZpf);
      break;
    case BasisKind::Grid:
      std::snprintf(buf, sizeof buf, "grid(points=%d, [%.6g,%.6g%s)", gridPoints, gridMin,
                    gridMax, periodic ? "), periodic" : "], open");
      break;
  }
  return buf;
}

ModeOperators charge_ops(int cutoff) {
  BasisSpec spec = BasisSpec::MakeCharge(cutoff);
  const Index d = spec.dim();
  ModeOperators ops;
  ops.basis = spec;

  DenseMatrix n = DenseMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) n(i, i) = static_cast<double>(i - cutoff);
  ops.number_op = ComplexMatrix::fromDense(n);
  DenseMatrix n2 = DenseMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) n2(i, i) = n(i, i) * n(i, i);
  ops.number_sq = ComplexMatrix::fromDense(n2);
  ops.cos_op = ComplexMatrix::fromDense(chargeCosK(cutoff, 1));
  ops.sin_op = ComplexMatrix::fromDense(chargeSinK(cutoff, 1));
  ops.identity = ComplexMatrix::fromDense(DenseMatrix::Identity(d, d));
  return ops;
}

DenseMatrix chargeCosK(int cutoff, int k) {
  if (cutoff < 1) throw InvalidArgumentError("chargeCosK: cutoff must be >= 1");
  if (k < 0) throw InvalidArgumentError("chargeCosK: harmonic index must be >= 0");
  const Index d = 2 * static_cast<Index>(cutoff) + 1;
  DenseMatrix m = DenseMatrix::Zero(d, d);
  if (k == 0) return DenseMatrix::Identity(d, d);
  // cos(k theta) = (S_+^k + S_-^k)/2 on charge eigenstates.
  for (Index i = 0; i + k < d; ++i) {
    m(i + k, i) += 0.5;
    m(i, i + k) += 0.5;
  }
  return m;
}

DenseMatrix chargeSinK(int cutoff, int k) {
  if (cutoff < 1) throw InvalidArgumentError("chargeSinK: cutoff must be >= 1");
  if (k < 0) throw InvalidArgumentError("chargeSinK: harmonic index must be >= 0");
  const Index d = 2 * static_cast<Index>(cutoff) + 1;
  DenseMatrix m = DenseMatrix::Zero(d, d);
  if (k == 0) return m;
  // sin(k theta) = (S_+^k - S_-^k)/(2i).
  for (Index i = 0; i + k < d; ++i) {
    m(i + k, i) += cplx(0.0, -0.5);
    m(i, i + k) += cplx(0.0, 0.5);
  }
  return m;
}

ModeOperators oscillator_ops(int levels, double eC, double eL) {
  if (!(eC > 0.0) || !(eL > 0.0))
    throw InvalidArgumentError("oscillator_ops: E_C and E_L must be > 0");
  return oscillator_ops_zpf(levels, std::pow(2.0 * eC / eL, 0.25));
}

ModeOperators oscillator_ops_zpf(int levels, double phiZpf) {
  BasisSpec spec = BasisSpec::MakeOscillator(levels, phiZpf);
  const Index d = spec.dim();
  ModeOperators ops;
  ops.basis = spec;
  ops.phiZpf = phiZpf;
  ops.nZpf = 0.5 / phiZpf;  // canonical pair: phi_zpf * n_zpf = 1/2

  Eigen::MatrixXd ladderSym = Eigen::MatrixXd::Zero(d, d);  // a + a^dagger
  for (Index m = 0; m + 1 < d; ++m) {
    const double v = std::sqrt(static_cast<double>(m + 1));
    ladderSym(m + 1, m) = v;
    ladderSym(m, m + 1) = v;
  }

  Eigen::MatrixXd phi = phiZpf * ladderSym;
  ops.phase_op = ComplexMatrix::fromDense(phi.cast<cplx>());

  DenseMatrix n = DenseMatrix::Zero(d, d);  // i*n_zpf*(a^dagger - a)
  for (Index m = 0; m + 1 < d; ++m) {
    const double v = ops.nZpf * std::sqrt(static_cast<double>(m + 1));
    n(m + 1, m) = cplx(0.0, v);
    n(m, m + 1) = cplx(0.0, -v);
  }
  ops.number_op = ComplexMatrix::fromDense(n);
  ops.number_sq = ComplexMatrix::fromDense(DenseMatrix(n * n));
  ops.phase_sq =
      ComplexMatrix::fromDense((phi * phi).eval().cast<cplx>());

  // cos/sin as exact matrix functions of the truncated phi.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(phi);
  if (es.info() != Eigen::Success)
    throw NumericalFailureError("oscillator_ops: phase eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const Eigen::MatrixXd& v = es.eigenvectors();
  Eigen::MatrixXd cosM = v * ev.array().cos().matrix().asDiagonal() * v.transpose();
  Eigen::MatrixXd sinM = v * ev.array().sin().matrix().asDiagonal() * v.transpose();
  ops.cos_op = ComplexMatrix::fromDense(cosM.cast<cplx>());
  ops.sin_op = ComplexMatrix::fromDense(sinM.cast<cplx>());
  ops.identity = ComplexMatrix::fromDense(DenseMatrix::Identity(d, d));
  return ops;
}

ModeOperators grid_ops(int points, double min, double max, bool periodic) {
  BasisSpec spec = BasisSpec::MakeGrid(points, min, max, periodic);
  const Index d = spec.dim();
  ModeOperators ops;
  ops.basis = spec;

  const double h = periodic ? (max - min) / points : (max - min) / (points - 1);
  ops.spacing = h;
  ops.nodes.resize(points);
  for (int j = 0; j < points; ++j) ops.nodes[j] = min + h * j;

  std::vector<Triplet> cosT, sinT, idT;
  cosT.reserve(d);
  sinT.reserve(d);
  idT.reserve(d);
  for (Index j = 0; j < d; ++j) {
    cosT.emplace_back(j, j, std::cos(ops.nodes[j]));
    sinT.emplace_back(j, j, std::sin(ops.nodes[j]));
    idT.emplace_back(j, j, 1.0);
  }
  ops.cos_op = ComplexMatrix::fromTriplets(d, cosT);
  ops.sin_op = ComplexMatrix::fromTriplets(d, sinT);
  ops.identity = ComplexMatrix::fromTriplets(d, idT);

  std::vector<Triplet> phiT;
  phiT.reserve(d);
  for (Index j = 0; j < d; ++j) phiT.emplace_back(j, j, ops.nodes[j]);
  ops.phase_op = ComplexMatrix::fromTriplets(d, phiT);

  ops.number_op = gridFirstDerivative(ops).scaled(cplx(0.0, -1.0));
  ops.number_sq = gridLaplacian(ops).scaled(-1.0);
  std::vector<Triplet> phi2T;
  phi2T.reserve(d);
  for (Index j = 0; j < d; ++j)
    phi2T.emplace_back(j, j, ops.nodes[j] * ops.nodes[j]);
  ops.phase_sq = ComplexMatrix::fromTriplets(d, phi2T);
  return ops;
}

ComplexMatrix gridLaplacian(const ModeOperators& grid) {
  const Index d = grid.basis.gridPoints;
  const double invH2 = 1.0 / (grid.spacing * grid.spacing);
  std::vector<Triplet> ts;
  ts.reserve(3 * static_cast<size_t>(d));
  for (Index j = 0; j < d; ++j) {
    ts.emplace_back(j, j, -2.0 * invH2);
    const Index up = j + 1, dn = j - 1;
    if (up < d) ts.emplace_back(j, up, invH2);
    if (dn >= 0) ts.emplace_back(j, dn, invH2);
  }
  if (grid.basis.periodic) {
    ts.emplace_back(0, d - 1, invH2);
    ts.emplace_back(d - 1, 0, invH2);
  }
  return ComplexMatrix::fromTriplets(d, ts);
}

ComplexMatrix gridFirstDerivative(const ModeOperators& grid) {
  const Index d = grid.basis.gridPoints;
  const double inv2H = 1.0 / (2.0 * grid.spacing);
  std::vector<Triplet> ts;
  ts.reserve(2 * static_cast<size_t>(d));
  for (Index j = 0; j < d; ++j) {
    const Index up = j + 1, dn = j - 1;
    if (up < d) ts.emplace_back(j, up, inv2H);
    if (dn >= 0) ts.emplace_back(j, dn, -inv2H);
  }
  if (grid.basis.periodic) {
    ts.emplace_back(0, d - 1, -inv2H);
    ts.emplace_back(d - 1, 0, inv2H);
  }
  return ComplexMatrix::fromTriplets(d, ts);
}

ComplexMatrix gridKinetic(const ModeOperators& grid, double eC) {
  if (!(eC > 0.0)) throw InvalidArgumentError("gridKinetic: E_C must be > 0");
  return gridLaplacian(grid).scaled(-4.0 * eC);
}

ComplexMatrix gridKineticGauged(const ModeOperators& grid, double eC,
                                double nGate) {
  if (!(eC > 0.0)) throw InvalidArgumentError("gridKineticGauged: E_C must be > 0");
  if (!grid.basis.periodic)
    throw InvalidArgumentError("gridKineticGauged: offset charge requires a periodic grid");
  ComplexMatrix k = gridLaplacian(grid).scaled(-4.0 * eC);
  k = k.plus(gridFirstDerivative(grid).scaled(cplx(0.0, 8.0 * eC * nGate)));
  k = k.plus(grid.identity.scaled(4.0 * eC * nGate * nGate));
  return k;
}

ComplexMatrix gridDiagonal(const ModeOperators& grid,
                           const std::vector<double>& values) {
  const Index d = grid.basis.gridPoints;
  if (static_cast<Index>(values.size()) != d)
    throw BasisMismatchError("gridDiagonal: sample count does not match grid");
  std::vector<Triplet> ts;
  ts.reserve(values.size());
  for (Index j = 0; j < d; ++j) ts.emplace_back(j, j, values[j]);
  return ComplexMatrix::fromTriplets(d, ts);
}

}  // namespace protectq
