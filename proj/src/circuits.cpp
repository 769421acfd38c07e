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

#include "protectq/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace protectq {
namespace {

constexpr double kPi = std::numbers::pi;

// Samples per period when expanding a potential into harmonics; far beyond
// any charge cutoff the solver reaches, so aliasing stays below rounding.
constexpr int kPotentialSamples = 8192;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

template <typename Fn>
void forEachNZ(const ComplexMatrix& m, Fn&& fn) {
  if (m.isSparse()) {
    const SparseCMatrix& s = m.sparse();
    for (int k = 0; k < s.outerSize(); ++k)
      for (SparseCMatrix::InnerIterator it(s, k); it; ++it)
        fn(it.row(), it.col(), it.value());
  } else {
    const DenseMatrix& d = m.dense();
    for (Index j = 0; j < d.cols(); ++j)
      for (Index i = 0; i < d.rows(); ++i)
        if (d(i, j) != cplx(0.0, 0.0)) fn(i, j, d(i, j));
  }
}

// scale * (A tensor B) emitted on the flattened index i_a*strideA + i_b*strideB.
// Factor entries at or below dropTol are skipped: trig operators of an
// oscillator mode are dense by construction but numerically banded, and
// keeping their rounding-level tail would square the nonzero count.
void addKron(std::vector<Triplet>& ts, const ComplexMatrix& a, Index strideA,
             const ComplexMatrix& b, Index strideB, cplx scale,
             double dropTol = 1e-14) {
  forEachNZ(a, [&](Index ia, Index ja, cplx va) {
    if (std::abs(va) <= dropTol) return;
    const cplx left = scale * va;
    forEachNZ(b, [&](Index ib, Index jb, cplx vb) {
      if (std::abs(vb) <= dropTol) return;
      ts.emplace_back(ia * strideA + ib * strideB, ja * strideA + jb * strideB,
                      left * vb);
    });
  });
}

bool isPeriodicFullTurnGrid(const BasisSpec& b) {
  return b.kind == BasisKind::Grid && b.periodic &&
         std::abs((b.gridMax - b.gridMin) - 2.0 * kPi) <= 1e-9;
}

void requireCompactBasis(const BasisSpec& b, const char* what) {
  if (b.kind == BasisKind::Charge) return;
  if (isPeriodicFullTurnGrid(b)) return;
  throw InvalidArgumentError(std::string(what) +
                             " needs a charge basis or a periodic grid spanning 2*pi");
}

void requireExtendedBasis(const BasisSpec& b, const char* what) {
  if (b.kind == BasisKind::Oscillator) return;
  if (b.kind == BasisKind::Grid && !b.periodic) return;
  throw InvalidArgumentError(std::string(what) +
                             " needs an oscillator basis or an open grid");
}

void validateBasisSpec(const BasisSpec& b, const char* where) {
  switch (b.kind) {
    case BasisKind::Charge:
      if (b.chargeCutoff < 1)
        throw InvalidArgumentError(std::string(where) + ": charge cutoff must be >= 1");
      return;
    case BasisKind::Oscillator:
      if (b.oscLevels < 2)
        throw InvalidArgumentError(std::string(where) + ": oscillator needs >= 2 levels");
      if (!(b.phiZpf > 0.0))
        throw InvalidArgumentError(std::string(where) + ": oscillator phiZpf must be > 0");
      return;
    case BasisKind::Grid:
      if (b.gridPoints < 3)
        throw InvalidArgumentError(std::string(where) + ": grid needs >= 3 points");
      if (!(b.gridMax > b.gridMin))
        throw InvalidArgumentError(std::string(where) + ": grid max must exceed min");
      return;
  }
  throw InvalidArgumentError(std::string(where) + ": unknown basis kind");
}

void requirePositive(double v, const char* name) {
  if (!(v > 0.0))
    throw InvalidArgumentError(std::string(name) + " must be > 0, got " + fmt(v));
}

void requireNonNegative(double v, const char* name) {
  if (!(v >= 0.0))
    throw InvalidArgumentError(std::string(name) + " must be >= 0, got " + fmt(v));
}

void requireTransmissions(const std::vector<double>& ts, const char* name) {
  if (ts.empty())
    throw InvalidArgumentError(std::string(name) + " must list at least one channel");
  for (double t : ts)
    if (!(t >= 0.0 && t <= 1.0))
      throw InvalidArgumentError(std::string(name) +
                                 " transmissions must lie in [0, 1], got " + fmt(t));
}

// 4*E_C*(n - n_g)^2 expressed through the mode's cached operators; for grids
// this reproduces the gauged kinetic stencil because number_sq is -D2.
ComplexMatrix gatedKinetic(const ModeOperators& mode, double eC, double nGate) {
  ComplexMatrix h = mode.number_sq.scaled(4.0 * eC);
  if (nGate != 0.0) {
    h = h.plus(mode.number_op.scaled(-8.0 * eC * nGate))
            .plus(mode.identity.scaled(4.0 * eC * nGate * nGate));
  }
  return h;
}

// Periodic potential expanded into charge-basis shift matrices. Harmonics
// whose magnitude is below dropTol contribute nothing measurable and are
// skipped; k beyond 2*cutoff has no matrix elements in the truncated basis.
DenseMatrix chargeBasisPotential(int cutoff, const FourierSeries& series,
                                 double dropTol) {
  const Index dim = 2 * static_cast<Index>(cutoff) + 1;
  DenseMatrix pot = DenseMatrix::Zero(dim, dim);
  pot.diagonal().array() += series.a0;
  const int kMax = std::min<int>(static_cast<int>(series.cosK.size()), 2 * cutoff);
  for (int k = 1; k <= kMax; ++k) {
    if (std::abs(series.cosK[k - 1]) > dropTol)
      pot += series.cosK[k - 1] * chargeCosK(cutoff, k);
    if (std::abs(series.sinK[k - 1]) > dropTol)
      pot += series.sinK[k - 1] * chargeSinK(cutoff, k);
  }
  return pot;
}

FourierSeries sampledHarmonics(const std::function<double(double)>& f, int kMax) {
  std::vector<double> samples(kPotentialSamples);
  for (int j = 0; j < kPotentialSamples; ++j)
    samples[j] = f(2.0 * kPi * j / kPotentialSamples);
  return fourier_harmonics(samples, kMax);
}

// phi_ext derivative of the hybrid junction potential at fixed theta.
double hybridFluxDerivative(const HybridSpec& s, double phiExt, double theta) {
  const double off = kPi * phiExt;
  return kPi * (junction_potential_derivative(s.delta, s.tJ2, theta + off) -
                junction_potential_derivative(s.delta, s.tJ1, theta - off));
}

// Scale of the hybrid potential, used for harmonic drop tolerances.
double hybridScale(const HybridSpec& s) {
  return std::max(1.0, std::abs(s.delta) *
                           static_cast<double>(s.tJ1.size() + s.tJ2.size()));
}

ComplexMatrix embedSingle(const CircuitOperators& ops, int mode,
                          const ComplexMatrix& op) {
  if (ops.modes.size() == 1) return op;
  const int other = 1 - mode;
  std::vector<Triplet> ts;
  addKron(ts, op, ops.stride(mode), ops.modes[other].identity, ops.stride(other),
          1.0, 0.0);
  return ComplexMatrix::fromTriplets(ops.dim(), ts);
}

// theta-diagonal operator of the hybrid circuit: exact nodes on a grid,
// truncated harmonics in the charge basis.
ComplexMatrix hybridThetaFunction(const HybridSpec& s, const ModeOperators& mode,
                                  const std::function<double(double)>& f,
                                  bool dropConstant) {
  if (mode.basis.kind == BasisKind::Grid) {
    std::vector<double> values(mode.nodes.size());
    for (size_t i = 0; i < mode.nodes.size(); ++i) values[i] = f(mode.nodes[i]);
    if (dropConstant) {
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      for (double& v : values) v -= mean;
    }
    return gridDiagonal(mode, values);
  }
  const int cutoff = mode.basis.chargeCutoff;
  const int kMax = std::min(2 * cutoff, kPotentialSamples / 4);
  FourierSeries series = sampledHarmonics(f, kMax);
  if (dropConstant) series.a0 = 0.0;
  return ComplexMatrix::fromDense(
      chargeBasisPotential(cutoff, series, 1e-14 * hybridScale(s)));
}

int chargeCutoffFor(double eJ, double eC) {
  const double spread = eJ > 0.0 ? std::pow(eJ / (32.0 * eC), 0.25) : 0.0;
  const int cutoff = static_cast<int>(std::ceil(6.0 * spread)) + 6;
  return std::max(12, cutoff);
}

// Oscillator level count covering both the position span and the momentum
// content of the low-lying states; the convergence loop enlarges as needed.
int oscillatorLevelsFor(double eC, double eLHarmonic, double eJ, double span) {
  const double phiZpf = std::pow(2.0 * eC / eLHarmonic, 0.25);
  const double nZpf = 0.5 / phiZpf;
  const double nWell = eJ > 0.0 ? std::pow(eJ / (32.0 * eC), 0.25) : 0.0;
  const double nNeed = 3.5 * std::max(nWell, nZpf);
  const double mMom = 0.5 * (nNeed / nZpf) * (nNeed / nZpf);
  const double reach = span / phiZpf;
  const double mPos = 0.5 * reach * reach;
  const int levels =
      static_cast<int>(std::ceil(1.3 * std::max(mMom, mPos))) + 10;
  return std::clamp(levels, 16, 600);
}

}  // namespace

CircuitFamily familyOf(const CircuitSpec& spec) {
  if (std::holds_alternative<ChargeModeSpec>(spec)) return CircuitFamily::ChargeMode;
  if (std::holds_alternative<FluxModeSpec>(spec)) return CircuitFamily::FluxMode;
  if (std::holds_alternative<TwoModeSpec>(spec)) return CircuitFamily::TwoMode;
  return CircuitFamily::Hybrid;
}

std::string familyName(CircuitFamily f) {
  switch (f) {
    case CircuitFamily::ChargeMode: return "charge-mode";
    case CircuitFamily::FluxMode: return "flux-mode";
    case CircuitFamily::TwoMode: return "two-mode";
    case CircuitFamily::Hybrid: return "hybrid";
  }
  return "unknown";
}

void validateSpec(const CircuitSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ChargeModeSpec>) {
          requirePositive(s.eC, "E_C");
          requireNonNegative(s.eJ, "E_J");
        } else if constexpr (std::is_same_v<T, FluxModeSpec>) {
          requirePositive(s.eC, "E_C");
          requireNonNegative(s.eJ, "E_J");
          requirePositive(s.eL, "E_L");
        } else if constexpr (std::is_same_v<T, TwoModeSpec>) {
          requirePositive(s.eCTheta, "E_C_theta");
          requirePositive(s.eCPhi, "E_C_phi");
          requireNonNegative(s.eJ, "E_J");
          requirePositive(s.eL, "E_L");
        } else {
          requirePositive(s.eC, "E_C");
          requirePositive(s.delta, "delta");
          requireTransmissions(s.tJ1, "junction 1");
          requireTransmissions(s.tJ2, "junction 2");
        }
      },
      spec);
}

void validatePlan(const CircuitModel& model) {
  const size_t need = static_cast<size_t>(model.modeCount());
  if (model.basisPlan.size() != need)
    throw InvalidArgumentError("basis plan has " + std::to_string(model.basisPlan.size()) +
                               " entries, model has " + std::to_string(need) + " modes");
  for (size_t i = 0; i < model.basisPlan.size(); ++i)
    validateBasisSpec(model.basisPlan[i], i == 0 ? "mode 0" : "mode 1");
  switch (model.family()) {
    case CircuitFamily::ChargeMode:
      requireCompactBasis(model.basisPlan[0], "gated compact mode");
      break;
    case CircuitFamily::Hybrid:
      requireCompactBasis(model.basisPlan[0], "gated compact mode");
      break;
    case CircuitFamily::FluxMode:
      requireExtendedBasis(model.basisPlan[0], "shunted extended mode");
      break;
    case CircuitFamily::TwoMode:
      requireCompactBasis(model.basisPlan[0], "gated compact mode");
      requireExtendedBasis(model.basisPlan[1], "shunted extended mode");
      break;
  }
}

std::vector<BasisSpec> defaultBasisPlan(const CircuitSpec& spec) {
  validateSpec(spec);
  return std::visit(
      [](const auto& s) -> std::vector<BasisSpec> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ChargeModeSpec>) {
          return {BasisSpec::MakeCharge(chargeCutoffFor(s.eJ, s.eC))};
        } else if constexpr (std::is_same_v<T, FluxModeSpec>) {
          const double phiZpf = std::pow(2.0 * s.eC / s.eL, 0.25);
          const double wellSpread =
              s.eJ > 0.0 ? std::pow(2.0 * s.eC / s.eJ, 0.25) : phiZpf;
          // The quadratic minimum sits at 2*pi*phi_ext (up to 2*pi over a
          // sweep); cover it plus the nearest cosine wells and local spreads.
          const double span = 2.0 * kPi + kPi + 4.0 * wellSpread + 2.0 * phiZpf;
          const int levels = oscillatorLevelsFor(s.eC, s.eL, s.eJ, span);
          return {BasisSpec::MakeOscillator(levels, phiZpf)};
        } else if constexpr (std::is_same_v<T, TwoModeSpec>) {
          // The compact mode sees a Josephson term of up to 2*E_J.
          const double spread =
              s.eJ > 0.0 ? std::pow(2.0 * s.eJ / (32.0 * s.eCTheta), 0.25) : 0.0;
          const int cutoff =
              std::max(6, static_cast<int>(std::ceil(4.0 * spread)) + 3);
          // The flux term E_L*phi^2 has no 1/2, so the harmonic weight is
          // twice E_L.
          const double phiZpf = std::pow(s.eCPhi / s.eL, 0.25);
          const double wellSpread =
              s.eJ > 0.0 ? std::pow(2.0 * s.eCPhi / (2.0 * s.eJ), 0.25) : phiZpf;
          // Here the quadratic minimum sits at pi*phi_ext, at most pi away.
          const double span = kPi + kPi + 4.0 * wellSpread + 2.0 * phiZpf;
          const int levels =
              oscillatorLevelsFor(s.eCPhi, 2.0 * s.eL, 2.0 * s.eJ, span);
          return {BasisSpec::MakeCharge(cutoff),
                  BasisSpec::MakeOscillator(levels, phiZpf)};
        } else {
          double sumT = 0.0;
          for (double t : s.tJ1) sumT += t;
          for (double t : s.tJ2) sumT += t;
          // Shallow-junction scale: each channel contributes ~delta*T/4 of
          // Josephson energy.
          const double eJEff = s.delta * sumT / 4.0;
          return {BasisSpec::MakeCharge(chargeCutoffFor(eJEff, s.eC))};
        }
      },
      spec);
}

Index CircuitOperators::dim() const {
  Index d = 1;
  for (const auto& m : modes) d *= m.dim();
  return d;
}

Index CircuitOperators::stride(int mode) const {
  if (modes.size() == 1) return 1;
  if (mode == 0) return thetaOuter ? modes[1].dim() : 1;
  return thetaOuter ? 1 : modes[0].dim();
}

CircuitOperators buildOperators(const CircuitModel& model) {
  validateSpec(model.spec);
  validatePlan(model);
  CircuitOperators ops;
  for (const BasisSpec& b : model.basisPlan) {
    switch (b.kind) {
      case BasisKind::Charge:
        ops.modes.push_back(charge_ops(b.chargeCutoff));
        break;
      case BasisKind::Oscillator:
        ops.modes.push_back(oscillator_ops_zpf(b.oscLevels, b.phiZpf));
        break;
      case BasisKind::Grid:
        ops.modes.push_back(grid_ops(b.gridPoints, b.gridMin, b.gridMax, b.periodic));
        break;
    }
  }
  ops.thetaOuter = model.family() != CircuitFamily::TwoMode ||
                   model.basisPlan[1].kind == BasisKind::Oscillator;
  return ops;
}

ComplexMatrix buildHamiltonian(const CircuitModel& model, const CircuitOperators& ops) {
  return std::visit(
      [&](const auto& s) -> ComplexMatrix {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ChargeModeSpec>) {
          return h_charge(s, model.point, ops.modes[0]);
        } else if constexpr (std::is_same_v<T, FluxModeSpec>) {
          return h_flux(s, model.point, ops.modes[0]);
        } else if constexpr (std::is_same_v<T, TwoModeSpec>) {
          return h_two_mode(s, model.point, ops.modes[0], ops.modes[1],
                            ops.thetaOuter);
        } else {
          return h_hybrid(s, model.point, ops.modes[0]);
        }
      },
      model.spec);
}

ComplexMatrix h_charge(const ChargeModeSpec& s, const ControlPoint& pt,
                       const ModeOperators& mode) {
  requireCompactBasis(mode.basis, "gated compact mode");
  return gatedKinetic(mode, s.eC, pt.nGate).plus(mode.cos_op.scaled(-s.eJ));
}

ComplexMatrix h_flux(const FluxModeSpec& s, const ControlPoint& pt,
                     const ModeOperators& mode) {
  requireExtendedBasis(mode.basis, "shunted extended mode");
  const double c = 2.0 * kPi * pt.phiExt;
  if (mode.basis.kind == BasisKind::Grid) {
    std::vector<double> pot(mode.nodes.size());
    for (size_t i = 0; i < mode.nodes.size(); ++i) {
      const double x = mode.nodes[i];
      pot[i] = -s.eJ * std::cos(x) + 0.5 * s.eL * (x - c) * (x - c);
    }
    return gridKinetic(mode, s.eC).plus(gridDiagonal(mode, pot));
  }
  ComplexMatrix h = mode.number_sq.scaled(4.0 * s.eC)
                        .plus(mode.cos_op.scaled(-s.eJ))
                        .plus(mode.phase_sq.scaled(0.5 * s.eL));
  if (c != 0.0) {
    h = h.plus(mode.phase_op->scaled(-s.eL * c))
            .plus(mode.identity.scaled(0.5 * s.eL * c * c));
  }
  return h;
}

ComplexMatrix h_two_mode(const TwoModeSpec& s, const ControlPoint& pt,
                         const ModeOperators& theta, const ModeOperators& phi,
                         bool thetaOuter) {
  requireCompactBasis(theta.basis, "gated compact mode");
  requireExtendedBasis(phi.basis, "shunted extended mode");
  const Index dTheta = theta.dim();
  const Index dPhi = phi.dim();
  const Index sTheta = thetaOuter ? dPhi : 1;
  const Index sPhi = thetaOuter ? 1 : dTheta;
  const double c = kPi * pt.phiExt;

  const ComplexMatrix kTheta = gatedKinetic(theta, s.eCTheta, pt.nGate);
  ComplexMatrix hPhi = phi.number_sq.scaled(4.0 * s.eCPhi)
                           .plus(phi.phase_sq.scaled(s.eL));
  if (c != 0.0) {
    hPhi = hPhi.plus(phi.phase_op->scaled(-2.0 * s.eL * c))
               .plus(phi.identity.scaled(s.eL * c * c));
  }

  std::vector<Triplet> ts;
  addKron(ts, kTheta, sTheta, phi.identity, sPhi, 1.0, 0.0);
  addKron(ts, theta.identity, sTheta, hPhi, sPhi, 1.0, 0.0);
  addKron(ts, theta.cos_op, sTheta, phi.cos_op, sPhi, 2.0 * s.eJ);
  return ComplexMatrix::fromTriplets(dTheta * dPhi, ts);
}

ComplexMatrix h_hybrid(const HybridSpec& s, const ControlPoint& pt,
                       const ModeOperators& mode) {
  requireCompactBasis(mode.basis, "gated compact mode");
  const ComplexMatrix kinetic = gatedKinetic(mode, s.eC, pt.nGate);
  const ComplexMatrix pot = hybridThetaFunction(
      s, mode, [&](double theta) { return hybridPotential(s, pt.phiExt, theta); },
      /*dropConstant=*/false);
  return kinetic.plus(pot);
}

double junction_potential(double delta, std::span<const double> transmissions,
                          double theta) {
  const double half = std::sin(0.5 * theta);
  const double s2 = half * half;
  double u = 0.0;
  for (double t : transmissions) {
    if (!(t >= 0.0 && t <= 1.0))
      throw InvalidArgumentError("junction transmission must lie in [0, 1], got " +
                                 fmt(t));
    u -= delta * std::sqrt(std::max(0.0, 1.0 - t * s2));
  }
  return u;
}

double junction_potential_derivative(double delta,
                                     std::span<const double> transmissions,
                                     double theta) {
  const double half = std::sin(0.5 * theta);
  const double s2 = half * half;
  const double sinTheta = std::sin(theta);
  double g = 0.0;
  for (double t : transmissions) {
    if (!(t >= 0.0 && t <= 1.0))
      throw InvalidArgumentError("junction transmission must lie in [0, 1], got " +
                                 fmt(t));
    const double d = 1.0 - t * s2;
    // A fully transmitting channel has a slope jump at theta = pi; the
    // midpoint value there is zero.
    if (d < 1e-30) continue;
    g += delta * t * sinTheta / (4.0 * std::sqrt(d));
  }
  return g;
}

double hybridPotential(const HybridSpec& s, double phiExt, double theta) {
  const double off = kPi * phiExt;
  return junction_potential(s.delta, s.tJ1, theta - off) +
         junction_potential(s.delta, s.tJ2, theta + off);
}

FourierSeries fourier_harmonics(std::span<const double> samples, int kMax) {
  const int p = static_cast<int>(samples.size());
  if (kMax < 0) throw InvalidArgumentError("fourier_harmonics: kMax must be >= 0");
  if (p < std::max(4, 4 * kMax))
    throw InvalidArgumentError("fourier_harmonics: " + std::to_string(p) +
                               " samples cannot resolve " + std::to_string(kMax) +
                               " harmonics (need >= 4*kMax)");
  FourierSeries f;
  f.cosK.assign(static_cast<size_t>(kMax), 0.0);
  f.sinK.assign(static_cast<size_t>(kMax), 0.0);
  double a0 = 0.0;
  for (int j = 0; j < p; ++j) {
    const double x = 2.0 * kPi * j / p;
    const double c1 = std::cos(x);
    const double s1 = std::sin(x);
    double ck = 1.0;
    double sk = 0.0;
    a0 += samples[j];
    for (int k = 1; k <= kMax; ++k) {
      const double cn = ck * c1 - sk * s1;
      const double sn = sk * c1 + ck * s1;
      ck = cn;
      sk = sn;
      f.cosK[k - 1] += samples[j] * ck;
      f.sinK[k - 1] += samples[j] * sk;
    }
  }
  f.a0 = a0 / p;
  for (double& v : f.cosK) v *= 2.0 / p;
  for (double& v : f.sinK) v *= 2.0 / p;
  return f;
}

double fourierEval(const FourierSeries& f, double x) {
  double y = f.a0;
  const double c1 = std::cos(x);
  const double s1 = std::sin(x);
  double ck = 1.0;
  double sk = 0.0;
  for (size_t k = 0; k < f.cosK.size(); ++k) {
    const double cn = ck * c1 - sk * s1;
    const double sn = sk * c1 + ck * s1;
    ck = cn;
    sk = sn;
    y += f.cosK[k] * ck + f.sinK[k] * sk;
  }
  return y;
}

std::string channelName(NoiseChannel ch) {
  return ch == NoiseChannel::Charge ? "charge" : "flux";
}

bool channelPresent(CircuitFamily family, NoiseChannel ch) {
  switch (family) {
    case CircuitFamily::ChargeMode:
      return ch == NoiseChannel::Charge;
    case CircuitFamily::FluxMode:
      return ch == NoiseChannel::Flux;
    case CircuitFamily::TwoMode:
    case CircuitFamily::Hybrid:
      return true;
  }
  return false;
}

ComplexMatrix noise_coupling(const CircuitModel& model, const CircuitOperators& ops,
                             NoiseChannel ch) {
  const CircuitFamily fam = model.family();
  if (!channelPresent(fam, ch))
    throw ChannelNotPresentError(familyName(fam) + " circuit has no " +
                                 channelName(ch) + " channel");
  if (ch == NoiseChannel::Charge) {
    const double eC = std::visit(
        [](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, ChargeModeSpec>) return s.eC;
          else if constexpr (std::is_same_v<T, TwoModeSpec>) return s.eCTheta;
          else if constexpr (std::is_same_v<T, HybridSpec>) return s.eC;
          else return 0.0;
        },
        model.spec);
    return embedSingle(ops, 0, ops.modes[0].number_op).scaled(-8.0 * eC);
  }
  if (fam == CircuitFamily::FluxMode) {
    const auto& s = std::get<FluxModeSpec>(model.spec);
    return ops.modes[0].phase_op->scaled(-s.eL);
  }
  if (fam == CircuitFamily::TwoMode) {
    const auto& s = std::get<TwoModeSpec>(model.spec);
    return embedSingle(ops, 1, *ops.modes[1].phase_op).scaled(-s.eL);
  }
  const auto& s = std::get<HybridSpec>(model.spec);
  return hybridThetaFunction(
      s, ops.modes[0],
      [&](double theta) { return hybridFluxDerivative(s, model.point.phiExt, theta); },
      /*dropConstant=*/true);
}

ComplexMatrix bareChannelOperator(const CircuitModel& model,
                                  const CircuitOperators& ops, NoiseChannel ch) {
  const CircuitFamily fam = model.family();
  if (!channelPresent(fam, ch))
    throw ChannelNotPresentError(familyName(fam) + " circuit has no " +
                                 channelName(ch) + " channel");
  if (ch == NoiseChannel::Charge) return embedSingle(ops, 0, ops.modes[0].number_op);
  if (fam == CircuitFamily::FluxMode) return *ops.modes[0].phase_op;
  if (fam == CircuitFamily::TwoMode) return embedSingle(ops, 1, *ops.modes[1].phase_op);
  // The hybrid circuit has no phase operator conjugate to the flux; the
  // susceptibility operator is the flux derivative of the potential itself.
  const auto& s = std::get<HybridSpec>(model.spec);
  return hybridThetaFunction(
      s, ops.modes[0],
      [&](double theta) { return hybridFluxDerivative(s, model.point.phiExt, theta); },
      /*dropConstant=*/true);
}

}  // namespace protectq
