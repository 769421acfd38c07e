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

#include "protectq/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "protectq/errors.hpp"
#include "protectq/parallel.hpp"

namespace protectq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// GHz -> angular frequency in rad/s.
constexpr double kTwoPiGigahertz = 2.0 * std::numbers::pi * 1e9;

void requireChannel(const CircuitModel& model, NoiseChannel ch) {
  if (!channelPresent(model.family(), ch))
    throw ChannelNotPresentError(familyName(model.family()) +
                                 " circuit has no " + channelName(ch) + " channel");
}

std::string biasParameter(NoiseChannel ch) {
  return ch == NoiseChannel::Charge ? "n_gate" : "phi_ext";
}

double operatingValue(const CircuitModel& model, NoiseChannel ch) {
  return ch == NoiseChannel::Charge ? model.point.nGate : model.point.phiExt;
}

// Slope of E01 via a fixed-plan central difference with one Richardson
// halving. The step is large enough that eigensolver rounding, not
// truncation, limits the result near sweet spots.
double fixedPlanSlope(const CircuitModel& model, const CircuitOperators& ops,
                      const std::string& parameter, double at, double step,
                      const SolveOptions& solve) {
  auto e01 = [&](double lambda) {
    CircuitModel m = model;
    setParameter(m, parameter, lambda);
    EigenSolution s = eigensolveWithOps(m, ops, 2, solve);
    return s.energies[1] - s.energies[0];
  };
  const double d1 = (e01(at + step) - e01(at - step)) / (2.0 * step);
  const double d2 = (e01(at + 0.5 * step) - e01(at - 0.5 * step)) / step;
  return (4.0 * d2 - d1) / 3.0;
}

ChannelMetrics channelMetrics(const CircuitModel& model, NoiseChannel ch,
                              const MetricsOptions& opt) {
  ChannelMetrics out;
  out.present = true;

  ConvergeOptions co;
  co.tol = opt.tol;
  const AmplitudeReport amp = dispersion_amplitude(model, biasParameter(ch), 2, co,
                                                   opt.scanPoints, opt.threads);
  out.dispersionAmplitude = amp.amplitude;
  out.meanE01 = amp.mean;
  out.eta = amp.eta;
  out.converged = amp.converged && amp.unconverged == 0;

  CircuitModel work = model;
  if (work.basisPlan.empty()) work.basisPlan = defaultBasisPlan(work.spec);
  EigenSolution sol = converge(work, 2, co);
  out.converged = out.converged && sol.converged;
  work.basisPlan = sol.basisUsed;
  const CircuitOperators ops = buildOperators(work);

  out.slope = std::abs(fixedPlanSlope(work, ops, biasParameter(ch),
                                      operatingValue(work, ch), 0.02, co.solve));

  const ComplexMatrix bare = bareChannelOperator(work, ops, ch);
  double me = std::abs(matrix_element(sol, bare, 0, 1));
  // Junction-derivative couplings carry the gap's energy scale; divide it
  // out so zeta compares across families on a dimensionless footing.
  if (ch == NoiseChannel::Flux && work.family() == CircuitFamily::Hybrid)
    me /= std::get<HybridSpec>(work.spec).delta;
  out.matrixElement = me;
  out.zeta = logSuppression(me);
  return out;
}

}  // namespace

void validateNoise(const NoiseSpec& spec) {
  if (spec.amplitude < 0.0)
    throw InvalidArgumentError("noise: amplitude must be >= 0");
  if (spec.s0 < 0.0) throw InvalidArgumentError("noise: s0 must be >= 0");
  if (!(spec.irCutoffHz > 0.0))
    throw InvalidArgumentError("noise: ir_cutoff must be > 0");
  if (spec.kind == NoiseKind::Table) {
    if (spec.table.size() < 2)
      throw InvalidArgumentError("noise: table needs at least 2 samples");
    double prev = 0.0;
    for (const auto& [f, s] : spec.table) {
      if (!(f > prev))
        throw InvalidArgumentError("noise: table frequencies must be positive ascending");
      if (s < 0.0) throw InvalidArgumentError("noise: table PSD values must be >= 0");
      prev = f;
    }
  }
}

double psd(const NoiseSpec& spec, double frequencyHz) {
  validateNoise(spec);
  if (!(frequencyHz > 0.0))
    throw InvalidArgumentError("psd: frequency must be > 0 Hz");
  switch (spec.kind) {
    case NoiseKind::OneOverF:
      return spec.amplitude * spec.amplitude / frequencyHz;
    case NoiseKind::White:
      return spec.s0;
    case NoiseKind::Table: {
      if (frequencyHz < spec.table.front().first ||
          frequencyHz > spec.table.back().first)
        throw InterpolationRangeError(
            "psd: frequency " + std::to_string(frequencyHz) + " Hz outside table range [" +
            std::to_string(spec.table.front().first) + ", " +
            std::to_string(spec.table.back().first) + "]");
      const auto it = std::lower_bound(
          spec.table.begin(), spec.table.end(), frequencyHz,
          [](const std::pair<double, double>& a, double f) { return a.first < f; });
      if (it == spec.table.begin()) return it->second;
      const auto lo = std::prev(it);
      const double w = (frequencyHz - lo->first) / (it->first - lo->first);
      return lo->second + w * (it->second - lo->second);
    }
  }
  throw InvalidArgumentError("psd: unknown noise kind");
}

RateEstimate dephasing_rate(const CircuitModel& model, NoiseChannel channel,
                            const NoiseSpec& noise, double prefactor) {
  requireChannel(model, channel);
  validateNoise(noise);
  if (noise.channel != channel)
    throw InvalidArgumentError("dephasing_rate: noise spec is for the " +
                               channelName(noise.channel) + " channel");
  const SlopeEstimate s =
      dispersion_slope(model, biasParameter(channel), operatingValue(model, channel));
  const double omegaSlope = kTwoPiGigahertz * s.slope;
  RateEstimate r;
  r.mode = prefactor == 1.0 ? RateMode::Relative : RateMode::Absolute;
  r.gammaPhi = prefactor * omegaSlope * omegaSlope * psd(noise, noise.irCutoffHz);
  r.t2 = combine_t2(r.gamma1, r.gammaPhi);
  return r;
}

RateEstimate relaxation_rate(const CircuitModel& model, NoiseChannel channel,
                             const NoiseSpec& noise, double prefactor) {
  requireChannel(model, channel);
  validateNoise(noise);
  if (noise.channel != channel)
    throw InvalidArgumentError("relaxation_rate: noise spec is for the " +
                               channelName(noise.channel) + " channel");
  CircuitModel work = model;
  if (work.basisPlan.empty()) work.basisPlan = defaultBasisPlan(work.spec);
  EigenSolution sol = converge(work, 2, ConvergeOptions{});
  work.basisPlan = sol.basisUsed;
  const CircuitOperators ops = buildOperators(work);
  const ComplexMatrix coupling = noise_coupling(work, ops, channel);
  const double me = std::abs(matrix_element(sol, coupling, 0, 1));
  const double f01Hz = sol.e01() * 1e9;
  if (!(f01Hz > 0.0))
    throw NumericalFailureError("relaxation_rate: non-positive transition frequency");
  const double omegaMe = kTwoPiGigahertz * me;
  RateEstimate r;
  r.mode = prefactor == 1.0 ? RateMode::Relative : RateMode::Absolute;
  r.gamma1 = prefactor * omegaMe * omegaMe * psd(noise, f01Hz);
  r.t2 = combine_t2(r.gamma1, r.gammaPhi);
  return r;
}

double combine_t2(double gamma1, double gammaPhi) {
  if (gamma1 < 0.0 || gammaPhi < 0.0)
    throw InvalidArgumentError("combine_t2: rates must be >= 0");
  const double total = 0.5 * gamma1 + gammaPhi;
  return total > 0.0 ? 1.0 / total : kInf;
}

ProtectionMetrics protection_metrics(const CircuitModel& model,
                                     const MetricsOptions& opt) {
  validateSpec(model.spec);
  ProtectionMetrics m;
  const CircuitFamily fam = model.family();
  if (channelPresent(fam, NoiseChannel::Charge))
    m.charge = channelMetrics(model, NoiseChannel::Charge, opt);
  if (channelPresent(fam, NoiseChannel::Flux))
    m.flux = channelMetrics(model, NoiseChannel::Flux, opt);
  return m;
}

std::string gradeName(Grade g) {
  switch (g) {
    case Grade::Absent: return "absent";
    case Grade::Linear: return "linear";
    case Grade::Exponential: return "exponential";
    case Grade::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

namespace {

Grade dephasingGrade(const ChannelMetrics& c, const GradeThresholds& t) {
  if (!c.present) return Grade::NotApplicable;
  if (!std::isfinite(c.slope) || !(std::isfinite(c.eta) || c.eta == kInf))
    throw InvalidArgumentError("classify_protection: incomplete dephasing metrics");
  if (c.eta > t.exponent) return Grade::Exponential;
  if (c.slope < t.slopeGhz) return Grade::Linear;
  return Grade::Absent;
}

}  // namespace

ProtectionGrade classify_protection(const ProtectionMetrics& metrics,
                                    const GradeThresholds& thresholds) {
  ProtectionGrade g;
  g.thresholds = thresholds;
  g.chargeDephasing = dephasingGrade(metrics.charge, thresholds);
  g.fluxDephasing = dephasingGrade(metrics.flux, thresholds);
  double minZeta = kInf;
  bool any = false;
  for (const ChannelMetrics* c : {&metrics.charge, &metrics.flux}) {
    if (!c->present) continue;
    if (!(std::isfinite(c->zeta) || c->zeta == kInf))
      throw InvalidArgumentError("classify_protection: incomplete relaxation metrics");
    minZeta = std::min(minZeta, c->zeta);
    any = true;
  }
  if (!any)
    throw InvalidArgumentError("classify_protection: no channel metrics supplied");
  g.relaxation = minZeta > thresholds.exponent ? Grade::Exponential : Grade::Absent;
  return g;
}

PhaseDiagramCaps phase_diagram_caps(bool fluxMode) {
  // Ranges over which the default plans converge within the dimension
  // ceiling; verified at the corners.
  if (fluxMode) return {0.05, 50.0, 0.002, 2.0};
  return {0.05, 500.0, 0.0, 0.0};
}

PhaseDiagramResult phase_diagram(const PhaseDiagramRequest& request) {
  if (request.ejOverEc.empty())
    throw InvalidArgumentError("phase_diagram: empty E_J/E_C grid");
  if (request.fluxMode && request.elOverEc.empty())
    throw InvalidArgumentError("phase_diagram: empty E_L/E_C grid");
  if (!(request.eC > 0.0))
    throw InvalidArgumentError("phase_diagram: E_C must be > 0");
  const PhaseDiagramCaps caps = phase_diagram_caps(request.fluxMode);
  for (double r : request.ejOverEc)
    if (r < caps.ejMin || r > caps.ejMax)
      throw InvalidArgumentError("phase_diagram: E_J/E_C = " + std::to_string(r) +
                                 " outside the convergent range [" +
                                 std::to_string(caps.ejMin) + ", " +
                                 std::to_string(caps.ejMax) + "]");
  if (request.fluxMode)
    for (double r : request.elOverEc)
      if (r < caps.elMin || r > caps.elMax)
        throw InvalidArgumentError("phase_diagram: E_L/E_C = " + std::to_string(r) +
                                   " outside the convergent range [" +
                                   std::to_string(caps.elMin) + ", " +
                                   std::to_string(caps.elMax) + "]");

  PhaseDiagramResult out;
  out.fluxMode = request.fluxMode;
  out.eC = request.eC;
  out.ejOverEc = request.ejOverEc;
  out.elOverEc = request.fluxMode ? request.elOverEc : std::vector<double>{};
  const Index nx = static_cast<Index>(request.ejOverEc.size());
  const Index ny = request.fluxMode ? static_cast<Index>(request.elOverEc.size()) : 1;
  out.cells.assign(static_cast<size_t>(nx * ny), PhaseDiagramCell{});

  parallelFor(request.threads, nx * ny, [&](Index idx) {
    const Index ix = idx % nx;
    const Index iy = idx / nx;
    PhaseDiagramCell& cell = out.cells[static_cast<size_t>(idx)];
    cell.ejOverEc = request.ejOverEc[static_cast<size_t>(ix)];
    cell.elOverEc = request.fluxMode ? request.elOverEc[static_cast<size_t>(iy)] : 0.0;
    try {
      CircuitModel m;
      ConvergeOptions co;
      co.tol = request.tol;
      if (request.fluxMode) {
        m.spec = FluxModeSpec{request.eC, cell.ejOverEc * request.eC,
                              cell.elOverEc * request.eC};
        // One converged plan at the matrix-element point serves the slope
        // evaluations as well; the growth check validates it.
        m.point.phiExt = 0.45;
        m.basisPlan = defaultBasisPlan(m.spec);
        EigenSolution sol = converge(m, 2, co);
        m.basisPlan = sol.basisUsed;
        const CircuitOperators ops = buildOperators(m);
        // Capacitive coupling strength |<0|n|1>|; n exists for every mode even
        // though a flux mode exposes no offset-charge (dephasing) channel.
        cell.matrixElement =
            std::abs(matrix_element(sol, ops.modes[0].number_op, 0, 1));
        cell.couplingElement = 8.0 * request.eC * cell.matrixElement;
        cell.slope =
            std::abs(fixedPlanSlope(m, ops, "phi_ext", 0.25, 0.01, co.solve));
        cell.converged = sol.converged;
      } else {
        m.spec = ChargeModeSpec{request.eC, cell.ejOverEc * request.eC};
        m.point.nGate = 0.25;
        m.basisPlan = defaultBasisPlan(m.spec);
        EigenSolution sol = converge(m, 2, co);
        m.basisPlan = sol.basisUsed;
        const CircuitOperators ops = buildOperators(m);
        cell.slope =
            std::abs(fixedPlanSlope(m, ops, "n_gate", 0.25, 0.01, co.solve));
        cell.converged = sol.converged;
      }
    } catch (const NumericalFailureError&) {
      cell.slope = std::numeric_limits<double>::quiet_NaN();
      cell.matrixElement = std::numeric_limits<double>::quiet_NaN();
      cell.couplingElement = std::numeric_limits<double>::quiet_NaN();
      cell.converged = false;
    }
  });
  for (const PhaseDiagramCell& c : out.cells)
    out.allConverged = out.allConverged && c.converged;
  return out;
}

}  // namespace protectq
