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
#include <utility>
#include <vector>

#include "protectq/circuits.hpp"
#include "protectq/spectral.hpp"

namespace protectq {

// Noise power spectral densities are sampled at ordinary frequencies in Hz
// and return units of (bias parameter)^2 per Hz.
enum class NoiseKind { OneOverF, White, Table };

struct NoiseSpec {
  NoiseChannel channel = NoiseChannel::Charge;
  NoiseKind kind = NoiseKind::OneOverF;
  // OneOverF: S(f) = amplitude^2 / f, so amplitude is the bias fluctuation
  // per sqrt(Hz) at 1 Hz.
  double amplitude = 0.0;
  // White: S(f) = s0 for all f.
  double s0 = 0.0;
  // Table: ascending (frequency Hz, PSD) samples, interpolated linearly.
  std::vector<std::pair<double, double>> table;
  // The f -> 0 limit of a 1/f spectrum diverges; dephasing rates sample the
  // PSD at this infrared cutoff instead.
  double irCutoffHz = 1.0;
};

void validateNoise(const NoiseSpec& spec);

// PSD value at frequency f (Hz). Table kind throws InterpolationRangeError
// outside the sampled range.
double psd(const NoiseSpec& spec, double frequencyHz);

enum class RateMode { Relative, Absolute };

struct RateEstimate {
  double gammaPhi = 0.0;  // pure dephasing rate, 1/s times the prefactor
  double gamma1 = 0.0;    // depolarization rate, 1/s times the prefactor
  double t2 = 0.0;        // 1 / (gamma1/2 + gammaPhi); +inf when both vanish
  RateMode mode = RateMode::Relative;
};

// gammaPhi = prefactor * |d(omega01)/d(lambda)|^2 * S(irCutoff), with the
// transition slope converted to angular frequency (rad/s per bias unit).
// The default prefactor 1 gives relative rates; supplying a calibrated
// constant switches the estimate to absolute mode.
RateEstimate dephasing_rate(const CircuitModel& model, NoiseChannel channel,
                            const NoiseSpec& noise, double prefactor = 1.0);

// gamma1 = prefactor * |2 pi <0|O|1>|^2 * S(E01/h), with O the circuit's
// noise coupling operator in GHz and the PSD sampled at the transition
// frequency in Hz.
RateEstimate relaxation_rate(const CircuitModel& model, NoiseChannel channel,
                             const NoiseSpec& noise, double prefactor = 1.0);

// t2 = 1 / (gamma1/2 + gammaPhi); both rates zero yields +inf, negative
// rates are rejected.
double combine_t2(double gamma1, double gammaPhi);

// Numeric protection metrics for one noise channel, evaluated at the model's
// declared operating point.
struct ChannelMetrics {
  bool present = false;
  double slope = 0.0;                // |dE01/dlambda| at the operating point, GHz per unit
  double dispersionAmplitude = 0.0;  // max-min of E01 over one bias period, GHz
  double meanE01 = 0.0;              // period-averaged E01, GHz
  double eta = 0.0;                  // -ln(amplitude / mean)
  double matrixElement = 0.0;        // |<0|O|1>| of the dimensionless channel operator
  double zeta = 0.0;                 // -ln(matrixElement)
  bool converged = true;
};

struct ProtectionMetrics {
  ChannelMetrics charge;
  ChannelMetrics flux;
};

struct MetricsOptions {
  int scanPoints = 101;
  double tol = 1e-8;
  int threads = 1;
};

// Computes both channels' metrics where present. The matrix element uses the
// bare channel operator scaled to a dimensionless form (junction-derivative
// couplings are measured in units of the junction gap) so that one threshold
// applies across circuit families.
ProtectionMetrics protection_metrics(const CircuitModel& model,
                                     const MetricsOptions& opt = {});

enum class Grade { Absent, Linear, Exponential, NotApplicable };

std::string gradeName(Grade g);

// Grade thresholds are configuration, not physics; the defaults separate the
// studied device families.
struct GradeThresholds {
  double exponent = 6.907755278982137;  // ln(10^3)
  double slopeGhz = 1e-6;               // sweet-spot slope tolerance, GHz per bias unit
};

struct ProtectionGrade {
  Grade chargeDephasing = Grade::NotApplicable;
  Grade fluxDephasing = Grade::NotApplicable;
  Grade relaxation = Grade::Absent;
  GradeThresholds thresholds;
};

// Pure function of the metrics: per channel, exponential when eta exceeds
// thresholds.exponent, linear when the operating point is a sweet spot
// (|slope| < thresholds.slopeGhz) without amplitude suppression, absent
// otherwise. Relaxation is exponential when every present channel's zeta
// exceeds thresholds.exponent.
ProtectionGrade classify_protection(const ProtectionMetrics& metrics,
                                    const GradeThresholds& thresholds = {});

// Protection landscape over circuit parameter ratios at fixed E_C. Flux-mode
// cells report the dispersion slope at phi_ext = 0.25 plus the 0 -> 1 charge
// matrix element at phi_ext = 0.45; the charge-mode row reports the slope at
// n_gate = 0.25.
struct PhaseDiagramRequest {
  bool fluxMode = true;
  std::vector<double> ejOverEc;
  std::vector<double> elOverEc;  // ignored for the charge-mode row
  double eC = 1.0;               // GHz
  double tol = 1e-8;
  int threads = 1;
};

struct PhaseDiagramCell {
  double ejOverEc = 0.0;
  double elOverEc = 0.0;
  double slope = 0.0;            // GHz per bias unit
  double matrixElement = 0.0;    // |<0|n|1>|
  double couplingElement = 0.0;  // |<0|-8 E_C n|1>|, GHz
  bool converged = false;
};

struct PhaseDiagramResult {
  bool fluxMode = true;
  double eC = 1.0;
  std::vector<double> ejOverEc;
  std::vector<double> elOverEc;
  std::vector<PhaseDiagramCell> cells;  // row-major, ejOverEc fastest
  bool allConverged = true;
};

// Documented convergence caps for the request grids.
struct PhaseDiagramCaps {
  double ejMin, ejMax, elMin, elMax;
};
PhaseDiagramCaps phase_diagram_caps(bool fluxMode);

// Unconverged cells are flagged in the result, never fatal.
PhaseDiagramResult phase_diagram(const PhaseDiagramRequest& request);

}  // namespace protectq
