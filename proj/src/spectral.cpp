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

#include "protectq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>

#include "protectq/parallel.hpp"

namespace protectq {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// E01 differences below this are indistinguishable from eigensolver rounding;
// extremum refinement on such a range would only chase noise.
constexpr double kAmplitudeNoiseFloor = 1e-11;

// Relative amplitude on the outermost nodes of an open grid above which the
// window is considered too small.
constexpr double kBoundaryLeak = 1e-8;

Index planDim(const std::vector<BasisSpec>& plan) {
  Index d = 1;
  for (const auto& b : plan) d *= b.dim();
  return d;
}

// True when any eigenstate has weight on the outer nodes of an open grid.
bool openGridBoundaryTouched(const EigenSolution& sol) {
  const auto& plan = sol.basisUsed;
  std::vector<Index> dims;
  dims.reserve(plan.size());
  for (const auto& b : plan) dims.push_back(b.dim());
  for (size_t m = 0; m < plan.size(); ++m) {
    if (plan[m].kind != BasisKind::Grid || plan[m].periodic) continue;
    Index strideM = 1;
    Index strideOther = 0;
    Index dimOther = 1;
    if (plan.size() == 2) {
      const Index s0 = sol.thetaOuter ? dims[1] : 1;
      const Index s1 = sol.thetaOuter ? 1 : dims[0];
      strideM = (m == 0) ? s0 : s1;
      strideOther = (m == 0) ? s1 : s0;
      dimOther = dims[1 - m];
    }
    for (Index c = 0; c < sol.states.cols(); ++c) {
      const double peak = sol.states.col(c).cwiseAbs().maxCoeff();
      double edge = 0.0;
      for (Index o = 0; o < dimOther; ++o) {
        edge = std::max(edge, std::abs(sol.states(o * strideOther, c)));
        edge = std::max(edge,
                        std::abs(sol.states((dims[m] - 1) * strideM + o * strideOther, c)));
      }
      if (edge > kBoundaryLeak * peak) return true;
    }
  }
  return false;
}

std::vector<BasisSpec> grownPlan(const std::vector<BasisSpec>& plan, bool widenOpenGrids) {
  std::vector<BasisSpec> next = plan;
  for (BasisSpec& b : next) {
    switch (b.kind) {
      case BasisKind::Charge:
        b.chargeCutoff += (b.chargeCutoff + 1) / 2;
        break;
      case BasisKind::Oscillator:
        b.oscLevels += (b.oscLevels + 1) / 2;
        break;
      case BasisKind::Grid:
        if (!b.periodic && widenOpenGrids) {
          const double center = 0.5 * (b.gridMin + b.gridMax);
          const double half = 0.75 * (b.gridMax - b.gridMin);
          b.gridMin = center - half;
          b.gridMax = center + half;
        }
        // Nested refinement: open grids keep their nodes, periodic grids
        // halve the spacing exactly.
        b.gridPoints = b.periodic ? 2 * b.gridPoints : 2 * b.gridPoints - 1;
        break;
    }
  }
  return next;
}

std::string joinNames(const std::vector<std::string>& names) {
  std::string out;
  for (size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

double goldenRefine(const std::function<double(double)>& f, double a, double b,
                    bool maximize, double xtol, double& bestX) {
  const double gr = 0.6180339887498949;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int evals = 2;
  while ((b - a) > xtol && evals < 60) {
    const bool left = maximize ? (f1 > f2) : (f1 < f2);
    if (left) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
    ++evals;
  }
  const bool firstWins = maximize ? (f1 > f2) : (f1 < f2);
  bestX = firstWins ? x1 : x2;
  return firstWins ? f1 : f2;
}

// Basis-function samples: rows are requested points, columns basis indices.
Eigen::MatrixXcd chargeFunctions(const BasisSpec& b, const std::vector<double>& x) {
  const int cutoff = b.chargeCutoff;
  const Index dim = b.dim();
  Eigen::MatrixXcd f(static_cast<Index>(x.size()), dim);
  const double norm = 1.0 / std::sqrt(2.0 * kPi);
  for (size_t r = 0; r < x.size(); ++r)
    for (int n = -cutoff; n <= cutoff; ++n)
      f(static_cast<Index>(r), n + cutoff) =
          norm * std::exp(cplx(0.0, n * x[r]));
  return f;
}

// Normalized harmonic-oscillator eigenfunctions via the stable two-term
// recurrence. The shared exponent is carried separately so the Gaussian
// envelope cannot underflow away a tail that the high levels still need.
// The operators use phi = phi_zpf (a + a^dagger), so the Hermite length
// scale is ell = sqrt(2) * phi_zpf and the ground density has sigma = phi_zpf.
Eigen::MatrixXcd oscillatorFunctions(const BasisSpec& b, const std::vector<double>& x) {
  const int levels = b.oscLevels;
  const double ell = std::numbers::sqrt2 * b.phiZpf;
  Eigen::MatrixXcd f(static_cast<Index>(x.size()), levels);
  const double rescale = 1e120;
  const double logRescale = std::log(rescale);
  const double rootNorm = 1.0 / std::sqrt(ell);
  for (size_t r = 0; r < x.size(); ++r) {
    const double u = x[r] / ell;
    double logScale = -0.5 * u * u;
    double prev = 0.0;
    double cur = std::pow(kPi, -0.25);
    for (int m = 0; m < levels; ++m) {
      double value = 0.0;
      if (cur != 0.0) {
        const double e = logScale + std::log(std::abs(cur));
        if (e > -700.0) value = std::copysign(std::exp(e), cur);
      }
      f(static_cast<Index>(r), m) = rootNorm * value;
      const double nxt = std::sqrt(2.0 / (m + 1)) * u * cur -
                         std::sqrt(static_cast<double>(m) / (m + 1)) * prev;
      prev = cur;
      cur = nxt;
      if (std::abs(cur) > rescale || std::abs(prev) > rescale) {
        prev /= rescale;
        cur /= rescale;
        logScale += logRescale;
      }
    }
  }
  return f;
}

// Node amplitudes are coefficients / sqrt(dx); requested points interpolate
// linearly between nodes (periodic wrap or zero outside an open window).
Eigen::MatrixXcd gridFunctions(const BasisSpec& b, const std::vector<double>& x) {
  const Index p = b.gridPoints;
  const double width = b.gridMax - b.gridMin;
  const double dx = b.periodic ? width / static_cast<double>(p)
                               : width / static_cast<double>(p - 1);
  const double rootNorm = 1.0 / std::sqrt(dx);
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(static_cast<Index>(x.size()), p);
  for (size_t r = 0; r < x.size(); ++r) {
    double t = (x[r] - b.gridMin) / dx;
    if (b.periodic) {
      t -= std::floor(t / static_cast<double>(p)) * static_cast<double>(p);
      const Index i0 = static_cast<Index>(std::floor(t)) % p;
      const double w = t - std::floor(t);
      f(static_cast<Index>(r), i0) += (1.0 - w) * rootNorm;
      f(static_cast<Index>(r), (i0 + 1) % p) += w * rootNorm;
    } else {
      if (t < 0.0 || t > static_cast<double>(p - 1)) continue;
      Index i0 = static_cast<Index>(std::floor(t));
      if (i0 >= p - 1) i0 = p - 2;
      const double w = t - static_cast<double>(i0);
      f(static_cast<Index>(r), i0) += (1.0 - w) * rootNorm;
      f(static_cast<Index>(r), i0 + 1) += w * rootNorm;
    }
  }
  return f;
}

Eigen::MatrixXcd basisFunctions(const BasisSpec& b, const std::vector<double>& x) {
  switch (b.kind) {
    case BasisKind::Charge: return chargeFunctions(b, x);
    case BasisKind::Oscillator: return oscillatorFunctions(b, x);
    case BasisKind::Grid: return gridFunctions(b, x);
  }
  throw InvalidArgumentError("unknown basis kind");
}

double uniformCell(const std::vector<double>& x, const char* what) {
  if (x.size() < 2)
    throw InvalidArgumentError(std::string(what) + ": need at least 2 points");
  const double dx = x[1] - x[0];
  if (!(dx > 0.0))
    throw InvalidArgumentError(std::string(what) + ": grid must be increasing");
  for (size_t i = 1; i + 1 < x.size(); ++i)
    if (std::abs((x[i + 1] - x[i]) - dx) > 1e-9 * std::max(1.0, std::abs(dx)))
      throw InvalidArgumentError(std::string(what) + ": grid must be uniform");
  return dx;
}

void requireSameGrid(const std::vector<double>& a, const std::vector<double>& b,
                     const char* what) {
  if (a.size() != b.size())
    throw InvalidArgumentError(std::string(what) + ": grids differ in size");
  for (size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-9)
      throw InvalidArgumentError(std::string(what) + ": grids differ");
}

struct GridRoute {
  std::vector<double> coarse;   // k energies at spacing dx
  std::vector<double> fine;     // k energies at spacing dx/2
  std::vector<double> richardson;
  std::string describe;
  bool converged = true;
};

// Fourth-order eigenvalue estimates from a second-order scheme evaluated at
// two nested meshes: lambda* ~ (4 lambda_fine - lambda_coarse) / 3.  The
// coarse solution is taken as given so window searches can probe cheaply.
GridRoute solveGridRouteFrom(const CircuitModel& base,
                             const std::vector<BasisSpec>& coarsePlan,
                             const EigenSolution& sc, int k,
                             const SolveOptions& solve) {
  CircuitModel work = base;
  GridRoute out;
  out.coarse = sc.energies;
  work.basisPlan = grownPlan(coarsePlan, false);
  EigenSolution sf = eigensolve(work, k, solve);
  out.fine = sf.energies;
  out.richardson.resize(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i)
    out.richardson[static_cast<size_t>(i)] =
        (4.0 * out.fine[static_cast<size_t>(i)] - out.coarse[static_cast<size_t>(i)]) / 3.0;
  out.converged = !openGridBoundaryTouched(sf);
  char buf[160];
  const BasisSpec& g = coarsePlan.back();
  std::snprintf(buf, sizeof buf, "grid %lld/%lld points on [%.4g, %.4g]%s",
                static_cast<long long>(g.gridPoints),
                static_cast<long long>(work.basisPlan.back().gridPoints), g.gridMin,
                g.gridMax, g.periodic ? " (periodic)" : "");
  out.describe = buf;
  return out;
}

GridRoute solveGridRoute(const CircuitModel& base,
                         const std::vector<BasisSpec>& coarsePlan, int k,
                         const SolveOptions& solve) {
  CircuitModel work = base;
  work.basisPlan = coarsePlan;
  return solveGridRouteFrom(base, coarsePlan, eigensolve(work, k, solve), k, solve);
}

}  // namespace

EigenSolution eigensolveWithOps(const CircuitModel& model,
                                const CircuitOperators& ops, int k,
                                const SolveOptions& opt) {
  if (k < 2) throw InvalidArgumentError("eigensolve: k must be >= 2");
  const Index dim = ops.dim();
  if (static_cast<Index>(k) >= dim)
    throw InvalidArgumentError("eigensolve: k=" + std::to_string(k) +
                               " does not fit in dimension " + std::to_string(dim));
  ComplexMatrix h = buildHamiltonian(model, ops);
  EigsOptions eo;
  eo.k = k;
  eo.tol = opt.tol;
  // Multi-mode Hamiltonians are banded under the chosen mode ordering, so
  // shift-invert beats a full dense solve well below the dense cap.
  eo.preferSparse = opt.preferSparse || (model.modeCount() == 2 && dim > 600);
  EigsResult r = eigsLowest(h, eo);
  EigenSolution s;
  s.energies.assign(r.values.data(), r.values.data() + r.values.size());
  s.states = std::move(r.vectors);
  s.basisUsed = model.basisPlan;
  s.thetaOuter = ops.thetaOuter;
  s.maxResidual = r.maxResidual;
  s.converged = true;
  return s;
}

EigenSolution eigensolve(const CircuitModel& model, int k, const SolveOptions& opt) {
  CircuitOperators ops = buildOperators(model);
  return eigensolveWithOps(model, ops, k, opt);
}

EigenSolution converge(const CircuitModel& model, int k, const ConvergeOptions& opt) {
  if (!(opt.tol > 0.0))
    throw InvalidArgumentError("converge: tol must be > 0");
  CircuitModel work = model;
  if (work.basisPlan.empty()) work.basisPlan = defaultBasisPlan(work.spec);
  EigenSolution cur = eigensolve(work, k, opt.solve);
  bool curLeaks = openGridBoundaryTouched(cur);
  for (int round = 0; round < opt.maxRounds; ++round) {
    const std::vector<BasisSpec> next = grownPlan(work.basisPlan, curLeaks);
    if (planDim(next) > opt.dimCeiling) {
      cur.converged = false;
      return cur;
    }
    CircuitModel bigger = work;
    bigger.basisPlan = next;
    EigenSolution nxt = eigensolve(bigger, k, opt.solve);
    const bool nxtLeaks = openGridBoundaryTouched(nxt);
    double move = 0.0;
    for (int i = 0; i < k; ++i)
      move = std::max(move, std::abs(nxt.energies[static_cast<size_t>(i)] -
                                     cur.energies[static_cast<size_t>(i)]));
    if (move < opt.tol && !nxtLeaks) {
      // The smaller plan is validated by the enlarged solve; return it so
      // downstream per-point work stays cheap.
      if (!curLeaks) {
        cur.converged = true;
        return cur;
      }
      nxt.converged = true;
      return nxt;
    }
    work.basisPlan = next;
    cur = std::move(nxt);
    curLeaks = nxtLeaks;
  }
  cur.converged = false;
  return cur;
}

void setParameter(CircuitModel& model, const std::string& name, double value) {
  const CircuitFamily fam = model.family();
  if (name == "n_gate") {
    if (!channelPresent(fam, NoiseChannel::Charge))
      throw InvalidArgumentError(familyName(fam) + " circuit has no n_gate parameter");
    model.point.nGate = value;
    return;
  }
  if (name == "phi_ext") {
    if (!channelPresent(fam, NoiseChannel::Flux))
      throw InvalidArgumentError(familyName(fam) + " circuit has no phi_ext parameter");
    model.point.phiExt = value;
    return;
  }
  const bool ok = std::visit(
      [&](auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ChargeModeSpec>) {
          if (name == "E_C") return s.eC = value, true;
          if (name == "E_J") return s.eJ = value, true;
        } else if constexpr (std::is_same_v<T, FluxModeSpec>) {
          if (name == "E_C") return s.eC = value, true;
          if (name == "E_J") return s.eJ = value, true;
          if (name == "E_L") return s.eL = value, true;
        } else if constexpr (std::is_same_v<T, TwoModeSpec>) {
          if (name == "E_C_theta") return s.eCTheta = value, true;
          if (name == "E_C_phi") return s.eCPhi = value, true;
          if (name == "E_J") return s.eJ = value, true;
          if (name == "E_L") return s.eL = value, true;
        } else {
          if (name == "E_C") return s.eC = value, true;
          if (name == "delta") return s.delta = value, true;
        }
        return false;
      },
      model.spec);
  if (!ok)
    throw InvalidArgumentError("unknown sweep parameter '" + name + "' for a " +
                               familyName(fam) + " circuit (valid: " +
                               joinNames(parameterNames(fam)) + ")");
  validateSpec(model.spec);
}

bool parameterIsPeriodic(const std::string& name) {
  return name == "n_gate" || name == "phi_ext";
}

std::vector<std::string> parameterNames(CircuitFamily family) {
  switch (family) {
    case CircuitFamily::ChargeMode: return {"n_gate", "E_C", "E_J"};
    case CircuitFamily::FluxMode: return {"phi_ext", "E_C", "E_J", "E_L"};
    case CircuitFamily::TwoMode:
      return {"n_gate", "phi_ext", "E_C_theta", "E_C_phi", "E_J", "E_L"};
    case CircuitFamily::Hybrid: return {"n_gate", "phi_ext", "E_C", "delta"};
  }
  return {};
}

SpectrumTable sweep(const CircuitModel& model, const SweepRequest& req) {
  if (req.grid.empty()) throw InvalidArgumentError("sweep: empty grid");
  if (req.k < 2) throw InvalidArgumentError("sweep: k must be >= 2");
  for (size_t i = 1; i + 1 < req.grid.size(); ++i) {
    const double d0 = req.grid[i] - req.grid[i - 1];
    const double d1 = req.grid[i + 1] - req.grid[i];
    if (d0 == 0.0 || d1 == 0.0 || (d0 > 0.0) != (d1 > 0.0))
      throw InvalidArgumentError("sweep: grid must be strictly monotone");
  }
  if (req.grid.size() == 2 && req.grid[0] == req.grid[1])
    throw InvalidArgumentError("sweep: grid must be strictly monotone");

  CircuitModel work = model;
  if (work.basisPlan.empty()) work.basisPlan = defaultBasisPlan(work.spec);
  ConvergeOptions co;
  co.tol = req.tol;
  co.solve = req.solve;

  CircuitModel front = work;
  setParameter(front, req.parameter, req.grid.front());
  EigenSolution sf = converge(front, req.k, co);
  bool planConverged = sf.converged;
  std::vector<BasisSpec> plan = sf.basisUsed;
  if (req.grid.size() > 1) {
    CircuitModel back = work;
    setParameter(back, req.parameter, req.grid.back());
    back.basisPlan = plan;
    EigenSolution sb = converge(back, req.k, co);
    planConverged = planConverged && sb.converged;
    plan = sb.basisUsed;
  }
  work.basisPlan = plan;
  const CircuitOperators ops = buildOperators(work);

  SpectrumTable table;
  table.parameter = req.parameter;
  table.grid = req.grid;
  table.basisUsed = plan;
  table.converged = planConverged;
  const Index n = static_cast<Index>(req.grid.size());
  table.energies.assign(req.grid.size(),
                        std::vector<double>(static_cast<size_t>(req.k), kNaN));
  table.pointConverged.assign(req.grid.size(), 0);
  parallelFor(req.threads, n, [&](Index i) {
    CircuitModel m = work;
    setParameter(m, req.parameter, req.grid[static_cast<size_t>(i)]);
    try {
      EigenSolution s = eigensolveWithOps(m, ops, req.k, req.solve);
      table.energies[static_cast<size_t>(i)] = s.energies;
      table.pointConverged[static_cast<size_t>(i)] = 1;
    } catch (const NumericalFailureError&) {
      // Row stays NaN and is flagged; partial tables are written, not lost.
    }
  });
  return table;
}

SlopeEstimate dispersion_slope(const CircuitModel& model, const std::string& parameter,
                               double at, double step, int k,
                               const ConvergeOptions& opt) {
  if (!(step > 0.0))
    throw InvalidArgumentError("dispersion_slope: step must be > 0");
  CircuitModel work = model;
  if (work.basisPlan.empty()) work.basisPlan = defaultBasisPlan(work.spec);
  setParameter(work, parameter, at);
  EigenSolution sol = converge(work, k, opt);
  work.basisPlan = sol.basisUsed;
  const CircuitOperators ops = buildOperators(work);
  auto e01At = [&](double lambda) {
    CircuitModel m = work;
    setParameter(m, parameter, lambda);
    EigenSolution s = eigensolveWithOps(m, ops, k, opt.solve);
    const double e = s.energies[1] - s.energies[0];
    if (!std::isfinite(e))
      throw NumericalFailureError("dispersion_slope: non-finite transition energy");
    return e;
  };
  const double d1 = (e01At(at + step) - e01At(at - step)) / (2.0 * step);
  const double d2 = (e01At(at + 0.5 * step) - e01At(at - 0.5 * step)) / step;
  SlopeEstimate out;
  out.slope = (4.0 * d2 - d1) / 3.0;
  out.errorEstimate = std::abs(d2 - d1) / 3.0;
  out.converged = sol.converged;
  return out;
}

AmplitudeReport dispersion_amplitude(const CircuitModel& model,
                                     const std::string& parameter, int k,
                                     const ConvergeOptions& opt, int coarsePoints,
                                     int threads) {
  if (!parameterIsPeriodic(parameter))
    throw InvalidArgumentError(
        "dispersion_amplitude: parameter must be periodic (n_gate or phi_ext)");
  if (coarsePoints < 5)
    throw InvalidArgumentError("dispersion_amplitude: need at least 5 scan points");

  CircuitModel work = model;
  if (work.basisPlan.empty()) work.basisPlan = defaultBasisPlan(work.spec);
  // Converge at both symmetry points; plans only grow, so the second result
  // is valid at both.
  CircuitModel m0 = work;
  setParameter(m0, parameter, 0.0);
  EigenSolution s0 = converge(m0, k, opt);
  CircuitModel m5 = work;
  setParameter(m5, parameter, 0.5);
  m5.basisPlan = s0.basisUsed;
  EigenSolution s5 = converge(m5, k, opt);
  work.basisPlan = s5.basisUsed;
  const CircuitOperators ops = buildOperators(work);

  AmplitudeReport rep;
  rep.converged = s0.converged && s5.converged;
  rep.coarsePoints = coarsePoints;

  const Index n = coarsePoints;
  std::vector<double> e01(static_cast<size_t>(n), kNaN);
  std::vector<char> ok(static_cast<size_t>(n), 0);
  auto evaluate = [&](double lambda) {
    CircuitModel m = work;
    setParameter(m, parameter, lambda);
    EigenSolution s = eigensolveWithOps(m, ops, k, opt.solve);
    return s.energies[1] - s.energies[0];
  };
  parallelFor(threads, n, [&](Index i) {
    try {
      e01[static_cast<size_t>(i)] =
          evaluate(static_cast<double>(i) / static_cast<double>(n));
      ok[static_cast<size_t>(i)] = 1;
    } catch (const NumericalFailureError&) {
    }
  });

  double mean = 0.0;
  int good = 0;
  Index iMax = -1, iMin = -1;
  for (Index i = 0; i < n; ++i) {
    if (!ok[static_cast<size_t>(i)]) {
      ++rep.unconverged;
      continue;
    }
    const double v = e01[static_cast<size_t>(i)];
    mean += v;
    ++good;
    if (iMax < 0 || v > e01[static_cast<size_t>(iMax)]) iMax = i;
    if (iMin < 0 || v < e01[static_cast<size_t>(iMin)]) iMin = i;
  }
  if (good == 0)
    throw NumericalFailureError("dispersion_amplitude: no scan point converged");
  mean /= good;
  rep.mean = mean;

  const double spacing = 1.0 / static_cast<double>(n);
  double hi = e01[static_cast<size_t>(iMax)];
  double lo = e01[static_cast<size_t>(iMin)];
  rep.argMax = static_cast<double>(iMax) * spacing;
  rep.argMin = static_cast<double>(iMin) * spacing;
  if (hi - lo > kAmplitudeNoiseFloor) {
    try {
      double x = rep.argMax;
      const double refHi =
          goldenRefine(evaluate, rep.argMax - spacing, rep.argMax + spacing,
                       /*maximize=*/true, 1e-5, x);
      if (refHi > hi) {
        hi = refHi;
        rep.argMax = x;
      }
      x = rep.argMin;
      const double refLo =
          goldenRefine(evaluate, rep.argMin - spacing, rep.argMin + spacing,
                       /*maximize=*/false, 1e-5, x);
      if (refLo < lo) {
        lo = refLo;
        rep.argMin = x;
      }
    } catch (const NumericalFailureError&) {
      ++rep.unconverged;  // refinement aborted; coarse extrema stand
    }
  }
  rep.amplitude = hi - lo;
  rep.eta = (rep.amplitude > 0.0 && mean > 0.0) ? -std::log(rep.amplitude / mean)
                                                : kInf;
  return rep;
}

cplx matrix_element(const EigenSolution& sol, const ComplexMatrix& op, int i, int j) {
  if (i < 0 || j < 0 || i >= sol.levels() || j >= sol.levels())
    throw InvalidArgumentError("matrix_element: level index out of range");
  if (op.dim() != sol.states.rows())
    throw InvalidArgumentError("matrix_element: operator dimension " +
                               std::to_string(op.dim()) + " does not match state size " +
                               std::to_string(sol.states.rows()));
  return op.expectation(sol.states.col(i), sol.states.col(j));
}

double pairBlockRadius(const EigenSolution& sol, const ComplexMatrix& op) {
  if (sol.levels() < 2)
    throw InvalidArgumentError("pairBlockRadius: need at least 2 levels");
  const double m00 = std::real(matrix_element(sol, op, 0, 0));
  const double m11 = std::real(matrix_element(sol, op, 1, 1));
  const cplx m01 = matrix_element(sol, op, 0, 1);
  const double mean = 0.5 * (m00 + m11);
  const double half = std::hypot(0.5 * (m00 - m11), std::abs(m01));
  return std::max(std::abs(mean + half), std::abs(mean - half));
}

double logSuppression(double magnitude) {
  return magnitude > 0.0 ? -std::log(magnitude) : kInf;
}

std::vector<double> defaultPhaseWindow(const BasisSpec& basis, int points) {
  if (points < 2)
    throw InvalidArgumentError("defaultPhaseWindow: need at least 2 points");
  double lo = 0.0, hi = 0.0;
  bool halfOpen = false;
  switch (basis.kind) {
    case BasisKind::Charge:
      lo = -kPi;
      hi = kPi;
      halfOpen = true;  // one full period, right endpoint excluded
      break;
    case BasisKind::Oscillator: {
      // Classical turning point of the highest level, ell = sqrt(2) * phi_zpf.
      const double ell = std::numbers::sqrt2 * basis.phiZpf;
      const double turn = ell * std::sqrt(2.0 * basis.oscLevels + 1.0);
      lo = -(turn + 3.0 * ell);
      hi = -lo;
      break;
    }
    case BasisKind::Grid:
      lo = basis.gridMin;
      hi = basis.gridMax;
      halfOpen = basis.periodic;
      break;
  }
  std::vector<double> x(static_cast<size_t>(points));
  const double dx = halfOpen ? (hi - lo) / points : (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) x[static_cast<size_t>(i)] = lo + i * dx;
  return x;
}

Wavefunction1D wavefunction_phase(const EigenSolution& sol, int level,
                                  const std::vector<double>& x) {
  if (sol.basisUsed.size() != 1)
    throw InvalidArgumentError("wavefunction_phase: model is not single-mode");
  if (level < 0 || level >= static_cast<int>(sol.states.cols()))
    throw InvalidArgumentError("wavefunction_phase: level out of range");
  Wavefunction1D w;
  w.x = x;
  w.cell = uniformCell(x, "wavefunction_phase");
  const Eigen::MatrixXcd f = basisFunctions(sol.basisUsed[0], x);
  const Eigen::VectorXcd amp = f * sol.states.col(level);
  w.amplitude.assign(amp.data(), amp.data() + amp.size());
  return w;
}

Wavefunction1D wavefunction_charge(const EigenSolution& sol, int level) {
  if (sol.basisUsed.size() != 1 || sol.basisUsed[0].kind != BasisKind::Charge)
    throw InvalidArgumentError(
        "wavefunction_charge: model is not a single charge-basis mode");
  if (level < 0 || level >= static_cast<int>(sol.states.cols()))
    throw InvalidArgumentError("wavefunction_charge: level out of range");
  const int cutoff = sol.basisUsed[0].chargeCutoff;
  Wavefunction1D w;
  w.cell = 1.0;
  const Index dim = sol.basisUsed[0].dim();
  w.x.resize(static_cast<size_t>(dim));
  w.amplitude.resize(static_cast<size_t>(dim));
  for (Index i = 0; i < dim; ++i) {
    w.x[static_cast<size_t>(i)] = static_cast<double>(i - cutoff);
    w.amplitude[static_cast<size_t>(i)] = sol.states(i, level);
  }
  return w;
}

Wavefunction2D wavefunction2d(const EigenSolution& sol, int level,
                              const std::vector<double>& theta,
                              const std::vector<double>& phi) {
  if (sol.basisUsed.size() != 2)
    throw InvalidArgumentError("wavefunction2d: model is not two-mode");
  if (level < 0 || level >= static_cast<int>(sol.states.cols()))
    throw InvalidArgumentError("wavefunction2d: level out of range");
  const Index dTheta = sol.basisUsed[0].dim();
  const Index dPhi = sol.basisUsed[1].dim();
  Wavefunction2D w;
  w.theta = theta;
  w.phi = phi;
  w.cellTheta = uniformCell(theta, "wavefunction2d theta");
  w.cellPhi = uniformCell(phi, "wavefunction2d phi");
  Eigen::MatrixXcd coeff(dTheta, dPhi);
  const Eigen::VectorXcd& v = sol.states.col(level);
  if (sol.thetaOuter) {
    coeff = Eigen::Map<const Eigen::MatrixXcd>(v.data(), dPhi, dTheta).transpose();
  } else {
    coeff = Eigen::Map<const Eigen::MatrixXcd>(v.data(), dTheta, dPhi);
  }
  const Eigen::MatrixXcd fTheta = basisFunctions(sol.basisUsed[0], theta);
  const Eigen::MatrixXcd fPhi = basisFunctions(sol.basisUsed[1], phi);
  w.amplitude = fTheta * coeff * fPhi.transpose();
  return w;
}

double disjointness(const Wavefunction1D& a, const Wavefunction1D& b) {
  requireSameGrid(a.x, b.x, "disjointness");
  if (std::abs(a.cell - b.cell) > 1e-12)
    throw InvalidArgumentError("disjointness: quadrature cells differ");
  double s = 0.0;
  for (size_t i = 0; i < a.amplitude.size(); ++i)
    s += std::norm(a.amplitude[i]) * std::norm(b.amplitude[i]);
  return s * a.cell;
}

double disjointness(const Wavefunction2D& a, const Wavefunction2D& b) {
  requireSameGrid(a.theta, b.theta, "disjointness theta");
  requireSameGrid(a.phi, b.phi, "disjointness phi");
  if (std::abs(a.cellTheta - b.cellTheta) > 1e-12 ||
      std::abs(a.cellPhi - b.cellPhi) > 1e-12)
    throw InvalidArgumentError("disjointness: quadrature cells differ");
  const double s = (a.amplitude.array().abs2() * b.amplitude.array().abs2()).sum();
  return s * a.cellTheta * a.cellPhi;
}

CrossValidationReport cross_validate(const CircuitModel& model, int k, double tol) {
  if (k < 2) throw InvalidArgumentError("cross_validate: k must be >= 2");
  CircuitModel base = model;
  if (base.basisPlan.empty()) base.basisPlan = defaultBasisPlan(base.spec);
  ConvergeOptions co;
  co.tol = tol;
  EigenSolution a = converge(base, k, co);

  SolveOptions gridSolve;
  gridSolve.preferSparse = true;  // grid routes are banded

  const CircuitFamily fam = model.family();
  CircuitModel gridModel = base;
  GridRoute route;
  if (fam == CircuitFamily::ChargeMode || fam == CircuitFamily::Hybrid) {
    std::vector<BasisSpec> plan = {BasisSpec::MakeGrid(512, -kPi, kPi, true)};
    route = solveGridRoute(gridModel, plan, k, gridSolve);
  } else {
    // Window sized like the default oscillator span, centered on the
    // displaced minimum; widened if any state reaches the edge.
    double eC = 0.0, eJ = 0.0, curvature = 0.0, center = 0.0;
    if (fam == CircuitFamily::FluxMode) {
      const auto& s = std::get<FluxModeSpec>(base.spec);
      eC = s.eC;
      eJ = s.eJ;
      curvature = s.eL;
      center = 2.0 * kPi * base.point.phiExt;
    } else {
      const auto& s = std::get<TwoModeSpec>(base.spec);
      eC = s.eCPhi;
      eJ = 2.0 * s.eJ;
      curvature = 2.0 * s.eL;
      center = kPi * base.point.phiExt;
    }
    const double phiZpf = std::pow(2.0 * eC / curvature, 0.25);
    const double wellSpread = eJ > 0.0 ? std::pow(2.0 * eC / eJ, 0.25) : phiZpf;
    double half = kPi + 4.0 * wellSpread + 2.0 * phiZpf + 3.0;
    const int p1 = fam == CircuitFamily::FluxMode ? 1201 : 701;
    for (int attempt = 0;; ++attempt) {
      std::vector<BasisSpec> plan;
      if (fam == CircuitFamily::TwoMode)
        plan.push_back(a.basisUsed[0]);  // compact mode keeps its charge basis
      plan.push_back(BasisSpec::MakeGrid(p1, center - half, center + half, false));
      CircuitModel probe = gridModel;
      probe.basisPlan = plan;
      EigenSolution sc = eigensolve(probe, k, gridSolve);
      // A window the coarse solve already leaks out of cannot validate;
      // widen before paying for the nested fine solve. The delocalized
      // presets all need slightly over twice the local-spread window, so a
      // 2.25x jump usually lands the final window in one step.
      if (!openGridBoundaryTouched(sc) || attempt >= 2) {
        route = solveGridRouteFrom(gridModel, plan, sc, k, gridSolve);
        break;
      }
      half *= 2.25;
    }
  }

  CrossValidationReport rep;
  rep.basisEnergies = a.energies;
  rep.gridEnergies = route.richardson;
  rep.converged = a.converged && route.converged;
  for (int i = 0; i < k; ++i) {
    const double ea = a.energies[static_cast<size_t>(i)];
    const double eg = route.richardson[static_cast<size_t>(i)];
    const double rel = std::abs(ea - eg) / std::max(1.0, std::abs(ea));
    rep.maxRelativeDiscrepancy = std::max(rep.maxRelativeDiscrepancy, rel);
  }
  char buf[240];
  std::snprintf(buf, sizeof buf, "%s vs %s: max relative discrepancy %.3e over %d levels",
                familyName(fam).c_str(), route.describe.c_str(),
                rep.maxRelativeDiscrepancy, k);
  rep.detail = buf;
  return rep;
}

}  // namespace protectq
