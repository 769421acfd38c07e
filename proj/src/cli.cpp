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

#include "protectq/cli.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "protectq/coherence.hpp"
#include "protectq/config.hpp"
#include "protectq/emit.hpp"
#include "protectq/errors.hpp"
#include "protectq/presets.hpp"
#include "protectq/spectral.hpp"

namespace protectq::cli {
namespace {

constexpr double kValidateThreshold = 1e-6;

double unitScale(const RunConfig& cfg) {
  return cfg.angularUnits ? 2.0 * std::numbers::pi : 1.0;
}

const char* unitName(const RunConfig& cfg) {
  return cfg.angularUnits ? "Grad/s" : "GHz";
}

std::vector<double> linspace(double from, double to, int points) {
  std::vector<double> g(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i)
    g[static_cast<size_t>(i)] = from + (to - from) * i / (points - 1);
  g.back() = to;
  return g;
}

void writeTableOutputs(const RunConfig& cfg, const OutputTable& table,
                       const std::map<std::string, std::vector<double>>& extraAxes) {
  const std::string text = cfg.format == "csv"
                               ? csvText(table, cfg.precision)
                               : jsonTableText(table, cfg.values, cfg.precision, extraAxes);
  writeFile(cfg.outputPath, text);
  writeFile(cfg.outputPath + ".config", serializeConfig(cfg.values));
}

int runSpectrum(const RunConfig& cfg, std::ostream& out) {
  ConvergeOptions co;
  co.tol = cfg.tol;
  const EigenSolution sol = converge(cfg.model, cfg.k, co);
  const double s = unitScale(cfg);
  OutputTable t;
  t.columns = {"level", "energy", "e_above_ground", "converged"};
  for (int i = 0; i < cfg.k; ++i)
    t.rows.push_back({static_cast<double>(i), s * sol.energies[static_cast<size_t>(i)],
                      s * (sol.energies[static_cast<size_t>(i)] - sol.energies[0]),
                      sol.converged ? 1.0 : 0.0});
  writeTableOutputs(cfg, t, {});
  out << "spectrum: wrote " << cfg.outputPath << " (" << cfg.k << " levels, E01 = "
      << formatValue(s * sol.e01(), 6) << " " << unitName(cfg) << ")\n";
  return sol.converged ? 0 : 4;
}

int runSweep(const RunConfig& cfg, std::ostream& out) {
  SweepRequest req;
  req.parameter = cfg.param;
  req.grid = linspace(cfg.from, cfg.to, cfg.points);
  req.k = cfg.k;
  req.tol = cfg.tol;
  req.threads = cfg.threads;
  const SpectrumTable st = sweep(cfg.model, req);
  const double s = unitScale(cfg);
  OutputTable t;
  t.columns.push_back(cfg.param);
  for (int i = 0; i < cfg.k; ++i) t.columns.push_back("E" + std::to_string(i));
  t.columns.push_back("E01");
  t.columns.push_back("converged");
  bool allRows = st.converged;
  for (size_t i = 0; i < st.grid.size(); ++i) {
    std::vector<double> row{st.grid[i]};
    for (int j = 0; j < cfg.k; ++j)
      row.push_back(s * st.energies[i][static_cast<size_t>(j)]);
    row.push_back(s * (st.energies[i][1] - st.energies[i][0]));
    const bool ok = st.converged && st.pointConverged[i] != 0;
    allRows = allRows && ok;
    row.push_back(ok ? 1.0 : 0.0);
    t.rows.push_back(std::move(row));
  }
  writeTableOutputs(cfg, t, {{cfg.param, st.grid}});
  out << "sweep: wrote " << cfg.outputPath << " (" << st.grid.size() << " points, "
      << cfg.param << " in [" << formatValue(cfg.from, 6) << ", "
      << formatValue(cfg.to, 6) << "])\n";
  return allRows ? 0 : 4;
}

int runPhaseDiagram(const RunConfig& cfg, std::ostream& out) {
  PhaseDiagramRequest req;
  req.fluxMode = cfg.fluxDiagram;
  req.ejOverEc = cfg.ejGrid;
  req.elOverEc = cfg.elGrid;
  req.eC = cfg.diagramEc;
  req.tol = cfg.tol;
  req.threads = cfg.threads;
  const PhaseDiagramResult res = phase_diagram(req);
  const double s = unitScale(cfg);
  OutputTable t;
  std::map<std::string, std::vector<double>> axes{{"ej_over_ec", res.ejOverEc}};
  if (res.fluxMode) {
    axes["el_over_ec"] = res.elOverEc;
    t.columns = {"ej_over_ec", "el_over_ec",      "slope",
                 "log10_slope", "matrix_element", "log10_matrix_element",
                 "coupling_element", "converged"};
    for (const PhaseDiagramCell& c : res.cells)
      t.rows.push_back({c.ejOverEc, c.elOverEc, s * c.slope, std::log10(s * c.slope),
                        c.matrixElement, std::log10(c.matrixElement),
                        s * c.couplingElement, c.converged ? 1.0 : 0.0});
  } else {
    t.columns = {"ej_over_ec", "slope", "log10_slope", "converged"};
    for (const PhaseDiagramCell& c : res.cells)
      t.rows.push_back(
          {c.ejOverEc, s * c.slope, std::log10(s * c.slope), c.converged ? 1.0 : 0.0});
  }
  writeTableOutputs(cfg, t, axes);
  out << "phase-diagram: wrote " << cfg.outputPath << " (" << res.cells.size()
      << " cells, " << (res.fluxMode ? "flux" : "charge") << " mode, E_C = "
      << formatValue(res.eC, 6) << " GHz)\n";
  return res.allConverged ? 0 : 4;
}

std::string channelMetricsJson(const ChannelMetrics& m, double scale, int precision) {
  if (!m.present) return "{\"present\":false}";
  std::string j = "{\"present\":true";
  j += ",\"slope\":" + jsonNumber(scale * m.slope, precision);
  j += ",\"dispersion_amplitude\":" + jsonNumber(scale * m.dispersionAmplitude, precision);
  j += ",\"mean_e01\":" + jsonNumber(scale * m.meanE01, precision);
  j += ",\"eta\":" + jsonNumber(m.eta, precision);
  j += ",\"matrix_element\":" + jsonNumber(m.matrixElement, precision);
  j += ",\"zeta\":" + jsonNumber(m.zeta, precision);
  j += std::string(",\"converged\":") + (m.converged ? "true" : "false");
  j += "}";
  return j;
}

std::string rateJson(const RateEstimate& r, int precision) {
  std::string j = "{\"gamma_phi\":" + jsonNumber(r.gammaPhi, precision);
  j += ",\"gamma_1\":" + jsonNumber(r.gamma1, precision);
  j += ",\"t2\":" + jsonNumber(r.t2, precision);
  j += std::string(",\"mode\":\"") +
       (r.mode == RateMode::Relative ? "relative" : "absolute") + "\"}";
  return j;
}

int runCoherence(const RunConfig& cfg, std::ostream& out) {
  MetricsOptions opt;
  opt.tol = cfg.tol;
  opt.threads = cfg.threads;
  const ProtectionMetrics metrics = protection_metrics(cfg.model, opt);
  const ProtectionGrade grade = classify_protection(metrics);
  const double s = unitScale(cfg);

  std::string j = "{\"schema\":1,\"meta\":{\"version\":\"" + jsonEscape(kVersion) +
                  "\",\"config\":{";
  bool first = true;
  for (const auto& [k, v] : cfg.values) {
    if (!first) j += ',';
    first = false;
    j += "\"" + jsonEscape(k) + "\":\"" + jsonEscape(v) + "\"";
  }
  j += "}},\"report\":{";
  j += "\"charge\":" + channelMetricsJson(metrics.charge, s, cfg.precision);
  j += ",\"flux\":" + channelMetricsJson(metrics.flux, s, cfg.precision);
  j += ",\"grades\":{";
  j += "\"charge_dephasing\":\"" + gradeName(grade.chargeDephasing) + "\"";
  j += ",\"flux_dephasing\":\"" + gradeName(grade.fluxDephasing) + "\"";
  j += ",\"relaxation\":\"" + gradeName(grade.relaxation) + "\"";
  j += ",\"threshold_exponent\":" + jsonNumber(grade.thresholds.exponent, cfg.precision);
  j += ",\"threshold_slope\":" + jsonNumber(grade.thresholds.slopeGhz, cfg.precision);
  j += "}";

  double gamma1Total = 0.0, gammaPhiTotal = 0.0;
  bool anyRate = false;
  std::string ratesJson;
  for (const auto& [name, noise] :
       {std::pair<std::string, const std::optional<NoiseSpec>*>{"charge", &cfg.chargeNoise},
        std::pair<std::string, const std::optional<NoiseSpec>*>{"flux", &cfg.fluxNoise}}) {
    if (!noise->has_value()) continue;
    const NoiseChannel ch =
        name == "charge" ? NoiseChannel::Charge : NoiseChannel::Flux;
    RateEstimate rate = dephasing_rate(cfg.model, ch, **noise);
    rate.gamma1 = relaxation_rate(cfg.model, ch, **noise).gamma1;
    rate.t2 = combine_t2(rate.gamma1, rate.gammaPhi);
    gamma1Total += rate.gamma1;
    gammaPhiTotal += rate.gammaPhi;
    if (anyRate) ratesJson += ',';
    ratesJson += "\"" + name + "\":" + rateJson(rate, cfg.precision);
    anyRate = true;
  }
  if (anyRate) {
    j += ",\"rates\":{" + ratesJson;
    j += ",\"t2_total\":" + jsonNumber(combine_t2(gamma1Total, gammaPhiTotal), cfg.precision);
    j += "}";
  }
  j += "}}\n";

  writeFile(cfg.outputPath, j);
  writeFile(cfg.outputPath + ".config", serializeConfig(cfg.values));
  out << "coherence: wrote " << cfg.outputPath << " (charge dephasing "
      << gradeName(grade.chargeDephasing) << ", flux dephasing "
      << gradeName(grade.fluxDephasing) << ", relaxation "
      << gradeName(grade.relaxation) << ")\n";
  const bool converged = (!metrics.charge.present || metrics.charge.converged) &&
                         (!metrics.flux.present || metrics.flux.converged);
  return converged ? 0 : 4;
}

int runWavefunction(const RunConfig& cfg, std::ostream& out) {
  const int k = std::max(2, std::max(cfg.k, cfg.level + 1));
  ConvergeOptions co;
  co.tol = cfg.tol;
  const EigenSolution sol = converge(cfg.model, k, co);
  OutputTable t;
  if (cfg.model.modeCount() == 2) {
    const std::vector<double> theta = defaultPhaseWindow(sol.basisUsed[0], cfg.gridPoints);
    const std::vector<double> phi = defaultPhaseWindow(sol.basisUsed[1], cfg.gridPoints);
    const Wavefunction2D w = wavefunction2d(sol, cfg.level, theta, phi);
    t.columns = {"theta", "phi", "re", "im", "abs2"};
    for (size_t i = 0; i < theta.size(); ++i)
      for (size_t j = 0; j < phi.size(); ++j) {
        const cplx a = w.amplitude(static_cast<Index>(i), static_cast<Index>(j));
        t.rows.push_back({theta[i], phi[j], a.real(), a.imag(), std::norm(a)});
      }
  } else if (cfg.space == "charge") {
    const Wavefunction1D w = wavefunction_charge(sol, cfg.level);
    t.columns = {"n", "re", "im", "abs2"};
    for (size_t i = 0; i < w.x.size(); ++i)
      t.rows.push_back(
          {w.x[i], w.amplitude[i].real(), w.amplitude[i].imag(), std::norm(w.amplitude[i])});
  } else {
    const std::vector<double> x = defaultPhaseWindow(sol.basisUsed[0], cfg.gridPoints);
    const Wavefunction1D w = wavefunction_phase(sol, cfg.level, x);
    const bool extended = cfg.model.family() == CircuitFamily::FluxMode;
    t.columns = {extended ? "phi" : "theta", "re", "im", "abs2"};
    for (size_t i = 0; i < w.x.size(); ++i)
      t.rows.push_back(
          {w.x[i], w.amplitude[i].real(), w.amplitude[i].imag(), std::norm(w.amplitude[i])});
  }
  writeTableOutputs(cfg, t, {});
  out << "wavefunction: wrote " << cfg.outputPath << " (level " << cfg.level << ", "
      << t.rows.size() << " samples)\n";
  return sol.converged ? 0 : 4;
}

int runValidate(const RunConfig& cfg, std::ostream& out) {
  const CrossValidationReport rep = cross_validate(cfg.model, cfg.k, cfg.tol);
  out << "validate: " << rep.detail << "\n";
  for (size_t i = 0; i < rep.basisEnergies.size(); ++i) {
    const double rel = std::abs(rep.basisEnergies[i] - rep.gridEnergies[i]) /
                       std::max(1.0, std::abs(rep.basisEnergies[i]));
    out << "  level " << i << ": basis " << formatValue(rep.basisEnergies[i], 12)
        << "  grid " << formatValue(rep.gridEnergies[i], 12) << "  rel "
        << formatValue(rel, 3) << "\n";
  }
  const bool pass = rep.converged && rep.maxRelativeDiscrepancy < kValidateThreshold;
  out << "validate: converged = " << (rep.converged ? "true" : "false")
      << ", max relative discrepancy " << formatValue(rep.maxRelativeDiscrepancy, 3)
      << (pass ? " < " : " >= ") << formatValue(kValidateThreshold, 3) << " -> "
      << (pass ? "pass" : "fail") << "\n";

  std::string j = "{\"schema\":1,\"meta\":{\"version\":\"" + jsonEscape(kVersion) +
                  "\",\"config\":{";
  bool first = true;
  for (const auto& [k, v] : cfg.values) {
    if (!first) j += ',';
    first = false;
    j += "\"" + jsonEscape(k) + "\":\"" + jsonEscape(v) + "\"";
  }
  j += "}},\"report\":{\"basis_energies\":[";
  for (size_t i = 0; i < rep.basisEnergies.size(); ++i) {
    if (i) j += ',';
    j += jsonNumber(rep.basisEnergies[i], cfg.precision);
  }
  j += "],\"grid_energies\":[";
  for (size_t i = 0; i < rep.gridEnergies.size(); ++i) {
    if (i) j += ',';
    j += jsonNumber(rep.gridEnergies[i], cfg.precision);
  }
  j += "],\"max_relative_discrepancy\":" +
       jsonNumber(rep.maxRelativeDiscrepancy, cfg.precision);
  j += std::string(",\"converged\":") + (rep.converged ? "true" : "false");
  j += ",\"detail\":\"" + jsonEscape(rep.detail) + "\"}}\n";
  writeFile(cfg.outputPath, j);
  writeFile(cfg.outputPath + ".config", serializeConfig(cfg.values));
  return pass ? 0 : 4;
}

int runPresets(std::ostream& out) {
  out << "name                family       operating point        parameters (GHz)\n";
  for (const Preset& p : presets()) {
    char point[64];
    std::snprintf(point, sizeof point, "n_gate=%-5g phi_ext=%-5g", p.model.point.nGate,
                  p.model.point.phiExt);
    std::string params = std::visit(
        [](const auto& s) -> std::string {
          using T = std::decay_t<decltype(s)>;
          char buf[160];
          if constexpr (std::is_same_v<T, ChargeModeSpec>) {
            std::snprintf(buf, sizeof buf, "E_C=%g E_J=%g", s.eC, s.eJ);
          } else if constexpr (std::is_same_v<T, FluxModeSpec>) {
            std::snprintf(buf, sizeof buf, "E_C=%g E_J=%g E_L=%g", s.eC, s.eJ, s.eL);
          } else if constexpr (std::is_same_v<T, TwoModeSpec>) {
            std::snprintf(buf, sizeof buf, "E_C_theta=%g E_C_phi=%g E_J=%g E_L=%g",
                          s.eCTheta, s.eCPhi, s.eJ, s.eL);
          } else {
            std::string t1, t2;
            for (double t : s.tJ1) t1 += (t1.empty() ? "" : ",") + std::to_string(t).substr(0, 4);
            for (double t : s.tJ2) t2 += (t2.empty() ? "" : ",") + std::to_string(t).substr(0, 4);
            std::snprintf(buf, sizeof buf, "E_C=%g delta=%g T_J1=[%s] T_J2=[%s]", s.eC,
                          s.delta, t1.c_str(), t2.c_str());
          }
          return buf;
        },
        p.model.spec);
    char line[320];
    std::snprintf(line, sizeof line, "%-19s %-12s %-22s %s\n", p.name.c_str(),
                  familyName(p.model.family()).c_str(), point, params.c_str());
    out << line;
  }
  return 0;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == "spectrum") return runSpectrum(cfg, out);
  if (cfg.command == "sweep") return runSweep(cfg, out);
  if (cfg.command == "phase-diagram") return runPhaseDiagram(cfg, out);
  if (cfg.command == "coherence") return runCoherence(cfg, out);
  if (cfg.command == "wavefunction") return runWavefunction(cfg, out);
  if (cfg.command == "validate") return runValidate(cfg, out);
  if (cfg.command == "presets") return runPresets(out);
  throw ConfigError({"unknown command '" + cfg.command + "'"});
}

void addCommonFlags(CLI::App* cmd, KeyValues& overrides, std::string& configPath) {
  cmd->add_option("--config", configPath, "key = value config file");
  cmd->add_option_function<std::vector<std::string>>(
      "--set",
      [&overrides](const std::vector<std::string>& kvs) {
        for (const std::string& kv : kvs) {
          const size_t eq = kv.find('=');
          if (eq == std::string::npos)
            throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
          overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
      },
      "override any config key (key=value, repeatable)");
  auto key = [&overrides, cmd](const std::string& flag, const std::string& k,
                               const std::string& desc) {
    cmd->add_option_function<std::string>(
        flag, [&overrides, k](const std::string& v) { overrides[k] = v; }, desc);
  };
  key("--preset", "model.preset", "start from a named device preset");
  key("--n-gate", "model.n_gate", "offset charge in units of 2e");
  key("--phi-ext", "model.phi_ext", "external flux in units of the flux quantum");
  key("-k,--levels", "task.k", "number of eigenlevels");
  key("--tol", "task.tol", "convergence tolerance, GHz");
  key("-o,--output", "output.path", "output file path");
  key("--format", "output.format", "csv or json");
  key("--precision", "output.precision", "significant digits in outputs");
  key("--units", "output.units", "ghz or angular");
  key("--threads", "run.threads", "worker threads (0 = auto)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  KeyValues overrides;
  std::string configPath;

  CLI::App app{"spectra, sweeps and noise-protection metrics of superconducting circuit models"};
  app.name("protectq");
  app.require_subcommand(0, 1);
  addCommonFlags(&app, overrides, configPath);

  auto key = [&overrides](CLI::App* cmd, const std::string& flag, const std::string& k,
                          const std::string& desc) {
    cmd->add_option_function<std::string>(
        flag, [&overrides, k](const std::string& v) { overrides[k] = v; }, desc);
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "lowest eigenenergies at the operating point");
  CLI::App* sweepCmd = app.add_subcommand("sweep", "energy levels along one parameter");
  CLI::App* phase = app.add_subcommand("phase-diagram", "protection metrics over E_J/E_C and E_L/E_C");
  CLI::App* coherence = app.add_subcommand("coherence", "protection metrics, grades and optional rates");
  CLI::App* wavefunction = app.add_subcommand("wavefunction", "eigenstate amplitudes on a phase grid");
  CLI::App* validate = app.add_subcommand("validate", "cross-check basis eigenvalues against a grid solve");
  CLI::App* presetsCmd = app.add_subcommand("presets", "list the built-in device presets");
  std::string presetsAction = "list";
  presetsCmd->add_option("action", presetsAction, "only 'list' is supported");

  for (CLI::App* cmd : {spectrum, sweepCmd, phase, coherence, wavefunction, validate})
    addCommonFlags(cmd, overrides, configPath);

  key(sweepCmd, "--param", "task.param", "parameter to sweep");
  key(sweepCmd, "--from", "task.from", "sweep start");
  key(sweepCmd, "--to", "task.to", "sweep end");
  key(sweepCmd, "--points", "task.points", "number of sweep points");

  key(wavefunction, "--level", "task.level", "eigenstate index");
  key(wavefunction, "--space", "task.space", "phase or charge representation");
  key(wavefunction, "--grid-points", "task.grid_points", "samples per axis");

  key(phase, "--mode", "task.mode", "flux or charge diagram");
  key(phase, "--ej-min", "task.ej_min", "E_J/E_C lower bound");
  key(phase, "--ej-max", "task.ej_max", "E_J/E_C upper bound");
  key(phase, "--ej-points", "task.ej_points", "E_J/E_C grid size");
  key(phase, "--el-min", "task.el_min", "E_L/E_C lower bound");
  key(phase, "--el-max", "task.el_max", "E_L/E_C upper bound");
  key(phase, "--el-points", "task.el_points", "E_L/E_C grid size");
  key(phase, "--ec", "task.E_C", "charging energy of every cell, GHz");

  std::vector<const char*> argv;
  argv.push_back("protectq");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    // Help-style requests print to stdout and succeed; real usage errors
    // follow the "error:" stderr contract.
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success))
      return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    for (CLI::App* cmd : app.get_subcommands()) {
      if (cmd == presetsCmd && presetsAction != "list")
        throw ConfigError({"presets: unknown action '" + presetsAction + "'"});
      overrides["task.command"] = cmd->get_name();
    }
    const KeyValues fileValues =
        configPath.empty() ? KeyValues{} : parseConfigFile(configPath);
    const RunConfig cfg = resolveConfig(fileValues, overrides);
    return dispatch(cfg, out);
  } catch (const ConfigError& e) {
    for (const std::string& p : e.problems()) err << "error: " << p << "\n";
    return 2;
  } catch (const ChannelNotPresentError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InterpolationRangeError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalFailureError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace protectq::cli
