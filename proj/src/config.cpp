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

#include "protectq/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "protectq/errors.hpp"
#include "protectq/parallel.hpp"
#include "protectq/presets.hpp"
#include "protectq/spectral.hpp"

namespace protectq::cli {
namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool validKeyName(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.')
      return false;
  return true;
}

const std::set<std::string>& knownKeys() {
  static const std::set<std::string> keys = {
      "model.preset", "model.family", "model.E_C", "model.E_J", "model.E_L",
      "model.E_C_theta", "model.E_C_phi", "model.delta", "model.T_J1", "model.T_J2",
      "model.n_gate", "model.phi_ext", "model.basis.charge_cutoff",
      "model.basis.osc_levels", "model.basis.grid_points",
      "task.command", "task.param", "task.from", "task.to", "task.points",
      "task.k", "task.tol", "task.level", "task.space", "task.grid_points",
      "task.mode", "task.ej_min", "task.ej_max", "task.ej_points",
      "task.el_min", "task.el_max", "task.el_points", "task.E_C",
      "noise.charge.kind", "noise.charge.amplitude", "noise.charge.s0",
      "noise.charge.table", "noise.charge.ir_cutoff",
      "noise.flux.kind", "noise.flux.amplitude", "noise.flux.s0",
      "noise.flux.table", "noise.flux.ir_cutoff",
      "output.format", "output.path", "output.precision", "output.units",
      "run.threads"};
  return keys;
}

bool parseDoubleStrict(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

bool parseIntStrict(const std::string& text, long& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtol(t.c_str(), &end, 10);
  return end == t.c_str() + t.size();
}

std::vector<std::string> splitList(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

// Gathers problems so every mistake is reported in one pass.
class Resolver {
 public:
  explicit Resolver(const KeyValues& merged) : merged_(merged) {}

  bool has(const std::string& key) const { return merged_.count(key) > 0; }

  // Raw user text; echoes it so the resolved config reproduces the input.
  std::optional<std::string> raw(const std::string& key) {
    auto it = merged_.find(key);
    if (it == merged_.end()) return std::nullopt;
    echoed_[key] = it->second;
    return it->second;
  }

  std::string getString(const std::string& key, const std::string& def) {
    auto v = raw(key);
    if (!v) {
      if (!def.empty()) echoed_[key] = def;
      return def;
    }
    return trim(*v);
  }

  std::string getEnum(const std::string& key, const std::string& def,
                      const std::vector<std::string>& allowed) {
    const std::string v = getString(key, def);
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
      std::string opts;
      for (const auto& a : allowed) opts += (opts.empty() ? "" : ", ") + a;
      problem(key + " = '" + v + "': expected one of {" + opts + "}");
      return def;
    }
    return v;
  }

  double getDouble(const std::string& key, double def, const std::string& defText) {
    auto v = raw(key);
    if (!v) {
      echoed_[key] = defText;
      return def;
    }
    double out = def;
    if (!parseDoubleStrict(*v, out)) {
      problem(key + " = '" + *v + "': not a number");
      return def;
    }
    return out;
  }

  long getInt(const std::string& key, long def, const std::string& defText) {
    auto v = raw(key);
    if (!v) {
      echoed_[key] = defText;
      return def;
    }
    long out = def;
    if (!parseIntStrict(*v, out)) {
      problem(key + " = '" + *v + "': not an integer");
      return def;
    }
    return out;
  }

  std::optional<double> optionalDouble(const std::string& key) {
    auto v = raw(key);
    if (!v) return std::nullopt;
    double out = 0.0;
    if (!parseDoubleStrict(*v, out)) {
      problem(key + " = '" + *v + "': not a number");
      return std::nullopt;
    }
    return out;
  }

  std::optional<std::vector<double>> optionalDoubleList(const std::string& key) {
    auto v = raw(key);
    if (!v) return std::nullopt;
    std::vector<double> out;
    for (const std::string& part : splitList(*v)) {
      double x = 0.0;
      if (!parseDoubleStrict(part, x)) {
        problem(key + ": '" + part + "' is not a number");
        return std::nullopt;
      }
      out.push_back(x);
    }
    return out;
  }

  void problem(const std::string& p) { problems_.push_back(p); }

  void finish() {
    if (!problems_.empty()) throw ConfigError(problems_);
  }

  KeyValues takeEchoed() { return std::move(echoed_); }

  bool hasProblems() const { return !problems_.empty(); }

 private:
  const KeyValues& merged_;
  KeyValues echoed_;
  std::vector<std::string> problems_;
};

struct FamilyFields {
  std::vector<std::string> required;  // energy keys
  bool hasGate = false;
  bool hasFlux = false;
};

FamilyFields familyFields(CircuitFamily fam) {
  switch (fam) {
    case CircuitFamily::ChargeMode:
      return {{"model.E_C", "model.E_J"}, true, false};
    case CircuitFamily::FluxMode:
      return {{"model.E_C", "model.E_J", "model.E_L"}, false, true};
    case CircuitFamily::TwoMode:
      return {{"model.E_C_theta", "model.E_C_phi", "model.E_J", "model.E_L"}, true, true};
    case CircuitFamily::Hybrid:
      return {{"model.E_C", "model.delta", "model.T_J1", "model.T_J2"}, true, true};
  }
  return {};
}

double* specField(CircuitSpec& spec, const std::string& key) {
  return std::visit(
      [&](auto& s) -> double* {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ChargeModeSpec>) {
          if (key == "model.E_C") return &s.eC;
          if (key == "model.E_J") return &s.eJ;
        } else if constexpr (std::is_same_v<T, FluxModeSpec>) {
          if (key == "model.E_C") return &s.eC;
          if (key == "model.E_J") return &s.eJ;
          if (key == "model.E_L") return &s.eL;
        } else if constexpr (std::is_same_v<T, TwoModeSpec>) {
          if (key == "model.E_C_theta") return &s.eCTheta;
          if (key == "model.E_C_phi") return &s.eCPhi;
          if (key == "model.E_J") return &s.eJ;
          if (key == "model.E_L") return &s.eL;
        } else {
          if (key == "model.E_C") return &s.eC;
          if (key == "model.delta") return &s.delta;
        }
        return nullptr;
      },
      spec);
}

// E_J may be zero (free-rotor limits are legitimate); the others must be
// strictly positive.
bool strictlyPositiveField(const std::string& key) { return key != "model.E_J"; }

std::string canonicalDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void resolveModel(Resolver& r, RunConfig& cfg) {
  CircuitModel model;
  bool haveModel = false;

  if (auto presetName = r.raw("model.preset")) {
    const Preset* p = findPreset(trim(*presetName));
    if (!p) {
      std::string known;
      for (const Preset& q : presets()) known += (known.empty() ? "" : ", ") + q.name;
      r.problem("model.preset = '" + trim(*presetName) + "': unknown preset (known: " +
                known + ")");
      return;
    }
    model = p->model;
    haveModel = true;
    if (r.has("model.family")) {
      const std::string fam = trim(*r.raw("model.family"));
      if (fam != familyName(model.family()))
        r.problem("model.family = '" + fam + "': preset '" + p->name + "' is " +
                  familyName(model.family()));
    }
  } else if (!r.has("model.family")) {
    r.problem("model.preset or model.family is required for this command");
    return;
  } else {
    const std::string fam =
        r.getEnum("model.family", "", {"charge-mode", "flux-mode", "two-mode", "hybrid"});
    if (fam == "charge-mode") model.spec = ChargeModeSpec{};
    else if (fam == "flux-mode") model.spec = FluxModeSpec{};
    else if (fam == "two-mode") model.spec = TwoModeSpec{};
    else if (fam == "hybrid") model.spec = HybridSpec{};
    else return;  // getEnum already recorded the problem
    haveModel = true;
    for (const std::string& key : familyFields(model.family()).required) {
      if (key == "model.T_J1" || key == "model.T_J2") continue;  // handled below
      if (!r.has(key)) r.problem(key + " is required for " + familyName(model.family()));
    }
    if (model.family() == CircuitFamily::Hybrid) {
      for (const char* key : {"model.T_J1", "model.T_J2"})
        if (!r.has(key))
          r.problem(std::string(key) + " is required for hybrid");
    }
  }
  if (!haveModel) return;

  const FamilyFields fields = familyFields(model.family());

  // Energy overrides; keys outside the family are rejected by name.
  for (const char* key : {"model.E_C", "model.E_J", "model.E_L", "model.E_C_theta",
                          "model.E_C_phi", "model.delta"}) {
    if (!r.has(key)) continue;
    double* slot = specField(model.spec, key);
    if (!slot) {
      r.problem(std::string(key) + ": not a parameter of " + familyName(model.family()));
      continue;
    }
    if (auto v = r.optionalDouble(key)) {
      if (strictlyPositiveField(key) ? !(*v > 0.0) : *v < 0.0) {
        r.problem(std::string(key) + " = " + canonicalDouble(*v) +
                  (strictlyPositiveField(key) ? ": must be > 0" : ": must be >= 0"));
      } else {
        *slot = *v;
      }
    }
  }
  for (const char* key : {"model.T_J1", "model.T_J2"}) {
    if (!r.has(key)) continue;
    if (model.family() != CircuitFamily::Hybrid) {
      r.problem(std::string(key) + ": not a parameter of " + familyName(model.family()));
      continue;
    }
    if (auto list = r.optionalDoubleList(key)) {
      if (list->empty()) {
        r.problem(std::string(key) + ": needs at least one transmission");
        continue;
      }
      bool ok = true;
      for (double t : *list)
        if (t < 0.0 || t > 1.0) {
          r.problem(std::string(key) + ": transmissions must lie in [0, 1]");
          ok = false;
          break;
        }
      if (ok) {
        auto& h = std::get<HybridSpec>(model.spec);
        (std::string(key) == "model.T_J1" ? h.tJ1 : h.tJ2) = *list;
      }
    }
  }

  // Control point; charge-only circuits have no flux knob and vice versa.
  if (fields.hasGate) {
    model.point.nGate =
        r.getDouble("model.n_gate", model.point.nGate, canonicalDouble(model.point.nGate));
  } else if (r.has("model.n_gate")) {
    r.problem("model.n_gate: " + familyName(model.family()) + " has no charge channel");
  }
  if (fields.hasFlux) {
    model.point.phiExt = r.getDouble("model.phi_ext", model.point.phiExt,
                                     canonicalDouble(model.point.phiExt));
  } else if (r.has("model.phi_ext")) {
    r.problem("model.phi_ext: " + familyName(model.family()) + " has no flux channel");
  }

  if (!r.hasProblems()) {
    try {
      validateSpec(model.spec);
    } catch (const InvalidArgumentError& e) {
      r.problem(std::string("model: ") + e.what());
    }
  }

  // Basis overrides start from the default plan.
  const bool wantsCutoff = r.has("model.basis.charge_cutoff");
  const bool wantsLevels = r.has("model.basis.osc_levels");
  const bool wantsGrid = r.has("model.basis.grid_points");
  if ((wantsCutoff || wantsLevels || wantsGrid) && !r.hasProblems()) {
    std::vector<BasisSpec> plan = defaultBasisPlan(model.spec);
    auto applyInt = [&](const char* key, BasisKind kind, auto setter) {
      if (!r.has(key)) return;
      const long v = r.getInt(key, 0, "0");
      if (v < 4) {
        r.problem(std::string(key) + ": must be an integer >= 4");
        return;
      }
      bool found = false;
      for (BasisSpec& b : plan)
        if (b.kind == kind) {
          setter(b, static_cast<int>(v));
          found = true;
        }
      if (!found) r.problem(std::string(key) + ": the model has no such mode");
    };
    applyInt("model.basis.charge_cutoff", BasisKind::Charge,
             [](BasisSpec& b, int v) { b.chargeCutoff = v; });
    applyInt("model.basis.osc_levels", BasisKind::Oscillator,
             [](BasisSpec& b, int v) { b.oscLevels = v; });
    applyInt("model.basis.grid_points", BasisKind::Grid,
             [](BasisSpec& b, int v) { b.gridPoints = v; });
    if (!r.hasProblems()) model.basisPlan = std::move(plan);
  }

  cfg.model = std::move(model);
  cfg.hasModel = true;
}

std::optional<NoiseSpec> resolveNoise(Resolver& r, NoiseChannel ch) {
  const std::string base =
      ch == NoiseChannel::Charge ? "noise.charge." : "noise.flux.";
  const bool any = r.has(base + "kind") || r.has(base + "amplitude") ||
                   r.has(base + "s0") || r.has(base + "table") ||
                   r.has(base + "ir_cutoff");
  if (!any) return std::nullopt;
  NoiseSpec spec;
  spec.channel = ch;
  if (!r.has(base + "kind")) {
    r.problem(base + "kind is required when a " + channelName(ch) +
              " noise section is present");
    return std::nullopt;
  }
  const std::string kind =
      r.getEnum(base + "kind", "", {"one_over_f", "white", "table"});
  if (kind == "one_over_f") {
    spec.kind = NoiseKind::OneOverF;
    if (auto v = r.optionalDouble(base + "amplitude")) spec.amplitude = *v;
    else r.problem(base + "amplitude is required for one_over_f noise");
  } else if (kind == "white") {
    spec.kind = NoiseKind::White;
    if (auto v = r.optionalDouble(base + "s0")) spec.s0 = *v;
    else r.problem(base + "s0 is required for white noise");
  } else if (kind == "table") {
    spec.kind = NoiseKind::Table;
    if (auto rawTable = r.raw(base + "table")) {
      for (const std::string& part : splitList(*rawTable)) {
        const size_t colon = part.find(':');
        double f = 0.0, s = 0.0;
        if (colon == std::string::npos ||
            !parseDoubleStrict(part.substr(0, colon), f) ||
            !parseDoubleStrict(part.substr(colon + 1), s)) {
          r.problem(base + "table: expected 'frequency:psd' pairs, got '" + part + "'");
          break;
        }
        spec.table.emplace_back(f, s);
      }
    } else {
      r.problem(base + "table is required for table noise");
    }
  } else {
    return std::nullopt;  // getEnum already recorded the problem
  }
  spec.irCutoffHz = r.getDouble(base + "ir_cutoff", 1.0, "1");
  if (!r.hasProblems()) {
    try {
      validateNoise(spec);
    } catch (const InvalidArgumentError& e) {
      r.problem(base.substr(0, base.size() - 1) + ": " + e.what());
    }
  }
  return spec;
}

std::vector<double> logGrid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<size_t>(n));
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[static_cast<size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  return g;
}

}  // namespace

KeyValues parseConfigText(const std::string& text, const std::string& origin) {
  KeyValues out;
  std::vector<std::string> problems;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const size_t eq = t.find('=');
    const std::string where = origin + ":" + std::to_string(lineNo);
    if (eq == std::string::npos) {
      problems.push_back(where + ": expected 'key = value', got '" + t + "'");
      continue;
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (!validKeyName(key)) {
      problems.push_back(where + ": invalid key '" + key + "'");
      continue;
    }
    if (value.empty()) {
      problems.push_back(where + ": empty value for '" + key + "'");
      continue;
    }
    if (!out.emplace(key, value).second)
      problems.push_back(where + ": duplicate key '" + key + "'");
  }
  if (!problems.empty()) throw ConfigError(problems);
  return out;
}

KeyValues parseConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError({"cannot read config file '" + path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseConfigText(buf.str(), path);
}

std::string serializeConfig(const KeyValues& values) {
  std::string out;
  for (const auto& [k, v] : values) {
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  }
  return out;
}

RunConfig resolveConfig(const KeyValues& fileValues, const KeyValues& overrides) {
  KeyValues merged = fileValues;
  for (const auto& [k, v] : overrides) merged[k] = v;

  Resolver r(merged);
  for (const auto& [k, v] : merged)
    if (!knownKeys().count(k)) r.problem("unknown key '" + k + "'");

  RunConfig cfg;
  if (!r.has("task.command")) {
    r.problem("task.command is required");
    r.finish();
  }
  cfg.command = r.getEnum("task.command", "",
                          {"spectrum", "sweep", "phase-diagram", "coherence",
                           "wavefunction", "validate", "presets"});
  if (cfg.command.empty()) r.finish();  // cannot dispatch without a valid command

  const bool needsModel = cfg.command != "presets" && cfg.command != "phase-diagram";
  if (needsModel) resolveModel(r, cfg);

  cfg.k = static_cast<int>(r.getInt("task.k", 5, "5"));
  if (cfg.k < 2) r.problem("task.k: need at least 2 levels");
  cfg.tol = r.getDouble("task.tol", 1e-8, "1e-8");
  if (!(cfg.tol > 0.0)) r.problem("task.tol: must be > 0");

  if (cfg.command == "sweep") {
    cfg.param = r.getString("task.param", "");
    if (cfg.param.empty()) {
      r.problem("task.param is required for sweep");
    } else if (cfg.hasModel) {
      const auto names = parameterNames(cfg.model.family());
      if (std::find(names.begin(), names.end(), cfg.param) == names.end()) {
        std::string opts;
        for (const auto& n : names) opts += (opts.empty() ? "" : ", ") + n;
        r.problem("task.param = '" + cfg.param + "': " +
                  familyName(cfg.model.family()) + " accepts {" + opts + "}");
      }
    }
    cfg.from = r.getDouble("task.from", 0.0, "0");
    cfg.to = r.getDouble("task.to", 1.0, "1");
    cfg.points = static_cast<int>(r.getInt("task.points", 101, "101"));
    if (cfg.points < 2) r.problem("task.points: need at least 2 sweep points");
    if (cfg.from == cfg.to) r.problem("task.from and task.to must differ");
  }

  if (cfg.command == "wavefunction") {
    cfg.level = static_cast<int>(r.getInt("task.level", 0, "0"));
    if (cfg.level < 0) r.problem("task.level: must be >= 0");
    cfg.space = r.getEnum("task.space", "phase", {"phase", "charge"});
    const bool twoMode = cfg.hasModel && cfg.model.modeCount() == 2;
    if (cfg.space == "charge" && twoMode)
      r.problem("task.space = charge: requires a single-mode model");
    cfg.gridPoints = static_cast<int>(
        r.getInt("task.grid_points", twoMode ? 201 : 501, twoMode ? "201" : "501"));
    if (cfg.gridPoints < 8) r.problem("task.grid_points: need at least 8");
  }

  if (cfg.command == "phase-diagram") {
    cfg.fluxDiagram = r.getEnum("task.mode", "flux", {"flux", "charge"}) == "flux";
    const double ejMin = r.getDouble("task.ej_min", 0.5, "0.5");
    const double ejMax =
        r.getDouble("task.ej_max", cfg.fluxDiagram ? 30.0 : 100.0,
                    cfg.fluxDiagram ? "30" : "100");
    const int ejPoints = static_cast<int>(r.getInt("task.ej_points", 20, "20"));
    if (!(ejMin > 0.0) || !(ejMax > ejMin) || ejPoints < 1)
      r.problem("task.ej_*: need 0 < ej_min < ej_max and ej_points >= 1");
    else
      cfg.ejGrid = logGrid(ejMin, ejMax, ejPoints);
    if (cfg.fluxDiagram) {
      const double elMin = r.getDouble("task.el_min", 0.005, "0.005");
      const double elMax = r.getDouble("task.el_max", 1.0, "1");
      const int elPoints = static_cast<int>(r.getInt("task.el_points", 20, "20"));
      if (!(elMin > 0.0) || !(elMax > elMin) || elPoints < 1)
        r.problem("task.el_*: need 0 < el_min < el_max and el_points >= 1");
      else
        cfg.elGrid = logGrid(elMin, elMax, elPoints);
    }
    cfg.diagramEc = r.getDouble("task.E_C", 1.0, "1");
    if (!(cfg.diagramEc > 0.0)) r.problem("task.E_C: must be > 0");
  }

  if (cfg.command == "coherence") {
    cfg.chargeNoise = resolveNoise(r, NoiseChannel::Charge);
    cfg.fluxNoise = resolveNoise(r, NoiseChannel::Flux);
  }

  const bool reportCommand = cfg.command == "coherence" || cfg.command == "validate";
  cfg.format = r.getEnum("output.format", reportCommand ? "json" : "csv", {"csv", "json"});
  if (reportCommand && cfg.format == "csv")
    r.problem("output.format = csv: " + cfg.command + " reports are json only");
  cfg.outputPath = r.getString(
      "output.path", cfg.command == "presets" ? "-" : cfg.command + "." + cfg.format);
  cfg.precision = static_cast<int>(r.getInt("output.precision", 12, "12"));
  if (cfg.precision < 3 || cfg.precision > 17)
    r.problem("output.precision: must lie in [3, 17]");
  cfg.angularUnits = r.getEnum("output.units", "ghz", {"ghz", "angular"}) == "angular";

  long threads = r.getInt("run.threads", 0, "0");
  if (threads < 0) r.problem("run.threads: must be >= 0 (0 = auto)");
  if (threads == 0) {
    if (const char* env = std::getenv("PROTECTQ_THREADS")) {
      long fromEnv = 0;
      if (parseIntStrict(env, fromEnv) && fromEnv > 0) threads = fromEnv;
    }
    if (threads == 0) threads = hardwareThreads();
  }
  cfg.threads = static_cast<int>(threads);

  r.finish();
  cfg.values = r.takeEchoed();
  return cfg;
}

}  // namespace protectq::cli
