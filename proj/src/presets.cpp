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

#include "protectq/presets.hpp"

#include "protectq/errors.hpp"

namespace protectq {
namespace {

CircuitModel make(CircuitSpec spec, double nGate, double phiExt, std::string label) {
  CircuitModel m;
  m.spec = std::move(spec);
  m.point.nGate = nGate;
  m.point.phiExt = phiExt;
  m.label = std::move(label);
  return m;
}

std::vector<Preset> buildPresets() {
  std::vector<Preset> out;
  // Energies are E/h in GHz. Operating points are the devices' standard bias
  // spots; the heavy-fluxonium preset sits away from half flux, where its
  // localized wells give bit-flip protection at the cost of flux dispersion.
  out.push_back({"transmon",
                 "heavy charge mode, single junction with a large shunt capacitor",
                 make(ChargeModeSpec{0.2, 20.0}, 0.0, 0.0, "transmon")});
  out.push_back({"blochnium",
                 "light flux mode, junction shunted by a released-array superinductor",
                 make(FluxModeSpec{7.07, 4.7, 0.067}, 0.0, 0.5, "blochnium")});
  out.push_back({"heavy-fluxonium",
                 "heavy flux mode with well-localized states away from half flux",
                 make(FluxModeSpec{0.46, 8.11, 0.24}, 0.0, 0.45, "heavy-fluxonium")});
  out.push_back({"bifluxon-ideal",
                 "two-junction + superinductor loop, hard parameter regime",
                 make(TwoModeSpec{10.0, 10.0, 10.0, 0.05}, 0.5, 0.0, "bifluxon-ideal")});
  out.push_back({"bifluxon-realized",
                 "bifluxon as fabricated, softer inductance",
                 make(TwoModeSpec{7.7, 2.5, 27.2, 1.88}, 0.5, 0.0, "bifluxon-realized")});
  out.push_back({"zeropi-ideal",
                 "theta/phi two-mode circuit, hard regime with disjoint valleys",
                 make(TwoModeSpec{0.03, 20.0, 10.0, 0.05}, 0.0, 0.0, "zeropi-ideal")});
  out.push_back({"zeropi-realized",
                 "first-generation realization with softer flux mode",
                 make(TwoModeSpec{0.092, 1.14, 6.0, 0.38}, 0.0, 0.0, "zeropi-realized")});
  out.push_back(
      {"hybrid-cos2theta",
       "two gate-tunable weak links in a loop, frustrated at half flux",
       make(HybridSpec{0.284, 45.0, {1.0, 1.0, 0.60, 0.0, 0.0}, {0.99, 0.78, 0.31, 0.30}},
            0.0, 0.5, "hybrid-cos2theta")});
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = buildPresets();
  return table;
}

const Preset* findPreset(const std::string& name) {
  for (const Preset& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

CircuitModel presetModel(const std::string& name) {
  if (const Preset* p = findPreset(name)) return p->model;
  std::string known;
  for (const Preset& p : presets()) {
    if (!known.empty()) known += ", ";
    known += p.name;
  }
  throw InvalidArgumentError("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace protectq
