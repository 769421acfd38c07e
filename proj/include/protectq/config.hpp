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

#ifndef PROTECTQ_CONFIG_HPP_
#define PROTECTQ_CONFIG_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "protectq/circuits.hpp"
#include "protectq/coherence.hpp"

namespace protectq::cli {

// Dotted keys to raw string values; sorted so serialization is canonical.
using KeyValues = std::map<std::string, std::string>;

// Line-oriented "key = value" format; '#' starts a comment, blank lines are
// skipped. Throws ConfigError listing every malformed line.
KeyValues parseConfigText(const std::string& text, const std::string& origin);
KeyValues parseConfigFile(const std::string& path);

// Canonical text form; parseConfigText() of the result reproduces the map.
std::string serializeConfig(const KeyValues& values);

// A fully validated run. `values` holds the resolved key set (defaults
// filled), which is echoed alongside outputs for reproducibility.
struct RunConfig {
  KeyValues values;

  std::string command;

  CircuitModel model;   // unset for `presets`
  bool hasModel = false;

  // sweep
  std::string param;
  double from = 0.0;
  double to = 1.0;
  int points = 0;

  // shared task knobs
  int k = 5;
  double tol = 1e-8;

  // wavefunction
  int level = 0;
  std::string space = "phase";  // phase | charge
  int gridPoints = 0;

  // phase-diagram
  bool fluxDiagram = true;
  std::vector<double> ejGrid;
  std::vector<double> elGrid;
  double diagramEc = 1.0;

  // coherence
  std::optional<NoiseSpec> chargeNoise;
  std::optional<NoiseSpec> fluxNoise;

  // output
  std::string format = "csv";  // csv | json
  std::string outputPath;
  int precision = 12;
  bool angularUnits = false;

  int threads = 1;
};

// Merge order: defaults, then file keys, then overrides (flags). Validates
// everything at once; unknown keys, type mismatches, and constraint
// violations are all reported in a single ConfigError.
RunConfig resolveConfig(const KeyValues& fileValues, const KeyValues& overrides);

}  // namespace protectq::cli

#endif  // PROTECTQ_CONFIG_HPP_
