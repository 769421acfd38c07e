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

#ifndef PROTECTQ_PRESETS_HPP_
#define PROTECTQ_PRESETS_HPP_

#include <string>
#include <vector>

#include "protectq/circuits.hpp"

namespace protectq {

// Published device parameter sets, each with its standard operating point.
struct Preset {
  std::string name;
  std::string description;
  CircuitModel model;
};

const std::vector<Preset>& presets();

// nullptr when the name is unknown.
const Preset* findPreset(const std::string& name);

// Throws InvalidArgumentError listing the valid names.
CircuitModel presetModel(const std::string& name);

}  // namespace protectq

#endif  // PROTECTQ_PRESETS_HPP_
