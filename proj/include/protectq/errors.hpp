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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace protectq {

// A user-supplied value is out of range or inconsistent (negative energy,
// empty grid, nonpositive tolerance, transmission outside [0,1], ...).
class InvalidArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two objects built over different bases (or grids) were combined.
class BasisMismatchError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The requested noise channel does not exist for this circuit family
// (e.g. offset-charge noise on a single flux mode).
class ChannelNotPresentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A solver failed to reach its tolerance; what() carries diagnostics
// (iteration count, last residual).
class NumericalFailureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A tabulated quantity was queried outside its domain.
class InterpolationRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Config-file / flag validation failure. Collects every problem found so the
// user sees them all at once.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& ps) {
    std::string all;
    for (const auto& p : ps) {
      if (!all.empty()) all += "\n";
      all += p;
    }
    return all;
  }
  std::vector<std::string> problems_;
};

}  // namespace protectq
