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

#ifndef PROTECTQ_EMIT_HPP_
#define PROTECTQ_EMIT_HPP_

#include <map>
#include <string>
#include <vector>

#include "protectq/config.hpp"

namespace protectq::cli {

inline constexpr const char* kVersion = "1.0.0";

// %.{sigDigits}g; non-finite values render as "nan", "inf", "-inf".
std::string formatValue(double v, int sigDigits);

// JSON string escaping (control characters, quotes, backslash).
std::string jsonEscape(const std::string& s);

// Number token for JSON output; non-finite values become quoted strings
// since JSON has no literals for them.
std::string jsonNumber(double v, int sigDigits);

struct OutputTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Header plus one comma-separated line per row, '\n' line ends.
std::string csvText(const OutputTable& table, int precision);

// {"schema":1,"meta":{"version":...,"config":{...}},
//  "axes":{"columns":[...]}, "data":[[...],...]}
// Extra axes (name -> grid) are emitted alongside "columns". Deterministic:
// maps are ordered, numbers formatted by jsonNumber.
std::string jsonTableText(const OutputTable& table, const KeyValues& configEcho,
                          int precision,
                          const std::map<std::string, std::vector<double>>& extraAxes);

// Writes bytes; failures carry the path in the message.
void writeFile(const std::string& path, const std::string& bytes);

}  // namespace protectq::cli

#endif  // PROTECTQ_EMIT_HPP_
