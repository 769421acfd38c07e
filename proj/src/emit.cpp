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

#include "protectq/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "protectq/errors.hpp"

namespace protectq::cli {

std::string formatValue(double v, int sigDigits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", sigDigits, v);
  return buf;
}

std::string jsonEscape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string jsonNumber(double v, int sigDigits) {
  if (!std::isfinite(v)) return "\"" + formatValue(v, sigDigits) + "\"";
  return formatValue(v, sigDigits);
}

std::string csvText(const OutputTable& table, int precision) {
  std::string out;
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += formatValue(row[c], precision);
    }
    out += '\n';
  }
  return out;
}

std::string jsonTableText(const OutputTable& table, const KeyValues& configEcho,
                          int precision,
                          const std::map<std::string, std::vector<double>>& extraAxes) {
  std::string out = "{\"schema\":1,\"meta\":{\"version\":\"";
  out += jsonEscape(kVersion);
  out += "\",\"config\":{";
  bool first = true;
  for (const auto& [k, v] : configEcho) {
    if (!first) out += ',';
    first = false;
    out += "\"" + jsonEscape(k) + "\":\"" + jsonEscape(v) + "\"";
  }
  out += "}},\"axes\":{\"columns\":[";
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += "\"" + jsonEscape(table.columns[c]) + "\"";
  }
  out += "]";
  for (const auto& [name, grid] : extraAxes) {
    out += ",\"" + jsonEscape(name) + "\":[";
    for (size_t i = 0; i < grid.size(); ++i) {
      if (i) out += ',';
      out += jsonNumber(grid[i], precision);
    }
    out += "]";
  }
  out += "},\"data\":[";
  for (size_t r = 0; r < table.rows.size(); ++r) {
    if (r) out += ',';
    out += '[';
    for (size_t c = 0; c < table.rows[r].size(); ++c) {
      if (c) out += ',';
      out += jsonNumber(table.rows[r][c], precision);
    }
    out += ']';
  }
  out += "]}\n";
  return out;
}

void writeFile(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace protectq::cli
