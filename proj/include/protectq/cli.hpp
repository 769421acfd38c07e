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

#ifndef PROTECTQ_CLI_HPP_
#define PROTECTQ_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace protectq::cli {

// Full command-line entry point (argv without the program name). Returns the
// process exit code: 0 success, 2 configuration error, 3 numerical failure,
// 4 unconverged results (partial outputs still written). All diagnostics go
// to `err` prefixed with "error:".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace protectq::cli

#endif  // PROTECTQ_CLI_HPP_
