/*
 * Copyright (c) 2026 The svcinv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace svcinv::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kInternalError = 2 };

/// Runs one command line (`args[0]` is the program name). Machine output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "\t", "\\t", "tab", or any single character.
char parse_delimiter(const std::string& text);

}  // namespace svcinv::cli
