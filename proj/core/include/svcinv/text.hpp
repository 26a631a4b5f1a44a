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

#include <string>
#include <string_view>
#include <vector>

namespace svcinv::text {

bool is_valid_utf8(std::string_view bytes) noexcept;

/// Unicode simple case folding of a UTF-8 string. Throws EncodingError on
/// ill-formed input.
std::string fold_case(std::string_view utf8);

/// Identity form of a service key: trimmed, then case-folded.
std::string canonical_key(std::string_view raw);

std::string_view trim(std::string_view s) noexcept;

/// Splits on every occurrence of `sep`; always yields at least one piece.
std::vector<std::string_view> split(std::string_view s, char sep);

/// Splits into lines on LF, dropping a trailing CR from each line.
std::vector<std::string_view> lines(std::string_view s);

bool iequals(std::string_view a, std::string_view b);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace svcinv::text
