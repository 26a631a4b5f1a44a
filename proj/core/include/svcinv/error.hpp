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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace svcinv {

enum class ErrorCode {
  // ingest
  MalformedHeader,
  BadFieldCount,
  EmptyKey,
  EncodingError,
  NoPidToken,
  DuplicatePid,
  UnknownStatus,
  UnknownStartup,
  DuplicateService,
  DelimiterInField,
  // inventory / classify / correlate
  InvariantViolation,
  HostMismatch,
  ConflictingHost,
  NotFound,
  // report
  UnsupportedFormat,
  // plumbing
  BadArgument,
  BadTimestamp,
  StorageFailure,
  StoreOpenFailure,
  BindFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for codes caused by caller-supplied data rather than the environment.
bool is_input_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line_no = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line_no() const noexcept { return line_no_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_no_;
};

}  // namespace svcinv
