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

#include "svcinv/error.hpp"

namespace svcinv {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::BadFieldCount: return "BadFieldCount";
    case ErrorCode::EmptyKey: return "EmptyKey";
    case ErrorCode::EncodingError: return "EncodingError";
    case ErrorCode::NoPidToken: return "NoPidToken";
    case ErrorCode::DuplicatePid: return "DuplicatePid";
    case ErrorCode::UnknownStatus: return "UnknownStatus";
    case ErrorCode::UnknownStartup: return "UnknownStartup";
    case ErrorCode::DuplicateService: return "DuplicateService";
    case ErrorCode::DelimiterInField: return "DelimiterInField";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::HostMismatch: return "HostMismatch";
    case ErrorCode::ConflictingHost: return "ConflictingHost";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::BadArgument: return "BadArgument";
    case ErrorCode::BadTimestamp: return "BadTimestamp";
    case ErrorCode::StorageFailure: return "StorageFailure";
    case ErrorCode::StoreOpenFailure: return "StoreOpenFailure";
    case ErrorCode::BindFailure: return "BindFailure";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::StorageFailure:
    case ErrorCode::StoreOpenFailure:
    case ErrorCode::BindFailure:
      return false;
    default:
      return true;
  }
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> line_no) {
  std::string out(to_string(code));
  if (line_no) {
    out += " (line " + std::to_string(*line_no) + ")";
  }
  if (!message.empty()) {
    out += ": ";
    out += message;
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line_no)
    : std::runtime_error(decorate(code, message, line_no)),
      code_(code),
      line_no_(line_no) {}

}  // namespace svcinv
