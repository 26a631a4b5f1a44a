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

#include "svcinv/types.hpp"

#include "svcinv/error.hpp"

namespace svcinv {

std::string_view to_string(Status s) noexcept {
  return s == Status::Running ? "Running" : "Stopped";
}

std::string_view to_string(StartupType s) noexcept {
  switch (s) {
    case StartupType::Automatic: return "Automatic";
    case StartupType::Manual: return "Manual";
    case StartupType::Disabled: return "Disabled";
  }
  return "Manual";
}

LogonAccount LogonAccount::other(std::string name) {
  if (name.empty()) {
    throw Error(ErrorCode::InvariantViolation, "logon account name must not be empty");
  }
  return LogonAccount(Kind::Other, std::move(name));
}

std::string LogonAccount::display() const {
  switch (kind_) {
    case Kind::LocalSystem: return "Local System";
    case Kind::LocalService: return "Local Service";
    case Kind::NetworkService: return "Network Service";
    case Kind::Other: return name_;
  }
  return name_;
}

const ServiceRecord* HostSnapshot::find(std::string_view canonical_key) const noexcept {
  for (const auto& r : records) {
    if (r.service_key == canonical_key) {
      return &r;
    }
  }
  return nullptr;
}

}  // namespace svcinv
