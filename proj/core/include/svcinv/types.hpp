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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svcinv/timestamp.hpp"

namespace svcinv {

enum class Status { Running, Stopped };

enum class StartupType { Automatic, Manual, Disabled };

std::string_view to_string(Status s) noexcept;
std::string_view to_string(StartupType s) noexcept;

/// Account a service logs on as. `name` is only meaningful for Other and is
/// never empty there.
class LogonAccount {
 public:
  enum class Kind { LocalSystem, LocalService, NetworkService, Other };

  static LogonAccount local_system() { return LogonAccount(Kind::LocalSystem, {}); }
  static LogonAccount local_service() { return LogonAccount(Kind::LocalService, {}); }
  static LogonAccount network_service() { return LogonAccount(Kind::NetworkService, {}); }
  static LogonAccount other(std::string name);

  LogonAccount() = default;

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  /// "Local System", "Local Service", "Network Service", or the account name.
  std::string display() const;

  friend bool operator==(const LogonAccount&, const LogonAccount&) = default;

 private:
  LogonAccount(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_ = Kind::LocalSystem;
  std::string name_;
};

/// One line of a service export file, fields exactly as they appeared.
struct RawExportRow {
  std::string host;
  std::string service_key;
  std::string display_name;
  std::string status_raw;
  std::string startup_raw;
  std::string logon_raw;
  std::string path;
  std::string manufacturer;
  std::string description;
  std::size_t line_no = 0;

  friend bool operator==(const RawExportRow&, const RawExportRow&) = default;
};

/// One process from a tasklist /svc style listing.
struct ProcessRecord {
  std::string image_name;
  std::uint32_t pid = 0;
  std::vector<std::string> services;

  friend bool operator==(const ProcessRecord&, const ProcessRecord&) = default;
};

/// A service as observed on one host. `service_key` is canonical.
struct ServiceRecord {
  std::string host;
  std::string service_key;
  std::string display_name;
  std::string description;
  Status status = Status::Stopped;
  StartupType startup = StartupType::Manual;
  LogonAccount logon;
  std::string path;
  std::string manufacturer;

  friend bool operator==(const ServiceRecord&, const ServiceRecord&) = default;
};

struct HostSnapshot {
  std::string host;
  Timestamp observed_at{};
  std::vector<ServiceRecord> records;
  std::optional<std::vector<ProcessRecord>> processes;

  const ServiceRecord* find(std::string_view canonical_key) const noexcept;

  friend bool operator==(const HostSnapshot&, const HostSnapshot&) = default;
};

}  // namespace svcinv
