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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "svcinv/classify.hpp"
#include "svcinv/inventory.hpp"
#include "svcinv/types.hpp"

// The four fleet reports (per system, triage, network aggregate,
// applications) built over the latest snapshots and one KB version.
namespace svcinv::report {

struct SystemRow {
  ServiceRecord record;
  Classification classification = Classification::Unknown;
};

struct SystemReport {
  std::map<std::string, std::vector<SystemRow>> hosts;
};

struct TriageEntry {
  std::string service_key;
  /// Hosts whose latest snapshot has the service Running, ascending.
  std::vector<std::string> hosts;
  friend bool operator==(const TriageEntry&, const TriageEntry&) = default;
};

struct TriageReport {
  std::vector<TriageEntry> hostile;
  std::vector<TriageEntry> unknown;
  bool include_known = false;
  std::vector<TriageEntry> known;  // empty unless include_known
};

struct AggregateRow {
  std::string service_key;
  std::string display_name;
  std::size_t running = 0;
  std::size_t stopped = 0;
  std::size_t total = 0;
  Classification classification = Classification::Unknown;
};

struct AggregateReport {
  std::vector<AggregateRow> rows;
};

struct ApplicationRow {
  std::string application;
  std::string description;
  std::string executable_path;
  std::vector<std::string> services;
};

struct ApplicationReport {
  std::vector<ApplicationRow> rows;
};

SystemReport by_system(const FleetView& fleet, const KbState& kb);
TriageReport triage(const FleetView& fleet, const KbState& kb, bool include_known = false);
AggregateReport network_aggregate(const FleetView& fleet, const KbState& kb);
ApplicationReport application_view(const KbState& kb, const FleetView& fleet);

struct ServiceHosts {
  std::vector<std::string> running;
  std::vector<std::string> stopped;
};

/// Per-service drill-down; nullopt when no latest snapshot has the key.
std::optional<ServiceHosts> service_hosts(const FleetView& fleet, std::string_view service_key);

struct HostViolation {
  std::string host;
  PolicyViolation violation;
};

/// policy_violations over every latest snapshot, by (host, key).
std::vector<HostViolation> fleet_policy_violations(const FleetView& fleet, const KbState& kb);

enum class Format { Json, Html, Csv, Text };

/// "json", "html", "csv", "text". Throws UnsupportedFormat.
Format parse_format(std::string_view name);

struct RenderOptions {
  /// CSV field separator; follows the export-file delimiter rules.
  char delimiter = '\t';
};

using AnyReport = std::variant<SystemReport, TriageReport, AggregateReport, ApplicationReport>;

/// Deterministic bytes for identical inputs.
std::string render(const AnyReport& report, Format format, const RenderOptions& options = {});

}  // namespace svcinv::report
