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

#include "svcinv/report.hpp"

#include <algorithm>
#include <set>

#include "svcinv/error.hpp"
#include "svcinv/text.hpp"

namespace svcinv::report {

namespace {

Classification lookup(const std::string& canonical, const KbState& kb) {
  const auto it = kb.find(canonical);
  if (it == kb.end()) return Classification::Unknown;
  return it->second.verdict == Verdict::Hostile ? Classification::Hostile
                                                : Classification::Known;
}

}  // namespace

SystemReport by_system(const FleetView& fleet, const KbState& kb) {
  SystemReport out;
  for (const auto& snap : fleet.hosts) {
    auto& rows = out.hosts[snap->host];
    rows.reserve(snap->records.size());
    for (const auto& r : snap->records) {
      rows.push_back({r, lookup(r.service_key, kb)});
    }
    std::sort(rows.begin(), rows.end(), [](const SystemRow& a, const SystemRow& b) {
      return a.record.service_key < b.record.service_key;
    });
  }
  return out;
}

TriageReport triage(const FleetView& fleet, const KbState& kb, bool include_known) {
  // key -> running hosts; fleet.hosts is host-ascending so lists come out sorted.
  std::map<std::string_view, std::vector<std::string>> observed;
  for (const auto& snap : fleet.hosts) {
    for (const auto& r : snap->records) {
      auto& hosts = observed[r.service_key];
      if (r.status == Status::Running) hosts.push_back(snap->host);
    }
  }
  TriageReport out;
  out.include_known = include_known;
  for (auto& [key, hosts] : observed) {
    const std::string k(key);
    switch (lookup(k, kb)) {
      case Classification::Hostile: out.hostile.push_back({k, std::move(hosts)}); break;
      case Classification::Unknown: out.unknown.push_back({k, std::move(hosts)}); break;
      case Classification::Known:
        if (include_known) out.known.push_back({k, std::move(hosts)});
        break;
    }
  }
  return out;
}

AggregateReport network_aggregate(const FleetView& fleet, const KbState& kb) {
  std::map<std::string_view, AggregateRow> rows;
  for (const auto& snap : fleet.hosts) {
    for (const auto& r : snap->records) {
      auto& row = rows[r.service_key];
      if (row.total == 0) {
        row.service_key = r.service_key;
      }
      if (row.display_name.empty()) {
        row.display_name = r.display_name;
      }
      (r.status == Status::Running ? row.running : row.stopped) += 1;
      row.total = row.running + row.stopped;
    }
  }
  AggregateReport out;
  out.rows.reserve(rows.size());
  for (auto& [key, row] : rows) {
    row.classification = lookup(row.service_key, kb);
    out.rows.push_back(std::move(row));
  }
  return out;
}

ApplicationReport application_view(const KbState& kb, const FleetView& fleet) {
  std::set<std::string_view> observed;
  for (const auto& snap : fleet.hosts) {
    for (const auto& r : snap->records) observed.insert(r.service_key);
  }
  std::map<std::string, ApplicationRow> apps;
  for (const auto& [key, entry] : kb) {
    if (entry.application.empty() || !observed.contains(key)) continue;
    auto& row = apps[entry.application];
    row.application = entry.application;
    if (row.description.empty()) row.description = entry.description;
    if (row.executable_path.empty()) row.executable_path = entry.executable_path;
    row.services.push_back(key);
  }
  ApplicationReport out;
  for (auto& [name, row] : apps) out.rows.push_back(std::move(row));
  return out;
}

std::optional<ServiceHosts> service_hosts(const FleetView& fleet, std::string_view service_key) {
  const auto key = text::canonical_key(service_key);
  ServiceHosts out;
  bool seen = false;
  for (const auto& snap : fleet.hosts) {
    if (const auto* r = snap->find(key)) {
      seen = true;
      (r->status == Status::Running ? out.running : out.stopped).push_back(snap->host);
    }
  }
  if (!seen) return std::nullopt;
  return out;
}

std::vector<HostViolation> fleet_policy_violations(const FleetView& fleet, const KbState& kb) {
  std::vector<HostViolation> out;
  for (const auto& snap : fleet.hosts) {
    for (auto& v : policy_violations(*snap, kb)) {
      out.push_back({snap->host, std::move(v)});
    }
  }
  return out;
}

Format parse_format(std::string_view name) {
  const auto n = text::trim(name);
  if (text::iequals(n, "json")) return Format::Json;
  if (text::iequals(n, "html")) return Format::Html;
  if (text::iequals(n, "csv")) return Format::Csv;
  if (text::iequals(n, "text")) return Format::Text;
  throw Error(ErrorCode::UnsupportedFormat, "'" + std::string(name) + "'");
}

}  // namespace svcinv::report
