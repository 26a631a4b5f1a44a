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

#include "svcinv/api_json.hpp"

#include "codec.hpp"

namespace svcinv::api {

using codec::Json;

std::string string_list_json(const std::vector<std::string>& items) {
  return codec::dump(Json(items));
}

std::string snapshot_json(const HostSnapshot& snapshot) {
  return codec::dump(codec::encode(snapshot));
}

std::string history_json(std::string_view host, const std::vector<SnapshotInfo>& history) {
  Json arr = Json::array();
  for (const auto& h : history) {
    arr.push_back({{"id", h.id},
                   {"observed_at", format_timestamp(h.observed_at)},
                   {"records", h.record_count}});
  }
  return codec::dump(Json{{"host", host}, {"snapshots", std::move(arr)}});
}

std::string changeset_json(const ChangeSet& changes) {
  return codec::dump(codec::encode(changes));
}

std::string kb_json(const KbState& kb) {
  Json arr = Json::array();
  for (const auto& [key, e] : kb) arr.push_back(codec::encode(e));
  return codec::dump(arr);
}

std::string kb_entry_json(const KbEntry& entry) { return codec::dump(codec::encode(entry)); }

std::string service_hosts_json(std::string_view service_key, const report::ServiceHosts& hosts) {
  return codec::dump(
      Json{{"service_key", service_key}, {"hosts", hosts.running}, {"stopped", hosts.stopped}});
}

std::string violations_json(const std::vector<report::HostViolation>& violations) {
  Json arr = Json::array();
  for (const auto& v : violations) {
    arr.push_back({{"host", v.host},
                   {"service_key", v.violation.service_key},
                   {"actual", to_string(v.violation.actual)},
                   {"recommended", to_string(v.violation.recommended)}});
  }
  return codec::dump(arr);
}

std::string processes_json(const HostSnapshot& snapshot) {
  Json groups = Json::array();
  if (snapshot.processes) {
    for (const auto& g : correlate::group_by_image(*snapshot.processes)) {
      Json instances = Json::array();
      for (const auto& i : g.instances) {
        instances.push_back({{"pid", i.pid}, {"services", i.services}});
      }
      groups.push_back({{"image_name", g.image_name},
                        {"instances", std::move(instances)},
                        {"total_services", g.total_services}});
    }
  }
  const auto enriched = correlate::enrich_snapshot(snapshot);
  Json services = Json::array();
  for (const auto& e : enriched.records) {
    Json item{{"service_key", e.record.service_key}, {"status", to_string(e.record.status)}};
    if (e.process) {
      item["process"] = {{"image_name", e.process->image_name}, {"pid", e.process->pid}};
    } else {
      item["process"] = nullptr;
    }
    services.push_back(std::move(item));
  }
  return codec::dump(Json{{"host", snapshot.host},
                          {"has_listing", snapshot.processes.has_value()},
                          {"groups", std::move(groups)},
                          {"services", std::move(services)},
                          {"unmapped_running", enriched.unmapped_running}});
}

std::string error_json(ErrorCode code, std::string_view message) {
  return codec::dump(Json{{"error", to_string(code)}, {"message", message}});
}

std::string error_json(const Error& error) { return error_json(error.code(), error.what()); }

KbEntry parse_kb_entry(std::string_view body) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadArgument, std::string("malformed JSON: ") + e.what());
  }
  try {
    return codec::decode_kb_entry(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadArgument, e.what());
  }
}

}  // namespace svcinv::api
