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

#include "codec.hpp"

#include "svcinv/error.hpp"
#include "svcinv/ingest.hpp"

namespace svcinv::codec {

namespace {

const std::string& str(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(ErrorCode::BadArgument, std::string("missing string field '") + key + "'");
  }
  return it->get_ref<const std::string&>();
}

std::string opt_str(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw Error(ErrorCode::BadArgument, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

Json encode(const ServiceRecord& r) {
  return Json{{"host", r.host},
              {"service_key", r.service_key},
              {"display_name", r.display_name},
              {"description", r.description},
              {"status", to_string(r.status)},
              {"startup", to_string(r.startup)},
              {"logon", r.logon.display()},
              {"path", r.path},
              {"manufacturer", r.manufacturer}};
}

Json encode(const ProcessRecord& p) {
  return Json{{"image_name", p.image_name}, {"pid", p.pid}, {"services", p.services}};
}

Json encode(const HostSnapshot& s) {
  Json records = Json::array();
  for (const auto& r : s.records) records.push_back(encode(r));
  Json out{{"host", s.host}, {"observed_at", format_timestamp(s.observed_at)},
           {"records", std::move(records)}};
  if (s.processes) {
    Json procs = Json::array();
    for (const auto& p : *s.processes) procs.push_back(encode(p));
    out["processes"] = std::move(procs);
  } else {
    out["processes"] = nullptr;
  }
  return out;
}

Json encode(const KbEntry& e) {
  return Json{{"service_key", e.service_key},
              {"verdict", to_string(e.verdict)},
              {"description", e.description},
              {"application", e.application},
              {"executable_path", e.executable_path},
              {"recommended_startup", e.recommended_startup
                                          ? Json(std::string(to_string(*e.recommended_startup)))
                                          : Json(nullptr)},
              {"updated_at", format_timestamp(e.updated_at)},
              {"note", e.note}};
}

Json encode(const ChangeSet& c) {
  Json status = Json::array();
  for (const auto& s : c.status_changed) {
    status.push_back({{"service_key", s.service_key},
                      {"from", to_string(s.from)},
                      {"to", to_string(s.to)}});
  }
  Json added = Json::array();
  for (const auto& a : c.added_state) {
    added.push_back({{"service_key", a.service_key},
                     {"status", to_string(a.status)},
                     {"startup", to_string(a.startup)}});
  }
  Json startup = Json::array();
  for (const auto& s : c.startup_changed) {
    startup.push_back({{"service_key", s.service_key},
                       {"from", to_string(s.from)},
                       {"to", to_string(s.to)}});
  }
  return Json{{"host", c.host},
              {"from_at", format_timestamp(c.from_at)},
              {"to_at", format_timestamp(c.to_at)},
              {"added", c.added},
              {"added_state", std::move(added)},
              {"removed", c.removed},
              {"status_changed", std::move(status)},
              {"startup_changed", std::move(startup)}};
}

ServiceRecord decode_record(const Json& j) {
  ServiceRecord r;
  r.host = str(j, "host");
  r.service_key = str(j, "service_key");
  r.display_name = opt_str(j, "display_name");
  r.description = opt_str(j, "description");
  r.status = ingest::normalize_status(str(j, "status"));
  r.startup = ingest::normalize_startup(str(j, "startup"));
  r.logon = ingest::normalize_logon(opt_str(j, "logon"));
  r.path = opt_str(j, "path");
  r.manufacturer = opt_str(j, "manufacturer");
  return r;
}

ProcessRecord decode_process(const Json& j) {
  ProcessRecord p;
  p.image_name = str(j, "image_name");
  p.pid = j.at("pid").get<std::uint32_t>();
  p.services = j.at("services").get<std::vector<std::string>>();
  return p;
}

HostSnapshot decode_snapshot(const Json& j) {
  HostSnapshot s;
  s.host = str(j, "host");
  s.observed_at = parse_timestamp(str(j, "observed_at"));
  for (const auto& r : j.at("records")) s.records.push_back(decode_record(r));
  if (const auto it = j.find("processes"); it != j.end() && !it->is_null()) {
    std::vector<ProcessRecord> procs;
    for (const auto& p : *it) procs.push_back(decode_process(p));
    s.processes = std::move(procs);
  }
  return s;
}

KbEntry decode_kb_entry(const Json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::BadArgument, "KB entry must be a JSON object");
  }
  KbEntry e;
  e.service_key = str(j, "service_key");
  e.verdict = parse_verdict(str(j, "verdict"));
  e.description = opt_str(j, "description");
  e.application = opt_str(j, "application");
  e.executable_path = opt_str(j, "executable_path");
  if (const auto rec = opt_str(j, "recommended_startup"); !rec.empty()) {
    e.recommended_startup = ingest::normalize_startup(rec);
  }
  if (const auto at = opt_str(j, "updated_at"); !at.empty()) {
    e.updated_at = parse_timestamp(at);
  }
  e.note = opt_str(j, "note");
  return e;
}

std::string dump(const Json& j) {
  auto out = j.dump(-1, ' ', false, Json::error_handler_t::strict);
  out.push_back('\n');
  return out;
}

}  // namespace svcinv::codec
