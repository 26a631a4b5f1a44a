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

#include "svcinv/correlate.hpp"

#include <algorithm>
#include <set>

#include "svcinv/error.hpp"
#include "svcinv/text.hpp"

namespace svcinv::correlate {

std::vector<ProcessGroup> group_by_image(std::span<const ProcessRecord> processes) {
  std::set<std::uint32_t> pids;
  std::map<std::string, ProcessGroup> groups;
  for (const auto& p : processes) {
    if (!pids.insert(p.pid).second) {
      throw Error(ErrorCode::DuplicatePid, "pid " + std::to_string(p.pid));
    }
    auto& g = groups[p.image_name];
    g.image_name = p.image_name;
    g.instances.push_back({p.pid, p.services});
    g.total_services += p.services.size();
  }
  std::vector<ProcessGroup> out;
  out.reserve(groups.size());
  for (auto& [name, g] : groups) {
    std::sort(g.instances.begin(), g.instances.end(),
              [](const ProcessInstance& a, const ProcessInstance& b) { return a.pid < b.pid; });
    out.push_back(std::move(g));
  }
  return out;
}

std::map<std::string, ProcessRef> service_to_process(std::span<const ProcessRecord> processes) {
  std::map<std::string, ProcessRef> out;
  for (const auto& p : processes) {
    for (const auto& svc : p.services) {
      auto key = text::canonical_key(svc);
      const auto [it, inserted] = out.emplace(std::move(key), ProcessRef{p.image_name, p.pid});
      if (!inserted && it->second.pid != p.pid) {
        throw Error(ErrorCode::ConflictingHost, svc + " under pids " +
                                                    std::to_string(it->second.pid) + " and " +
                                                    std::to_string(p.pid));
      }
    }
  }
  return out;
}

EnrichedSnapshot enrich_snapshot(const HostSnapshot& snapshot) {
  EnrichedSnapshot out;
  out.records.reserve(snapshot.records.size());
  std::map<std::string, ProcessRef> hosting;
  if (snapshot.processes) {
    // First listing wins if a stored snapshot somehow carries a conflict.
    for (const auto& p : *snapshot.processes) {
      for (const auto& svc : p.services) {
        hosting.emplace(text::canonical_key(svc), ProcessRef{p.image_name, p.pid});
      }
    }
  }
  for (const auto& r : snapshot.records) {
    EnrichedRecord e{r, std::nullopt, false};
    if (const auto it = hosting.find(r.service_key); it != hosting.end()) {
      e.process = it->second;
    } else if (snapshot.processes && r.status == Status::Running) {
      e.unmapped_running = true;
      out.unmapped_running.push_back(r.service_key);
    }
    out.records.push_back(std::move(e));
  }
  std::sort(out.unmapped_running.begin(), out.unmapped_running.end());
  return out;
}

}  // namespace svcinv::correlate
