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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svcinv/types.hpp"

namespace svcinv::correlate {

struct ProcessInstance {
  std::uint32_t pid = 0;
  std::vector<std::string> services;
  friend bool operator==(const ProcessInstance&, const ProcessInstance&) = default;
};

/// All processes sharing one image name, e.g. the svchost.exe instances.
struct ProcessGroup {
  std::string image_name;
  std::vector<ProcessInstance> instances;  // ascending pid
  std::size_t total_services = 0;
};

struct ProcessRef {
  std::string image_name;
  std::uint32_t pid = 0;
  friend bool operator==(const ProcessRef&, const ProcessRef&) = default;
};

/// Throws DuplicatePid.
std::vector<ProcessGroup> group_by_image(std::span<const ProcessRecord> processes);

/// Canonical service key -> hosting process. Throws ConflictingHost when one
/// service is listed under two pids.
std::map<std::string, ProcessRef> service_to_process(std::span<const ProcessRecord> processes);

struct EnrichedRecord {
  ServiceRecord record;
  std::optional<ProcessRef> process;
  /// Running, the snapshot has a listing, yet no process claims it.
  bool unmapped_running = false;
};

struct EnrichedSnapshot {
  std::vector<EnrichedRecord> records;
  std::vector<std::string> unmapped_running;  // keys, ascending
};

/// Listings and exports are taken at different instants, so a running
/// service missing from the listing is only flagged.
EnrichedSnapshot enrich_snapshot(const HostSnapshot& snapshot);

}  // namespace svcinv::correlate
