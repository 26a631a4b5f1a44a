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
#include <filesystem>
#include <string>
#include <vector>

#include "svcinv/classify.hpp"
#include "svcinv/types.hpp"

namespace svcinv::fleet {

struct FleetOptions {
  std::size_t hosts = 0;
  std::uint64_t seed = 0;
  std::size_t hostile = 0;
  std::size_t unknown = 0;
  /// Known services beyond the ten seed entries.
  std::size_t extra_known = 12;
  Timestamp observed_at = Timestamp{std::chrono::seconds{1767600000}};  // 2026-01-05T08:00:00Z
};

struct HostData {
  std::string host;
  std::vector<RawExportRow> rows;
  std::vector<ProcessRecord> processes;
  HostSnapshot snapshot;  // rows + processes, normalized
};

struct Fleet {
  std::vector<HostData> hosts;
  /// Seed entries, extra known entries and the hostile entries. Unknown keys
  /// are deliberately absent.
  KbState kb;
  std::vector<std::string> hostile_keys;  // canonical, ascending
  std::vector<std::string> unknown_keys;  // canonical, ascending

  std::vector<HostSnapshot> snapshots() const;
  /// One export file covering every host.
  std::string combined_export(char delimiter = '\t') const;
};

/// Deterministic for equal options. Every hostile and unknown key is
/// observed on at least one host whenever hosts > 0, and svchost.exe hosts
/// its services across several instances on every machine.
Fleet generate_fleet(const FleetOptions& options);

/// Writes <host>.tsv and <host>.tasklist.txt per host plus kb.tsv.
void write_fleet(const Fleet& fleet, const std::filesystem::path& dir, char delimiter = '\t');

}  // namespace svcinv::fleet
