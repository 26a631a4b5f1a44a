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

// JSON bodies shared by the HTTP API and the CLI so both emit identical bytes.

#include <string>
#include <string_view>
#include <vector>

#include "svcinv/classify.hpp"
#include "svcinv/correlate.hpp"
#include "svcinv/error.hpp"
#include "svcinv/inventory.hpp"
#include "svcinv/report.hpp"

namespace svcinv::api {

std::string string_list_json(const std::vector<std::string>& items);
std::string snapshot_json(const HostSnapshot& snapshot);
std::string history_json(std::string_view host, const std::vector<SnapshotInfo>& history);
std::string changeset_json(const ChangeSet& changes);
std::string kb_json(const KbState& kb);
std::string kb_entry_json(const KbEntry& entry);
std::string service_hosts_json(std::string_view service_key, const report::ServiceHosts& hosts);
std::string violations_json(const std::vector<report::HostViolation>& violations);
std::string processes_json(const HostSnapshot& snapshot);
std::string error_json(const Error& error);
std::string error_json(ErrorCode code, std::string_view message);

/// Throws BadArgument on malformed JSON or missing fields.
KbEntry parse_kb_entry(std::string_view body);

}  // namespace svcinv::api
