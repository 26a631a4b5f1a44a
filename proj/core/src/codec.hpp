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

// JSON encodings shared by the store, the dump format and the HTTP API.

#include <json.hpp>

#include "svcinv/classify.hpp"
#include "svcinv/inventory.hpp"
#include "svcinv/types.hpp"

namespace svcinv::codec {

using Json = nlohmann::ordered_json;

Json encode(const ServiceRecord& r);
Json encode(const ProcessRecord& p);
Json encode(const HostSnapshot& s);
Json encode(const KbEntry& e);
Json encode(const ChangeSet& c);

ServiceRecord decode_record(const Json& j);
ProcessRecord decode_process(const Json& j);
HostSnapshot decode_snapshot(const Json& j);
/// updated_at is optional in the input.
KbEntry decode_kb_entry(const Json& j);

/// `j.dump()` with a trailing newline.
std::string dump(const Json& j);

}  // namespace svcinv::codec
