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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svcinv/classify.hpp"
#include "svcinv/ingest.hpp"
#include "svcinv/inventory.hpp"

namespace svcinv {

/// The inventory store and the knowledge base living under one data
/// directory (inventory.db, kb.db).
struct Workspace {
  Inventory inventory;
  KnowledgeBase kb;

  static Workspace open(const std::filesystem::path& data_dir,
                        std::optional<std::size_t> retain_last = std::nullopt);
  static Workspace in_memory();
};

struct ExportIngestOptions {
  char delimiter = ingest::kDefaultDelimiter;
  bool lenient = false;
  /// When set, every row must belong to this host.
  std::optional<std::string> host;
  std::optional<Timestamp> observed_at;  // defaults to the current time
};

struct IngestSummary {
  struct Stored {
    std::string host;
    SnapshotId id = 0;
    std::size_t records = 0;
  };
  std::vector<Stored> snapshots;
  std::vector<ingest::LineError> errors;  // lenient mode only
};

IngestSummary ingest_export(Workspace& ws, std::string_view text,
                            const ExportIngestOptions& options);

/// Attaches a tasklist listing to the host's latest snapshot.
SnapshotId ingest_tasklist(Workspace& ws, std::string_view host, std::string_view text);

/// `to` defaults to the latest snapshot; `from` to the one stored just
/// before `to`. Throws NotFound when either end cannot be resolved.
ChangeSet diff_host(const Workspace& ws, std::string_view host, std::optional<Timestamp> from,
                    std::optional<Timestamp> to);

std::string ingest_summary_json(const IngestSummary& summary);

}  // namespace svcinv
