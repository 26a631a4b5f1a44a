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

#include "svcinv/workspace.hpp"

#include <algorithm>

#include "codec.hpp"
#include "svcinv/error.hpp"
#include "svcinv/text.hpp"

namespace svcinv {

Workspace Workspace::open(const std::filesystem::path& data_dir,
                          std::optional<std::size_t> retain_last) {
  std::error_code ec;
  std::filesystem::create_directories(data_dir, ec);
  if (ec) {
    throw Error(ErrorCode::StoreOpenFailure,
                "cannot create data directory " + data_dir.string() + ": " + ec.message());
  }
  Inventory::Options opts;
  opts.retain_last = retain_last;
  return Workspace{Inventory::open(data_dir / "inventory.db", std::move(opts)),
                   KnowledgeBase::open(data_dir / "kb.db")};
}

Workspace Workspace::in_memory() {
  return Workspace{Inventory::in_memory(), KnowledgeBase::in_memory()};
}

IngestSummary ingest_export(Workspace& ws, std::string_view text,
                            const ExportIngestOptions& options) {
  IngestSummary summary;
  std::vector<RawExportRow> rows;
  if (options.lenient) {
    auto parsed = ingest::parse_export_lenient(text, options.delimiter);
    rows = std::move(parsed.items);
    summary.errors = std::move(parsed.errors);
  } else {
    rows = ingest::parse_export(text, options.delimiter);
  }

  if (options.host) {
    const auto wanted = text::trim(*options.host);
    std::erase_if(rows, [&](const RawExportRow& row) {
      if (text::trim(row.host) == wanted) return false;
      Error err(ErrorCode::HostMismatch,
                "row host '" + row.host + "' is not '" + std::string(wanted) + "'", row.line_no);
      if (!options.lenient) throw err;
      summary.errors.push_back({row.line_no, err.code(), err.what()});
      return true;
    });
  }

  std::vector<ServiceRecord> records;
  if (options.lenient) {
    auto normalized = ingest::to_service_records_lenient(rows);
    records = std::move(normalized.items);
    summary.errors.insert(summary.errors.end(), normalized.errors.begin(),
                          normalized.errors.end());
  } else {
    records = ingest::to_service_records(rows);
  }
  std::sort(summary.errors.begin(), summary.errors.end(),
            [](const auto& a, const auto& b) { return a.line_no < b.line_no; });

  const auto at = options.observed_at.value_or(now_utc());
  auto snapshots = ingest::build_snapshots(records, at);
  if (snapshots.empty() && options.host) {
    // An explicitly named host with zero rows is a real (empty) observation.
    snapshots.push_back(HostSnapshot{std::string(text::trim(*options.host)), at, {}, {}});
  }
  for (auto& snap : snapshots) {
    const auto host = snap.host;
    const auto count = snap.records.size();
    const auto id = ws.inventory.upsert_snapshot(std::move(snap));
    summary.snapshots.push_back({host, id, count});
  }
  return summary;
}

SnapshotId ingest_tasklist(Workspace& ws, std::string_view host, std::string_view text) {
  auto processes = ingest::parse_tasklist(text);
  return ws.inventory.attach_processes(text::trim(host), std::move(processes));
}

ChangeSet diff_host(const Workspace& ws, std::string_view host, std::optional<Timestamp> from,
                    std::optional<Timestamp> to) {
  const auto history = ws.inventory.history(host);
  if (history.empty()) {
    throw Error(ErrorCode::NotFound, "no snapshots for host '" + std::string(host) + "'");
  }
  // history is ordered by (observed_at, ingestion), so the last entry at or
  // before a bound is the snapshot the store considers current at that time.
  auto last_at_or_before = [&](Timestamp t) -> std::ptrdiff_t {
    std::ptrdiff_t found = -1;
    for (std::size_t i = 0; i < history.size(); ++i) {
      if (history[i].observed_at <= t) found = static_cast<std::ptrdiff_t>(i);
    }
    return found;
  };
  const std::ptrdiff_t to_idx =
      to ? last_at_or_before(*to) : static_cast<std::ptrdiff_t>(history.size()) - 1;
  if (to_idx < 0) {
    throw Error(ErrorCode::NotFound, "no snapshot at or before " + format_timestamp(*to));
  }
  const std::ptrdiff_t from_idx = from ? last_at_or_before(*from) : to_idx - 1;
  if (from_idx < 0) {
    throw Error(ErrorCode::NotFound, from ? "no snapshot at or before " + format_timestamp(*from)
                                          : std::string("no earlier snapshot to compare"));
  }
  const auto a = ws.inventory.load(history[static_cast<std::size_t>(from_idx)].id);
  const auto b = ws.inventory.load(history[static_cast<std::size_t>(to_idx)].id);
  if (!a || !b) {
    throw Error(ErrorCode::NotFound, "snapshot vanished during diff");
  }
  return diff_snapshots(*a, *b);
}

std::string ingest_summary_json(const IngestSummary& summary) {
  codec::Json snaps = codec::Json::array();
  for (const auto& s : summary.snapshots) {
    snaps.push_back({{"host", s.host}, {"id", s.id}, {"records", s.records}});
  }
  codec::Json errors = codec::Json::array();
  for (const auto& e : summary.errors) {
    errors.push_back(
        {{"line", e.line_no}, {"error", to_string(e.code)}, {"message", e.message}});
  }
  return codec::dump(codec::Json{{"snapshots", std::move(snaps)}, {"errors", std::move(errors)}});
}

}  // namespace svcinv
