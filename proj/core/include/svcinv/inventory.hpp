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
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svcinv/timestamp.hpp"
#include "svcinv/types.hpp"

namespace svcinv {

using SnapshotId = std::int64_t;

/// Behavioral drift between two snapshots of one host. Display name and
/// description edits are not drift.
struct ChangeSet {
  struct StatusChange {
    std::string service_key;
    Status from;
    Status to;
    friend bool operator==(const StatusChange&, const StatusChange&) = default;
  };
  /// State of an added service, so the change set alone can patch `a`.
  struct AddedState {
    std::string service_key;
    Status status;
    StartupType startup;
    friend bool operator==(const AddedState&, const AddedState&) = default;
  };
  struct StartupChange {
    std::string service_key;
    StartupType from;
    StartupType to;
    friend bool operator==(const StartupChange&, const StartupChange&) = default;
  };

  std::string host;
  Timestamp from_at{};
  Timestamp to_at{};
  std::vector<std::string> added;
  std::vector<AddedState> added_state;  // parallel to `added`
  std::vector<std::string> removed;
  std::vector<StatusChange> status_changed;
  std::vector<StartupChange> startup_changed;

  bool empty() const noexcept {
    return added.empty() && removed.empty() && status_changed.empty() &&
           startup_changed.empty();
  }
};

/// All four lists ascending by key. Throws HostMismatch.
ChangeSet diff_snapshots(const HostSnapshot& a, const HostSnapshot& b);

/// Throws InvariantViolation describing the first broken snapshot invariant.
/// `now` is the ingestion clock; observed_at may lead it by at most 24h.
void validate_snapshot(const HostSnapshot& snapshot, Timestamp now);

/// Latest snapshot per host, hosts ascending. Immutable once built, so a
/// view taken from the store never observes a half-applied write.
struct FleetView {
  std::vector<std::shared_ptr<const HostSnapshot>> hosts;

  const HostSnapshot* find(std::string_view host) const noexcept;
  std::size_t pair_count() const noexcept;
};

/// Builds a view from loose snapshots with the same "latest" rule as the
/// store (max observed_at, later element wins ties).
FleetView make_view(std::vector<HostSnapshot> snapshots);

struct SnapshotInfo {
  SnapshotId id = 0;
  Timestamp observed_at{};
  std::size_t record_count = 0;
};

/// Durable store of host snapshots: an append-only log plus a latest-per-host
/// index. Writers are serialized internally; readers may run concurrently.
class Inventory {
 public:
  struct Options {
    /// Keep only the newest N snapshots per host.
    std::optional<std::size_t> retain_last;
    std::function<Timestamp()> clock = now_utc;
  };

  static Inventory open(const std::filesystem::path& db_file, Options options);
  static Inventory open(const std::filesystem::path& db_file) {
    return open(db_file, Options{});
  }
  static Inventory in_memory(Options options);
  static Inventory in_memory() { return in_memory(Options{}); }

  Inventory(Inventory&&) noexcept;
  Inventory& operator=(Inventory&&) noexcept;
  ~Inventory();

  /// Persists the snapshot (records are stored sorted by key). Re-ingesting
  /// identical (host, observed_at, content) returns the existing id.
  SnapshotId upsert_snapshot(HostSnapshot snapshot);

  /// Stores a copy of the host's latest snapshot carrying `processes`.
  /// Throws NotFound when the host has no snapshot.
  SnapshotId attach_processes(std::string_view host, std::vector<ProcessRecord> processes);

  std::optional<HostSnapshot> latest(std::string_view host) const;
  std::vector<std::string> list_hosts() const;
  std::vector<std::string> list_service_keys() const;
  FleetView view() const;

  /// Stored snapshots for a host in (observed_at, ingestion) order.
  std::vector<SnapshotInfo> history(std::string_view host) const;
  std::optional<HostSnapshot> load(SnapshotId id) const;
  /// Newest snapshot with observed_at <= at.
  std::optional<HostSnapshot> snapshot_at(std::string_view host, Timestamp at) const;

  /// Rows in the snapshot log, counted directly from storage.
  std::size_t snapshot_count() const;

  /// Newline-delimited JSON, one snapshot per line, in ingestion order.
  void export_dump(std::ostream& out) const;
  std::size_t import_dump(std::istream& in);

 private:
  struct Impl;
  explicit Inventory(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace svcinv
