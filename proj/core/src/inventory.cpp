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

#include "svcinv/inventory.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <shared_mutex>

#include "codec.hpp"
#include "sqlite_db.hpp"
#include "svcinv/error.hpp"
#include "svcinv/text.hpp"

namespace svcinv {

namespace {

constexpr auto kFutureSlack = std::chrono::hours(24);

void sort_records(HostSnapshot& s) {
  std::sort(s.records.begin(), s.records.end(),
            [](const ServiceRecord& a, const ServiceRecord& b) {
              return a.service_key < b.service_key;
            });
}

[[noreturn]] void violation(const std::string& what) {
  throw Error(ErrorCode::InvariantViolation, what);
}

}  // namespace

ChangeSet diff_snapshots(const HostSnapshot& a, const HostSnapshot& b) {
  if (a.host != b.host) {
    throw Error(ErrorCode::HostMismatch, "'" + a.host + "' vs '" + b.host + "'");
  }
  std::map<std::string_view, const ServiceRecord*> before;
  std::map<std::string_view, const ServiceRecord*> after;
  for (const auto& r : a.records) before.emplace(r.service_key, &r);
  for (const auto& r : b.records) after.emplace(r.service_key, &r);

  ChangeSet out;
  out.host = a.host;
  out.from_at = a.observed_at;
  out.to_at = b.observed_at;
  for (const auto& [key, rec] : after) {
    const auto it = before.find(key);
    if (it == before.end()) {
      out.added.emplace_back(key);
      out.added_state.push_back({std::string(key), rec->status, rec->startup});
      continue;
    }
    if (it->second->status != rec->status) {
      out.status_changed.push_back({std::string(key), it->second->status, rec->status});
    }
    if (it->second->startup != rec->startup) {
      out.startup_changed.push_back({std::string(key), it->second->startup, rec->startup});
    }
  }
  for (const auto& [key, rec] : before) {
    if (!after.contains(key)) {
      out.removed.emplace_back(key);
    }
  }
  return out;
}

void validate_snapshot(const HostSnapshot& s, Timestamp now) {
  if (s.host.empty() || text::trim(s.host) != s.host) {
    violation("snapshot host must be non-empty and trimmed");
  }
  if (s.observed_at > now + kFutureSlack) {
    violation("observed_at " + format_timestamp(s.observed_at) +
              " is more than 24h ahead of the ingestion clock");
  }
  std::set<std::string_view> keys;
  for (const auto& r : s.records) {
    if (r.host != s.host) {
      violation("record host '" + r.host + "' differs from snapshot host '" + s.host + "'");
    }
    if (r.service_key.empty() || text::canonical_key(r.service_key) != r.service_key) {
      violation("service key '" + r.service_key + "' is not canonical");
    }
    if (!keys.insert(r.service_key).second) {
      violation("duplicate service key '" + r.service_key + "'");
    }
    if (r.logon.kind() == LogonAccount::Kind::Other && r.logon.name().empty()) {
      violation("empty logon account name");
    }
  }
  if (s.processes) {
    std::set<std::uint32_t> pids;
    std::map<std::string, std::uint32_t> hosted;
    for (const auto& p : *s.processes) {
      if (!pids.insert(p.pid).second) {
        violation("duplicate pid " + std::to_string(p.pid));
      }
      std::set<std::string> local;
      for (const auto& svc : p.services) {
        if (text::trim(svc).empty()) {
          violation("empty service name under pid " + std::to_string(p.pid));
        }
        const auto key = text::canonical_key(svc);
        if (!local.insert(key).second) {
          violation("service '" + svc + "' listed twice under pid " + std::to_string(p.pid));
        }
        if (const auto [it, fresh] = hosted.emplace(key, p.pid); !fresh) {
          violation("service '" + svc + "' hosted by pids " + std::to_string(it->second) +
                    " and " + std::to_string(p.pid));
        }
      }
    }
  }
}

const HostSnapshot* FleetView::find(std::string_view host) const noexcept {
  const auto it = std::lower_bound(
      hosts.begin(), hosts.end(), host,
      [](const std::shared_ptr<const HostSnapshot>& s, std::string_view h) { return s->host < h; });
  return it != hosts.end() && (*it)->host == host ? it->get() : nullptr;
}

std::size_t FleetView::pair_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : hosts) n += s->records.size();
  return n;
}

FleetView make_view(std::vector<HostSnapshot> snapshots) {
  std::map<std::string, HostSnapshot> latest;
  for (auto& s : snapshots) {
    auto it = latest.find(s.host);
    if (it == latest.end()) {
      latest.emplace(s.host, std::move(s));
    } else if (s.observed_at >= it->second.observed_at) {
      it->second = std::move(s);
    }
  }
  FleetView view;
  view.hosts.reserve(latest.size());
  for (auto& [host, snap] : latest) {
    sort_records(snap);
    view.hosts.push_back(std::make_shared<const HostSnapshot>(std::move(snap)));
  }
  return view;
}

struct Inventory::Impl {
  Options options;
  detail::SqliteDb db;
  mutable std::mutex db_mutex;  // serializes every statement on `db`
  mutable std::shared_mutex cache_mutex;
  std::map<std::string, std::shared_ptr<const HostSnapshot>, std::less<>> latest;

  Impl(const std::filesystem::path& file, Options opts) : options(std::move(opts)), db(file) {
    if (options.retain_last && *options.retain_last == 0) {
      throw Error(ErrorCode::BadArgument, "retain_last must be at least 1");
    }
    if (!options.clock) options.clock = now_utc;
    db.exec(
        "CREATE TABLE IF NOT EXISTS snapshots ("
        " id INTEGER PRIMARY KEY AUTOINCREMENT,"
        " host TEXT NOT NULL,"
        " observed_at INTEGER NOT NULL,"
        " record_count INTEGER NOT NULL,"
        " body TEXT NOT NULL);"
        "CREATE INDEX IF NOT EXISTS snapshots_by_host ON snapshots(host, observed_at, id);");
    load_latest();
  }

  void load_latest() {
    auto stmt = db.prepare(
        "SELECT s.body FROM snapshots s WHERE s.id = ("
        " SELECT t.id FROM snapshots t WHERE t.host = s.host"
        " ORDER BY t.observed_at DESC, t.id DESC LIMIT 1)");
    while (stmt.step()) {
      auto snap = decode(stmt.column_text(0));
      auto host = snap.host;
      latest[host] = std::make_shared<const HostSnapshot>(std::move(snap));
    }
  }

  static HostSnapshot decode(const std::string& body) {
    try {
      return codec::decode_snapshot(codec::Json::parse(body));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::StorageFailure, std::string("corrupt snapshot row: ") + e.what());
    }
  }

  std::optional<HostSnapshot> query_one(detail::Statement& stmt) const {
    if (!stmt.step()) return std::nullopt;
    return decode(stmt.column_text(0));
  }
};

Inventory::Inventory(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Inventory::Inventory(Inventory&&) noexcept = default;
Inventory& Inventory::operator=(Inventory&&) noexcept = default;
Inventory::~Inventory() = default;

Inventory Inventory::open(const std::filesystem::path& db_file, Options options) {
  if (db_file.empty()) {
    throw Error(ErrorCode::StoreOpenFailure, "empty store path");
  }
  return Inventory(std::make_unique<Impl>(db_file, std::move(options)));
}

Inventory Inventory::in_memory(Options options) {
  return Inventory(std::make_unique<Impl>(std::filesystem::path{}, std::move(options)));
}

SnapshotId Inventory::upsert_snapshot(HostSnapshot snapshot) {
  sort_records(snapshot);
  validate_snapshot(snapshot, impl_->options.clock());
  const auto body = codec::encode(snapshot).dump();
  const auto observed = static_cast<std::int64_t>(snapshot.observed_at.time_since_epoch().count());

  std::lock_guard db_lock(impl_->db_mutex);
  detail::Transaction tx(impl_->db);
  {
    auto existing = impl_->db.prepare(
        "SELECT id FROM snapshots WHERE host = ?1 AND observed_at = ?2 AND body = ?3 LIMIT 1");
    existing.bind(1, snapshot.host).bind(2, observed).bind(3, body);
    if (existing.step()) {
      return existing.column_int(0);
    }
  }
  impl_->db.prepare("INSERT INTO snapshots(host, observed_at, record_count, body) "
                    "VALUES (?1, ?2, ?3, ?4)")
      .bind(1, snapshot.host)
      .bind(2, observed)
      .bind(3, static_cast<std::int64_t>(snapshot.records.size()))
      .bind(4, body)
      .run();
  const SnapshotId id = impl_->db.last_insert_rowid();
  if (impl_->options.retain_last) {
    impl_->db
        .prepare("DELETE FROM snapshots WHERE host = ?1 AND id NOT IN ("
                 " SELECT id FROM snapshots WHERE host = ?1"
                 " ORDER BY observed_at DESC, id DESC LIMIT ?2)")
        .bind(1, snapshot.host)
        .bind(2, static_cast<std::int64_t>(*impl_->options.retain_last))
        .run();
  }
  tx.commit();

  std::unique_lock cache_lock(impl_->cache_mutex);
  auto& slot = impl_->latest[snapshot.host];
  if (!slot || snapshot.observed_at >= slot->observed_at) {
    slot = std::make_shared<const HostSnapshot>(std::move(snapshot));
  }
  return id;
}

SnapshotId Inventory::attach_processes(std::string_view host,
                                       std::vector<ProcessRecord> processes) {
  auto current = latest(host);
  if (!current) {
    throw Error(ErrorCode::NotFound, "no snapshot for host '" + std::string(host) + "'");
  }
  current->processes = std::move(processes);
  return upsert_snapshot(std::move(*current));
}

std::optional<HostSnapshot> Inventory::latest(std::string_view host) const {
  std::shared_lock lock(impl_->cache_mutex);
  const auto it = impl_->latest.find(host);
  if (it == impl_->latest.end()) return std::nullopt;
  return *it->second;
}

std::vector<std::string> Inventory::list_hosts() const {
  std::shared_lock lock(impl_->cache_mutex);
  std::vector<std::string> out;
  out.reserve(impl_->latest.size());
  for (const auto& [host, snap] : impl_->latest) out.push_back(host);
  return out;
}

std::vector<std::string> Inventory::list_service_keys() const {
  const auto fleet = view();
  std::set<std::string> keys;
  for (const auto& snap : fleet.hosts) {
    for (const auto& r : snap->records) keys.insert(r.service_key);
  }
  return {keys.begin(), keys.end()};
}

FleetView Inventory::view() const {
  std::shared_lock lock(impl_->cache_mutex);
  FleetView out;
  out.hosts.reserve(impl_->latest.size());
  for (const auto& [host, snap] : impl_->latest) out.hosts.push_back(snap);
  return out;
}

std::vector<SnapshotInfo> Inventory::history(std::string_view host) const {
  std::lock_guard lock(impl_->db_mutex);
  auto stmt = impl_->db.prepare(
      "SELECT id, observed_at, record_count FROM snapshots WHERE host = ?1"
      " ORDER BY observed_at, id");
  stmt.bind(1, host);
  std::vector<SnapshotInfo> out;
  while (stmt.step()) {
    out.push_back({stmt.column_int(0), Timestamp{std::chrono::seconds{stmt.column_int(1)}},
                   static_cast<std::size_t>(stmt.column_int(2))});
  }
  return out;
}

std::optional<HostSnapshot> Inventory::load(SnapshotId id) const {
  std::lock_guard lock(impl_->db_mutex);
  auto stmt = impl_->db.prepare("SELECT body FROM snapshots WHERE id = ?1");
  stmt.bind(1, id);
  return impl_->query_one(stmt);
}

std::optional<HostSnapshot> Inventory::snapshot_at(std::string_view host, Timestamp at) const {
  std::lock_guard lock(impl_->db_mutex);
  auto stmt = impl_->db.prepare(
      "SELECT body FROM snapshots WHERE host = ?1 AND observed_at <= ?2"
      " ORDER BY observed_at DESC, id DESC LIMIT 1");
  stmt.bind(1, host).bind(2, static_cast<std::int64_t>(at.time_since_epoch().count()));
  return impl_->query_one(stmt);
}

std::size_t Inventory::snapshot_count() const {
  std::lock_guard lock(impl_->db_mutex);
  auto stmt = impl_->db.prepare("SELECT COUNT(*) FROM snapshots");
  stmt.step();
  return static_cast<std::size_t>(stmt.column_int(0));
}

void Inventory::export_dump(std::ostream& out) const {
  std::lock_guard lock(impl_->db_mutex);
  auto stmt = impl_->db.prepare("SELECT body FROM snapshots ORDER BY id");
  while (stmt.step()) {
    out << stmt.column_text(0) << '\n';
  }
}

std::size_t Inventory::import_dump(std::istream& in) {
  std::size_t count = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    HostSnapshot snap;
    try {
      snap = codec::decode_snapshot(codec::Json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::BadArgument, e.what(), line_no);
    }
    upsert_snapshot(std::move(snap));
    ++count;
  }
  return count;
}

}  // namespace svcinv
