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

#include <gtest/gtest.h>
#include <sqlite3.h>

#include <atomic>
#include <random>
#include <sstream>
#include <thread>

#include "expect_error.hpp"
#include "svcinv/inventory.hpp"
#include "test_support.hpp"

namespace svcinv {
namespace {

using namespace svcinv::testing;

// Reads the row count straight from the database file.
long long count_rows(const std::filesystem::path& db, const std::string& host) {
  sqlite3* handle = nullptr;
  EXPECT_EQ(sqlite3_open_v2(db.c_str(), &handle, SQLITE_OPEN_READONLY, nullptr), SQLITE_OK);
  sqlite3_stmt* stmt = nullptr;
  sqlite3_prepare_v2(handle, "SELECT COUNT(*) FROM snapshots WHERE host = ?", -1, &stmt, nullptr);
  sqlite3_bind_text(stmt, 1, host.c_str(), -1, SQLITE_TRANSIENT);
  long long n = -1;
  if (sqlite3_step(stmt) == SQLITE_ROW) n = sqlite3_column_int64(stmt, 0);
  sqlite3_finalize(stmt);
  sqlite3_close(handle);
  return n;
}

Inventory::Options fixed_clock() {
  Inventory::Options o;
  o.clock = [] { return at(1'800'000'000); };
  return o;
}

TEST(Inventory, FirstSnapshotIsLatest) {
  auto inv = Inventory::in_memory(fixed_clock());
  EXPECT_FALSE(inv.latest("hostA"));
  const auto s = snap("hostA", 100, {rec("hostA", "spooler")});
  inv.upsert_snapshot(s);
  ASSERT_TRUE(inv.latest("hostA"));
  EXPECT_EQ(*inv.latest("hostA"), s);
}

TEST(Inventory, EarlierSnapshotDoesNotReplaceLatest) {
  auto inv = Inventory::in_memory(fixed_clock());
  const auto t2 = snap("hostA", 200, {rec("hostA", "b")});
  inv.upsert_snapshot(t2);
  inv.upsert_snapshot(snap("hostA", 100, {rec("hostA", "a")}));
  EXPECT_EQ(*inv.latest("hostA"), t2);
  EXPECT_EQ(inv.snapshot_count(), 2u);
  EXPECT_EQ(inv.snapshot_at("hostA", at(150))->records[0].service_key, "a");
  EXPECT_FALSE(inv.snapshot_at("hostA", at(50)));
}

TEST(Inventory, ReingestIsIdempotent) {
  TempDir dir;
  const auto db = dir.path() / "inventory.db";
  {
    auto inv = Inventory::open(db, fixed_clock());
    const auto s = snap("hostA", 100, {rec("hostA", "x"), rec("hostA", "y")});
    const auto id1 = inv.upsert_snapshot(s);
    const auto id2 = inv.upsert_snapshot(s);
    EXPECT_EQ(id1, id2);
  }
  EXPECT_EQ(count_rows(db, "hostA"), 1);
}

TEST(Inventory, EqualTimestampsLaterIngestWins) {
  auto inv = Inventory::in_memory(fixed_clock());
  const auto first = snap("h", 100, {rec("h", "a")});
  const auto second = snap("h", 100, {rec("h", "b")});
  const auto id1 = inv.upsert_snapshot(first);
  const auto id2 = inv.upsert_snapshot(second);
  EXPECT_LT(id1, id2);
  EXPECT_EQ(*inv.latest("h"), second);
  // Re-sending the first body does not resurrect it.
  EXPECT_EQ(inv.upsert_snapshot(first), id1);
  EXPECT_EQ(*inv.latest("h"), second);
}

TEST(Inventory, ListsComeFromLatestOnly) {
  auto inv = Inventory::in_memory(fixed_clock());
  EXPECT_TRUE(inv.list_hosts().empty());
  EXPECT_TRUE(inv.list_service_keys().empty());
  inv.upsert_snapshot(snap("B", 100, {rec("B", "old"), rec("B", "shared")}));
  inv.upsert_snapshot(snap("A", 100, {rec("A", "shared")}));
  inv.upsert_snapshot(snap("B", 200, {rec("B", "shared"), rec("B", "new")}));
  EXPECT_EQ(inv.list_hosts(), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(inv.list_service_keys(), (std::vector<std::string>{"new", "shared"}));
}

TEST(Inventory, LatestIsMonotonePerHost) {
  auto inv = Inventory::in_memory(fixed_clock());
  const auto a = snap("A", 100, {rec("A", "x")});
  inv.upsert_snapshot(a);
  inv.upsert_snapshot(snap("B", 300, {rec("B", "y")}));
  inv.upsert_snapshot(snap("B", 400, {}));
  EXPECT_EQ(*inv.latest("A"), a);
}

TEST(Inventory, RejectsInvariantViolations) {
  auto inv = Inventory::in_memory(fixed_clock());
  EXPECT_SVC_ERROR(inv.upsert_snapshot(snap("A", 100, {rec("B", "x")})),
                   ErrorCode::InvariantViolation);
  EXPECT_SVC_ERROR(inv.upsert_snapshot(snap("A", 100, {rec("A", "x"), rec("A", "x")})),
                   ErrorCode::InvariantViolation);
  EXPECT_SVC_ERROR(inv.upsert_snapshot(snap("A", 100, {rec("A", "Upper")})),
                   ErrorCode::InvariantViolation);
  EXPECT_SVC_ERROR(inv.upsert_snapshot(snap(" A", 100, {})), ErrorCode::InvariantViolation);
  EXPECT_SVC_ERROR(inv.upsert_snapshot(snap("", 100, {})), ErrorCode::InvariantViolation);
  // 24h of slack is allowed, more is not.
  inv.upsert_snapshot(snap("A", 1'800'000'000 + 86'400, {}));
  EXPECT_SVC_ERROR(inv.upsert_snapshot(snap("A", 1'800'000'000 + 86'401, {})),
                   ErrorCode::InvariantViolation);

  auto bad = snap("A", 100, {rec("A", "x")});
  bad.processes = std::vector<ProcessRecord>{{"a.exe", 1, {"x"}}, {"b.exe", 1, {}}};
  EXPECT_SVC_ERROR(inv.upsert_snapshot(bad), ErrorCode::InvariantViolation);
  bad.processes = std::vector<ProcessRecord>{{"a.exe", 1, {"x"}}, {"b.exe", 2, {"X"}}};
  EXPECT_SVC_ERROR(inv.upsert_snapshot(bad), ErrorCode::InvariantViolation);
  bad.processes = std::vector<ProcessRecord>{{"a.exe", 1, {"x", ""}}};
  EXPECT_SVC_ERROR(inv.upsert_snapshot(bad), ErrorCode::InvariantViolation);
  EXPECT_EQ(inv.snapshot_count(), 1u);
}

TEST(Inventory, AttachProcesses) {
  auto inv = Inventory::in_memory(fixed_clock());
  EXPECT_SVC_ERROR(inv.attach_processes("A", {}), ErrorCode::NotFound);
  inv.upsert_snapshot(snap("A", 100, {rec("A", "spooler")}));
  const std::vector<ProcessRecord> procs{{"spoolsv.exe", 1448, {"Spooler"}}};
  inv.attach_processes("A", procs);
  const auto latest = inv.latest("A");
  ASSERT_TRUE(latest->processes);
  EXPECT_EQ(*latest->processes, procs);
  EXPECT_EQ(latest->records.size(), 1u);
  EXPECT_EQ(inv.history("A").size(), 2u);
}

TEST(Inventory, RetainLast) {
  Inventory::Options o = fixed_clock();
  o.retain_last = 2;
  auto inv = Inventory::in_memory(o);
  for (int t = 1; t <= 5; ++t) inv.upsert_snapshot(snap("A", t, {rec("A", "k" + std::to_string(t))}));
  inv.upsert_snapshot(snap("B", 1, {}));
  const auto h = inv.history("A");
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0].observed_at, at(4));
  EXPECT_EQ(h[1].observed_at, at(5));
  EXPECT_EQ(inv.snapshot_count(), 3u);
  o.retain_last = 0;
  EXPECT_SVC_ERROR(Inventory::in_memory(o), ErrorCode::BadArgument);
}

TEST(Inventory, SurvivesReopen) {
  TempDir dir;
  const auto db = dir.path() / "inventory.db";
  const auto s = snap("A", 100, {rec("A", "x", Status::Stopped, StartupType::Disabled)});
  {
    auto inv = Inventory::open(db, fixed_clock());
    inv.upsert_snapshot(s);
  }
  auto inv = Inventory::open(db, fixed_clock());
  EXPECT_EQ(*inv.latest("A"), s);
}

TEST(Inventory, DumpRoundTrip) {
  auto inv = Inventory::in_memory(fixed_clock());
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    auto s = random_snapshot(rng, host_name(i % 3), 30, 100 + i);
    s.records.push_back(rec(s.host, "zz\xC3\xA9", Status::Running));
    s.records.back().logon = LogonAccount::other("DOMAIN\\svc");
    inv.upsert_snapshot(s);
  }
  std::stringstream dump;
  inv.export_dump(dump);
  auto copy = Inventory::in_memory(fixed_clock());
  EXPECT_EQ(copy.import_dump(dump), 10u);
  EXPECT_EQ(copy.list_hosts(), inv.list_hosts());
  for (const auto& h : inv.list_hosts()) EXPECT_EQ(*copy.latest(h), *inv.latest(h));
  std::stringstream garbage("{not json}\n");
  EXPECT_SVC_ERROR(copy.import_dump(garbage), ErrorCode::BadArgument);
}

TEST(Inventory, ReadersNeverSeeTornSnapshots) {
  auto inv = Inventory::in_memory(fixed_clock());
  // Snapshot t carries exactly t records, each keyed by t.
  auto make = [](int t) {
    std::vector<ServiceRecord> r;
    for (int i = 0; i < t; ++i) r.push_back(rec("A", "t" + std::to_string(t) + "-" + std::to_string(i)));
    return snap("A", t, std::move(r));
  };
  inv.upsert_snapshot(make(1));
  std::atomic<bool> done{false};
  std::atomic<int> bad{0};
  std::vector<std::thread> readers;
  for (int i = 0; i < 3; ++i) {
    readers.emplace_back([&] {
      while (!done) {
        const auto view = inv.view();
        for (const auto& s : view.hosts) {
          const auto t = static_cast<int>(s->observed_at.time_since_epoch().count());
          if (static_cast<int>(s->records.size()) != t) ++bad;
        }
      }
    });
  }
  for (int t = 2; t <= 60; ++t) inv.upsert_snapshot(make(t));
  done = true;
  for (auto& r : readers) r.join();
  EXPECT_EQ(bad.load(), 0);
  EXPECT_EQ(inv.latest("A")->records.size(), 60u);
}

TEST(Diff, Identity) {
  const auto s = snap("A", 1, {rec("A", "x"), rec("A", "y", Status::Stopped)});
  EXPECT_TRUE(diff_snapshots(s, s).empty());
}

TEST(Diff, AddedService) {
  const auto a = snap("A", 1, {rec("A", "spooler")});
  auto b = a;
  b.records.push_back(rec("A", "evilsvc"));
  const auto d = diff_snapshots(a, b);
  EXPECT_EQ(d.added, std::vector<std::string>{"evilsvc"});
  EXPECT_TRUE(d.removed.empty());
  EXPECT_TRUE(d.status_changed.empty());
  EXPECT_TRUE(d.startup_changed.empty());
}

TEST(Diff, FieldChanges) {
  const auto a = snap("A", 1, {rec("A", "x", Status::Running, StartupType::Manual), rec("A", "y")});
  const auto b = snap("A", 2, {rec("A", "x", Status::Stopped, StartupType::Disabled), rec("A", "y")});
  const auto d = diff_snapshots(a, b);
  EXPECT_TRUE(d.added.empty());
  EXPECT_TRUE(d.removed.empty());
  ASSERT_EQ(d.status_changed.size(), 1u);
  EXPECT_EQ(d.status_changed[0], (ChangeSet::StatusChange{"x", Status::Running, Status::Stopped}));
  ASSERT_EQ(d.startup_changed.size(), 1u);
  EXPECT_EQ(d.startup_changed[0],
            (ChangeSet::StartupChange{"x", StartupType::Manual, StartupType::Disabled}));
}

TEST(Diff, IgnoresDescriptiveFields) {
  const auto a = snap("A", 1, {rec("A", "x")});
  auto b = a;
  b.records[0].display_name = "renamed";
  b.records[0].description = "new words";
  EXPECT_TRUE(diff_snapshots(a, b).empty());
}

TEST(Diff, HostMismatch) {
  EXPECT_SVC_ERROR(diff_snapshots(snap("A", 1, {}), snap("B", 1, {})), ErrorCode::HostMismatch);
}

TEST(Diff, PatchPropertySmall) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_snapshot(rng, "A", 25, 1);
    const auto b = random_snapshot(rng, "A", 25, 2);
    const auto d = diff_snapshots(a, b);
    EXPECT_EQ(apply(key_state(a), d), key_state(b));
    EXPECT_EQ(d.added, diff_snapshots(b, a).removed);
    EXPECT_TRUE(std::is_sorted(d.added.begin(), d.added.end()));
    EXPECT_TRUE(std::is_sorted(d.removed.begin(), d.removed.end()));
  }
}

}  // namespace
}  // namespace svcinv
