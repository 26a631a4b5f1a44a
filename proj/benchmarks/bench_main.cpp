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

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "svcinv/fleet.hpp"
#include "svcinv/ingest.hpp"
#include "svcinv/inventory.hpp"
#include "svcinv/report.hpp"

namespace {

using namespace svcinv;

fleet::Fleet make_fleet(std::size_t hosts) {
  fleet::FleetOptions o;
  o.hosts = hosts;
  o.seed = 1;
  o.hostile = 5;
  o.unknown = 10;
  o.extra_known = 150;
  return fleet::generate_fleet(o);
}

void BM_ParseExport(benchmark::State& state) {
  const auto text = make_fleet(static_cast<std::size_t>(state.range(0))).combined_export();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ingest::parse_export(text));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseExport)->Arg(10)->Arg(100);

void BM_NormalizeAndGroup(benchmark::State& state) {
  const auto rows = ingest::parse_export(
      make_fleet(static_cast<std::size_t>(state.range(0))).combined_export());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ingest::build_snapshots(ingest::to_service_records(rows), Timestamp{}));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * rows.size()));
}
BENCHMARK(BM_NormalizeAndGroup)->Arg(10)->Arg(100);

void BM_ParseTasklist(benchmark::State& state) {
  std::ifstream in(std::string(SVCINV_FIXTURE_DIR) + "/tasklist_svc_sample.txt", std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto text = ss.str();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ingest::parse_tasklist(text));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseTasklist);

void BM_Triage(benchmark::State& state) {
  const auto f = make_fleet(static_cast<std::size_t>(state.range(0)));
  const auto view = make_view(f.snapshots());
  for (auto _ : state) {
    benchmark::DoNotOptimize(report::triage(view, f.kb));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * view.pair_count()));
}
BENCHMARK(BM_Triage)->Arg(10)->Arg(100)->Arg(1000);

void BM_Aggregate(benchmark::State& state) {
  const auto f = make_fleet(static_cast<std::size_t>(state.range(0)));
  const auto view = make_view(f.snapshots());
  for (auto _ : state) {
    benchmark::DoNotOptimize(report::network_aggregate(view, f.kb));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * view.pair_count()));
}
BENCHMARK(BM_Aggregate)->Arg(100)->Arg(1000);

void BM_Diff(benchmark::State& state) {
  const auto f = make_fleet(2);
  auto a = f.hosts[0].snapshot;
  auto b = f.hosts[1].snapshot;
  b.host = a.host;
  for (auto& r : b.records) r.host = a.host;
  for (auto _ : state) {
    benchmark::DoNotOptimize(diff_snapshots(a, b));
  }
}
BENCHMARK(BM_Diff);

void BM_UpsertSnapshot(benchmark::State& state) {
  const auto f = make_fleet(50);
  const auto snaps = f.snapshots();
  std::int64_t t = 0;
  auto inv = Inventory::in_memory();
  for (auto _ : state) {
    auto s = snaps[static_cast<std::size_t>(t) % snaps.size()];
    s.observed_at = Timestamp{std::chrono::seconds{++t}};
    benchmark::DoNotOptimize(inv.upsert_snapshot(std::move(s)));
  }
}
BENCHMARK(BM_UpsertSnapshot);

}  // namespace

BENCHMARK_MAIN();
