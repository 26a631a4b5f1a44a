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

#include <fstream>
#include <random>
#include <sstream>

#include "expect_error.hpp"
#include "svcinv/correlate.hpp"
#include "svcinv/ingest.hpp"
#include "test_support.hpp"

namespace svcinv {
namespace {

using namespace svcinv::testing;

std::vector<ProcessRecord> sample_listing() {
  std::ifstream in(std::string(SVCINV_FIXTURE_DIR) + "/tasklist_svc_sample.txt", std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ingest::parse_tasklist(ss.str());
}

TEST(GroupByImage, SampleSvchost) {
  const auto groups = correlate::group_by_image(sample_listing());
  const auto it = std::find_if(groups.begin(), groups.end(),
                               [](const auto& g) { return g.image_name == "svchost.exe"; });
  ASSERT_NE(it, groups.end());
  std::vector<std::uint32_t> pids;
  for (const auto& i : it->instances) pids.push_back(i.pid);
  EXPECT_EQ(pids, (std::vector<std::uint32_t>{912, 988, 1080, 1128, 1300}));
  EXPECT_EQ(it->total_services, 1u + 1u + 25u + 1u + 4u);
  const auto cmd = std::find_if(groups.begin(), groups.end(),
                                [](const auto& g) { return g.image_name == "cmd.exe"; });
  ASSERT_NE(cmd, groups.end());
  EXPECT_EQ(cmd->instances.size(), 2u);
  EXPECT_TRUE(std::is_sorted(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    return a.image_name < b.image_name;
  }));
}

TEST(GroupByImage, EmptyAndDuplicates) {
  EXPECT_TRUE(correlate::group_by_image({}).empty());
  const std::vector<ProcessRecord> dup{{"a.exe", 1, {}}, {"b.exe", 1, {}}};
  EXPECT_SVC_ERROR(correlate::group_by_image(dup), ErrorCode::DuplicatePid);
}

TEST(GroupByImage, ConservesServices) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ProcessRecord> procs;
    std::size_t input_total = 0;
    std::size_t next_service = 0;
    const auto n = uniform(rng, 0, 30);
    for (std::size_t i = 0; i < n; ++i) {
      ProcessRecord p{"img" + std::to_string(rng() % 5) + ".exe", static_cast<std::uint32_t>(i * 4), {}};
      const auto k = uniform(rng, 0, 4);
      for (std::size_t j = 0; j < k; ++j) p.services.push_back("s" + std::to_string(next_service++));
      input_total += k;
      procs.push_back(p);
    }
    const auto groups = correlate::group_by_image(procs);
    std::size_t grouped = 0;
    for (const auto& g : groups) {
      std::size_t sum = 0;
      for (const auto& i : g.instances) sum += i.services.size();
      EXPECT_EQ(g.total_services, sum);
      grouped += g.total_services;
    }
    EXPECT_EQ(grouped, input_total);

    // service_to_process agrees with the group containing each key.
    const auto map = correlate::service_to_process(procs);
    for (const auto& g : groups) {
      for (const auto& i : g.instances) {
        for (const auto& s : i.services) {
          EXPECT_EQ(map.at(s), (correlate::ProcessRef{g.image_name, i.pid}));
        }
      }
    }
  }
}

TEST(GroupByImage, OneServicePerPid) {
  std::vector<ProcessRecord> procs;
  for (std::uint32_t i = 0; i < 20; ++i) {
    procs.push_back({"img" + std::to_string(i % 3), i, {"svc" + std::to_string(i)}});
  }
  for (const auto& g : correlate::group_by_image(procs)) {
    EXPECT_EQ(g.total_services, g.instances.size());
  }
}

TEST(ServiceToProcess, SampleTranscript) {
  const auto map = correlate::service_to_process(sample_listing());
  EXPECT_EQ(map.at("spooler"), (correlate::ProcessRef{"spoolsv.exe", 1448}));
  EXPECT_EQ(map.at("dnscache"), (correlate::ProcessRef{"svchost.exe", 1128}));
  EXPECT_EQ(map.at("tsm client acceptor"), (correlate::ProcessRef{"dsmcad.exe", 1896}));
  EXPECT_EQ(map.size(), 48u);
}

TEST(ServiceToProcess, Conflict) {
  const std::vector<ProcessRecord> procs{{"a.exe", 1, {"Spooler"}}, {"b.exe", 2, {"spooler"}}};
  EXPECT_SVC_ERROR(correlate::service_to_process(procs), ErrorCode::ConflictingHost);
}

TEST(Enrich, WithoutProcesses) {
  const auto s = snap("h", 1, {rec("h", "spooler")});
  const auto e = correlate::enrich_snapshot(s);
  ASSERT_EQ(e.records.size(), 1u);
  EXPECT_FALSE(e.records[0].process);
  EXPECT_FALSE(e.records[0].unmapped_running);
  EXPECT_TRUE(e.unmapped_running.empty());
}

TEST(Enrich, SampleJoin) {
  auto s = snap("h", 1,
                {rec("h", "spooler", Status::Running), rec("h", "ghost", Status::Running),
                 rec("h", "telnet", Status::Stopped)});
  s.processes = sample_listing();
  const auto e = correlate::enrich_snapshot(s);
  std::map<std::string, const correlate::EnrichedRecord*> by_key;
  for (const auto& r : e.records) by_key[r.record.service_key] = &r;
  ASSERT_TRUE(by_key.at("spooler")->process);
  EXPECT_EQ(*by_key.at("spooler")->process, (correlate::ProcessRef{"spoolsv.exe", 1448}));
  EXPECT_FALSE(by_key.at("telnet")->process);
  EXPECT_FALSE(by_key.at("telnet")->unmapped_running);
  EXPECT_FALSE(by_key.at("ghost")->process);
  EXPECT_TRUE(by_key.at("ghost")->unmapped_running);
  EXPECT_EQ(e.unmapped_running, std::vector<std::string>{"ghost"});
}

}  // namespace
}  // namespace svcinv
