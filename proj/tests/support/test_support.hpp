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

// Builders and random generators shared by the unit and acceptance tests.
// Every oracle in here works on plain containers and never calls back into
// the code under test.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <map>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "svcinv/classify.hpp"
#include "svcinv/inventory.hpp"
#include "svcinv/types.hpp"

namespace svcinv::testing {

/// A fresh directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("svcinv-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline Timestamp at(std::int64_t seconds) { return Timestamp{std::chrono::seconds{seconds}}; }

inline ServiceRecord rec(const std::string& host, const std::string& key,
                         Status status = Status::Running,
                         StartupType startup = StartupType::Automatic) {
  ServiceRecord r;
  r.host = host;
  r.service_key = key;
  r.display_name = key + " display";
  r.status = status;
  r.startup = startup;
  return r;
}

inline HostSnapshot snap(const std::string& host, std::int64_t t,
                         std::vector<ServiceRecord> records) {
  HostSnapshot s;
  s.host = host;
  s.observed_at = at(t);
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.service_key < b.service_key; });
  s.records = std::move(records);
  return s;
}

inline KbEntry kb_entry(const std::string& key, Verdict verdict,
                        std::optional<StartupType> recommended = std::nullopt) {
  KbEntry e;
  e.service_key = key;
  e.verdict = verdict;
  e.recommended_startup = recommended;
  return e;
}

inline std::string key_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "svc%04zu", i);
  return buf;
}

inline std::string host_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "h%03zu", i);
  return buf;
}

template <class Rng>
std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// A snapshot holding a random subset of `universe` keys with random state.
template <class Rng>
HostSnapshot random_snapshot(Rng& rng, const std::string& host, std::size_t universe,
                             std::int64_t t) {
  std::vector<ServiceRecord> records;
  const auto density = uniform(rng, 0, 100);
  for (std::size_t k = 0; k < universe; ++k) {
    if (uniform(rng, 1, 100) > density) continue;
    const auto status = uniform(rng, 0, 1) ? Status::Running : Status::Stopped;
    const auto startup = static_cast<StartupType>(uniform(rng, 0, 2));
    records.push_back(rec(host, key_name(k), status, startup));
  }
  return snap(host, t, std::move(records));
}

struct RandomFleet {
  std::vector<HostSnapshot> snapshots;
  KbState kb;
  std::size_t universe = 0;
};

/// Up to `max_hosts` hosts over a universe of up to `max_services` keys;
/// roughly a third of the keys are Hostile, a third Known, the rest absent.
template <class Rng>
RandomFleet random_fleet(Rng& rng, std::size_t max_hosts, std::size_t max_services) {
  RandomFleet f;
  f.universe = uniform(rng, 1, max_services);
  const auto hosts = uniform(rng, 0, max_hosts);
  for (std::size_t h = 0; h < hosts; ++h) {
    f.snapshots.push_back(random_snapshot(rng, host_name(h), f.universe, 1'700'000'000));
  }
  for (std::size_t k = 0; k < f.universe; ++k) {
    switch (uniform(rng, 0, 2)) {
      case 0: f.kb.emplace(key_name(k), kb_entry(key_name(k), Verdict::Hostile)); break;
      case 1: f.kb.emplace(key_name(k), kb_entry(key_name(k), Verdict::Known)); break;
      default: break;
    }
  }
  return f;
}

/// Brute force: hosts whose snapshot has `key` with the given status.
inline std::vector<std::string> hosts_with(const std::vector<HostSnapshot>& snapshots,
                                           const std::string& key, Status status) {
  std::vector<std::string> out;
  for (const auto& s : snapshots) {
    for (const auto& r : s.records) {
      if (r.service_key == key && r.status == status) out.push_back(s.host);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::set<std::string> observed_keys(const std::vector<HostSnapshot>& snapshots) {
  std::set<std::string> keys;
  for (const auto& s : snapshots) {
    for (const auto& r : s.records) keys.insert(r.service_key);
  }
  return keys;
}

/// Applies a change set to the (key -> status, startup) view of a snapshot.
using KeyState = std::map<std::string, std::pair<Status, StartupType>>;

inline KeyState key_state(const HostSnapshot& s) {
  KeyState out;
  for (const auto& r : s.records) out[r.service_key] = {r.status, r.startup};
  return out;
}

inline KeyState apply(KeyState state, const ChangeSet& c) {
  for (const auto& k : c.removed) state.erase(k);
  for (const auto& a : c.added_state) state[a.service_key] = {a.status, a.startup};
  for (const auto& s : c.status_changed) state.at(s.service_key).first = s.to;
  for (const auto& s : c.startup_changed) state.at(s.service_key).second = s.to;
  return state;
}

}  // namespace svcinv::testing
