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

#include "svcinv/fleet.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>

#include "svcinv/error.hpp"
#include "svcinv/ingest.hpp"
#include "svcinv/text.hpp"

namespace svcinv::fleet {

namespace {

struct CatalogEntry {
  std::string key;  // as written in exports
  std::string display_name;
  std::string description;
  std::string image;  // hosting executable
  std::string manufacturer;
  std::string application;
  std::optional<StartupType> recommended;
};

constexpr const char* kMicrosoft = "Microsoft Corporation";

std::vector<CatalogEntry> seed_catalog() {
  // Keys match seed_entries(); images are what these services usually run as.
  static const char* const kImages[] = {"svchost.exe", "svchost.exe", "svchost.exe",
                                        "services.exe", "svchost.exe", "spoolsv.exe",
                                        "lsass.exe",   "clipsrv.exe", "svchost.exe",
                                        "tlntsvr.exe"};
  static const char* const kKeys[] = {"DNS Client",      "DHCP Client", "Error Reporting",
                                      "Event Log",       "Help",        "Print Spooler",
                                      "Protected Storage", "ClipBook",  "Alerter",
                                      "Telnet"};
  std::vector<CatalogEntry> out;
  const auto seeds = seed_entries();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    out.push_back({kKeys[i], kKeys[i], seeds[i].description, kImages[i], kMicrosoft, "",
                   seeds[i].recommended_startup});
  }
  return out;
}

struct ExtraKnown {
  const char* key;
  const char* display;
  const char* image;
  const char* manufacturer;
  const char* application;
};

// Service keys as they appear in a typical XP-era tasklist /svc listing.
constexpr ExtraKnown kExtraPool[] = {
    {"PlugPlay", "Plug and Play", "services.exe", kMicrosoft, ""},
    {"RpcSs", "Remote Procedure Call (RPC)", "svchost.exe", kMicrosoft, "Windows RPC"},
    {"DcomLaunch", "DCOM Server Process Launcher", "svchost.exe", kMicrosoft, "Windows RPC"},
    {"AudioSrv", "Windows Audio", "svchost.exe", kMicrosoft, ""},
    {"CryptSvc", "Cryptographic Services", "svchost.exe", kMicrosoft, ""},
    {"lanmanserver", "Server", "svchost.exe", kMicrosoft, "Windows Networking"},
    {"lanmanworkstation", "Workstation", "svchost.exe", kMicrosoft, "Windows Networking"},
    {"Netman", "Network Connections", "svchost.exe", kMicrosoft, "Windows Networking"},
    {"Schedule", "Task Scheduler", "svchost.exe", kMicrosoft, ""},
    {"McAfeeFramework", "McAfee Framework Service", "FrameworkService.exe", "McAfee, Inc.",
     "McAfee"},
    {"McShield", "Network Associates McShield", "Mcshield.exe", "McAfee, Inc.", "McAfee"},
    {"McTaskManger", "Network Associates Task Manager", "VsTskMgr.exe", "McAfee, Inc.",
     "McAfee"},
    {"W32Time", "Windows Time", "svchost.exe", kMicrosoft, ""},
    {"winmgmt", "Windows Management Instrumentation", "svchost.exe", kMicrosoft, ""},
    {"Themes", "Themes", "svchost.exe", kMicrosoft, ""},
    {"TrkWks", "Distributed Link Tracking Client", "svchost.exe", kMicrosoft, ""},
    {"NVSvc", "NVIDIA Display Driver Service", "nvsvc32.exe", "NVIDIA Corporation", "NVIDIA"},
    {"UMWdf", "Windows User Mode Driver Framework", "wdfmgr.exe", kMicrosoft, ""},
    {"ALG", "Application Layer Gateway Service", "alg.exe", kMicrosoft, ""},
    {"Netlogon", "Net Logon", "lsass.exe", kMicrosoft, "Windows Networking"},
    {"SamSs", "Security Accounts Manager", "lsass.exe", kMicrosoft, ""},
    {"RemoteRegistry", "Remote Registry", "svchost.exe", kMicrosoft, ""},
    {"SSDPSRV", "SSDP Discovery Service", "svchost.exe", kMicrosoft, ""},
    {"WebClient", "WebClient", "svchost.exe", kMicrosoft, ""},
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Plain modulo keeps the stream identical across standard libraries.
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
  bool percent(unsigned p) { return below(100) < p; }

 private:
  std::mt19937_64 engine_;
};

std::string numbered(const char* prefix, std::size_t n) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%02zu", prefix, n);
  return buf;
}

StartupType random_startup(Rng& rng) {
  const auto r = rng.below(10);
  if (r < 6) return StartupType::Automatic;
  if (r < 9) return StartupType::Manual;
  return StartupType::Disabled;
}

bool random_running(Rng& rng, StartupType startup) {
  switch (startup) {
    case StartupType::Automatic: return rng.percent(90);
    case StartupType::Manual: return rng.percent(30);
    case StartupType::Disabled: return false;
  }
  return false;
}

RawExportRow make_row(Rng& rng, const std::string& host, const CatalogEntry& e,
                      StartupType startup, bool running) {
  static const char* const kRunning[] = {"Running", "Started"};
  static const char* const kStopped[] = {"Stopped", ""};
  static const char* const kLogons[] = {"Local System", "LocalSystem",
                                        "NT AUTHORITY\\LocalService",
                                        "NT AUTHORITY\\NetworkService"};
  RawExportRow row;
  row.host = host;
  row.service_key = e.key;
  row.display_name = e.display_name;
  row.status_raw = running ? kRunning[rng.below(2)] : kStopped[rng.below(2)];
  row.startup_raw = std::string(to_string(startup));
  const auto l = rng.below(10);
  row.logon_raw = kLogons[l < 6 ? l % 2 : (l < 8 ? 2 : 3)];
  row.path = "C:\\WINDOWS\\system32\\" + e.image;
  row.manufacturer = e.manufacturer;
  row.description = e.description;
  return row;
}

std::vector<ProcessRecord> make_processes(Rng& rng,
                                          const std::vector<const CatalogEntry*>& running) {
  std::vector<ProcessRecord> procs;
  std::uint32_t next_pid = 200;
  auto pid = [&] {
    next_pid += static_cast<std::uint32_t>(4 + 4 * rng.below(40));
    return next_pid;
  };
  procs.push_back({"System Idle Process", 0, {}});
  procs.push_back({"System", 4, {}});
  procs.push_back({"smss.exe", pid(), {}});
  procs.push_back({"csrss.exe", pid(), {}});
  procs.push_back({"winlogon.exe", pid(), {}});

  // Dedicated images get one process each, in first-seen order.
  std::vector<std::string> image_order;
  std::map<std::string, std::vector<std::string>> by_image;
  std::vector<std::string> shared;
  for (const auto* e : running) {
    if (e->image == "svchost.exe") {
      shared.push_back(e->key);
      continue;
    }
    if (!by_image.contains(e->image)) image_order.push_back(e->image);
    by_image[e->image].push_back(e->key);
  }
  for (std::string core : {"services.exe", "lsass.exe"}) {
    if (!by_image.contains(core)) {
      image_order.insert(image_order.begin(), core);
      by_image[core];
    }
  }
  for (const auto& image : image_order) {
    procs.push_back({image, pid(), by_image[image]});
  }

  const std::size_t instances = 2 + rng.below(4);
  std::vector<std::vector<std::string>> groups(instances);
  for (std::size_t i = 0; i < shared.size(); ++i) {
    // The first `instances` services seed one group each; the rest scatter.
    groups[i < instances ? i : rng.below(instances)].push_back(shared[i]);
  }
  for (auto& g : groups) {
    procs.push_back({"svchost.exe", pid(), std::move(g)});
  }
  procs.push_back({"explorer.exe", pid(), {}});
  procs.push_back({"cmd.exe", pid(), {}});
  return procs;
}

}  // namespace

std::vector<HostSnapshot> Fleet::snapshots() const {
  std::vector<HostSnapshot> out;
  out.reserve(hosts.size());
  for (const auto& h : hosts) out.push_back(h.snapshot);
  return out;
}

std::string Fleet::combined_export(char delimiter) const {
  std::vector<RawExportRow> all;
  for (const auto& h : hosts) all.insert(all.end(), h.rows.begin(), h.rows.end());
  return ingest::write_export(all, delimiter);
}

Fleet generate_fleet(const FleetOptions& options) {
  Rng rng(options.seed);
  Fleet fleet;

  auto catalog = seed_catalog();
  const std::size_t seed_count = catalog.size();
  for (std::size_t i = 0; i < options.extra_known; ++i) {
    if (i < std::size(kExtraPool)) {
      const auto& x = kExtraPool[i];
      catalog.push_back({x.key, x.display, std::string(x.display) + " service", x.image,
                         x.manufacturer, x.application, std::nullopt});
    } else {
      catalog.push_back({numbered("KnownSvc", i), "Known Service " + std::to_string(i),
                         "Inventory filler service", "svchost.exe", kMicrosoft, "",
                         std::nullopt});
    }
  }
  const std::size_t known_end = catalog.size();
  for (std::size_t i = 1; i <= options.hostile; ++i) {
    catalog.push_back({numbered("HostileSvc", i), "Remote Helper " + std::to_string(i),
                       "Unsolicited remote agent", numbered("rhlp", i) + ".exe", "", "",
                       StartupType::Disabled});
  }
  const std::size_t hostile_end = catalog.size();
  for (std::size_t i = 1; i <= options.unknown; ++i) {
    catalog.push_back({numbered("UnknownSvc", i), "Vendor Agent " + std::to_string(i), "",
                       numbered("vagent", i) + ".exe", "", "", std::nullopt});
  }

  for (auto& e : seed_entries()) {
    auto key = e.service_key;
    fleet.kb.emplace(std::move(key), std::move(e));
  }
  for (std::size_t i = seed_count; i < hostile_end; ++i) {
    const auto& c = catalog[i];
    KbEntry e;
    e.service_key = text::canonical_key(c.key);
    e.verdict = i < known_end ? Verdict::Known : Verdict::Hostile;
    e.description = c.description;
    e.application = c.application;
    e.executable_path = "C:\\WINDOWS\\system32\\" + c.image;
    e.recommended_startup = c.recommended;
    if (e.verdict == Verdict::Hostile) fleet.hostile_keys.push_back(e.service_key);
    auto key = e.service_key;
    fleet.kb.emplace(std::move(key), std::move(e));
  }
  for (std::size_t i = hostile_end; i < catalog.size(); ++i) {
    fleet.unknown_keys.push_back(text::canonical_key(catalog[i].key));
  }
  std::sort(fleet.hostile_keys.begin(), fleet.hostile_keys.end());
  std::sort(fleet.unknown_keys.begin(), fleet.unknown_keys.end());

  for (std::size_t h = 0; h < options.hosts; ++h) {
    HostData data;
    char name[32];
    std::snprintf(name, sizeof name, "host-%03zu", h + 1);
    data.host = name;
    std::vector<const CatalogEntry*> running;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      const auto& c = catalog[i];
      bool present = true;
      StartupType startup;
      if (i < seed_count) {
        // Seed services mostly follow their recommendation.
        startup = rng.percent(85) ? *c.recommended : random_startup(rng);
      } else if (i < known_end) {
        present = rng.percent(70);
        startup = random_startup(rng);
      } else {
        // Suspicious keys: pinned to one host each, sprinkled elsewhere.
        const std::size_t ordinal = i - known_end;
        present = ordinal % options.hosts == h || rng.percent(20);
        startup = rng.percent(80) ? StartupType::Automatic : StartupType::Manual;
      }
      if (!present) continue;
      const bool is_running = random_running(rng, startup);
      data.rows.push_back(make_row(rng, data.host, c, startup, is_running));
      if (is_running) running.push_back(&c);
    }
    data.processes = make_processes(rng, running);

    auto records = ingest::to_service_records(data.rows);
    auto snaps = ingest::build_snapshots(records, options.observed_at);
    data.snapshot = snaps.empty() ? HostSnapshot{data.host, options.observed_at, {}, {}}
                                  : std::move(snaps.front());
    data.snapshot.processes = data.processes;
    fleet.hosts.push_back(std::move(data));
  }
  return fleet;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << body;
  if (!out) {
    throw Error(ErrorCode::StorageFailure, "cannot write " + path.string());
  }
}

}  // namespace

void write_fleet(const Fleet& fleet, const std::filesystem::path& dir, char delimiter) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::StorageFailure, "cannot create " + dir.string() + ": " + ec.message());
  }
  for (const auto& h : fleet.hosts) {
    write_file(dir / (h.host + ".tsv"), ingest::write_export(h.rows, delimiter));
    write_file(dir / (h.host + ".tasklist.txt"), ingest::write_tasklist(h.processes));
  }
  write_file(dir / "kb.tsv", write_kb_file(fleet.kb, delimiter));
}

}  // namespace svcinv::fleet
