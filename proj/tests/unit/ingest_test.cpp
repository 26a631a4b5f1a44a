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
#include "svcinv/ingest.hpp"
#include "svcinv/text.hpp"

namespace svcinv {
namespace {

using namespace ingest;

const std::string kHeader =
    "Host\tService\tDisplayName\tStatus\tStartupType\tLogOnAs\tPath\tManufacturer\tDescription\n";

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(SVCINV_FIXTURE_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(ParseExport, SpoolerRow) {
  const auto rows = parse_export(
      kHeader +
      "hostA\tSpooler\tPrint Spooler\tRunning\tAutomatic\tLocal System\t"
      "C:\\WINDOWS\\system32\\spoolsv.exe\tMicrosoft Corporation\tqueues print jobs\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].host, "hostA");
  EXPECT_EQ(rows[0].service_key, "Spooler");
  EXPECT_EQ(rows[0].display_name, "Print Spooler");
  EXPECT_EQ(rows[0].path, "C:\\WINDOWS\\system32\\spoolsv.exe");
  EXPECT_EQ(rows[0].description, "queues print jobs");
  EXPECT_EQ(rows[0].line_no, 2u);
}

TEST(ParseExport, HeaderOnlyIsEmpty) {
  EXPECT_TRUE(parse_export(kHeader).empty());
  EXPECT_TRUE(parse_export(kHeader.substr(0, kHeader.size() - 1)).empty());
}

TEST(ParseExport, AcceptsCrlfBomAndHeaderCase) {
  std::string header = kHeader;
  for (auto& c : header) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto text = "\xEF\xBB\xBF" + header.substr(0, header.size() - 1) +
                    "\r\nh\tS\tD\tStopped\tManual\t\t\t\t\r\n";
  const auto rows = parse_export(text);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].service_key, "S");
  EXPECT_EQ(rows[0].description, "");
}

TEST(ParseExport, CustomDelimiter) {
  std::string header = kHeader;
  std::replace(header.begin(), header.end(), '\t', '|');
  const auto rows = parse_export(header + "h|svc|d|Running|Manual|x|p|m|desc\n", '|');
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].logon_raw, "x");
}

TEST(ParseExport, Errors) {
  EXPECT_SVC_ERROR(parse_export("Host\tService\n"), ErrorCode::MalformedHeader);
  EXPECT_SVC_ERROR(parse_export(""), ErrorCode::MalformedHeader);
  EXPECT_SVC_ERROR(parse_export(kHeader + "h\tS\tD\n"), ErrorCode::BadFieldCount);
  EXPECT_SVC_ERROR(parse_export(kHeader + " \tS\tD\tRunning\tManual\t\t\t\t\n"),
                   ErrorCode::EmptyKey);
  EXPECT_SVC_ERROR(parse_export(kHeader + "h\t \tD\tRunning\tManual\t\t\t\t\n"),
                   ErrorCode::EmptyKey);
  EXPECT_SVC_ERROR(parse_export(kHeader + "h\tS\t\xC3\tRunning\tManual\t\t\t\t\n"),
                   ErrorCode::EncodingError);
  try {
    parse_export(kHeader + "h\tS\tD\tRunning\tManual\t\t\t\t\nbroken\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.line_no(), 3u);
  }
}

TEST(ParseExport, LenientKeepsGoodRows) {
  const auto result = parse_export_lenient(kHeader +
                                           "h\tA\tD\tRunning\tManual\t\t\t\t\n"
                                           "short\tline\n"
                                           "h\tB\tD\tRunning\tManual\t\t\t\t\n"
                                           "\tC\tD\tRunning\tManual\t\t\t\t\n");
  ASSERT_EQ(result.items.size(), 2u);
  EXPECT_EQ(result.items[1].service_key, "B");
  ASSERT_EQ(result.errors.size(), 2u);
  EXPECT_EQ(result.errors[0].line_no, 3u);
  EXPECT_EQ(result.errors[0].code, ErrorCode::BadFieldCount);
  EXPECT_EQ(result.errors[1].code, ErrorCode::EmptyKey);
  EXPECT_SVC_ERROR(parse_export_lenient("nope\n"), ErrorCode::MalformedHeader);
}

RawExportRow random_row(std::mt19937_64& rng, std::size_t i) {
  static const char* words[] = {"alpha", "Beta", "gamma delta", "C:\\Program Files\\x.exe",
                                "\xC3\x89v\xC3\xA9nement", "", "Local System", "a,b;c"};
  auto pick = [&] { return std::string(words[rng() % std::size(words)]); };
  RawExportRow r;
  r.host = "host" + std::to_string(rng() % 7);
  r.service_key = "Svc" + std::to_string(i);
  r.display_name = pick();
  r.status_raw = (rng() % 2) ? "Running" : "";
  r.startup_raw = (rng() % 2) ? "Manual" : "Disabled";
  r.logon_raw = pick();
  r.path = pick();
  r.manufacturer = pick();
  r.description = pick();
  r.line_no = i + 2;
  return r;
}

TEST(ParseExport, RoundTripHundredRows) {
  std::mt19937_64 rng(20261014);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<RawExportRow> rows;
    for (std::size_t i = 0; i < 100; ++i) rows.push_back(random_row(rng, i));
    const auto text = write_export(rows);
    EXPECT_EQ(parse_export(text), rows);
    // Byte-level: re-serializing the parsed rows reproduces the text.
    EXPECT_EQ(write_export(parse_export(text)), text);
  }
}

TEST(WriteExport, RejectsDelimiterInField) {
  RawExportRow r;
  r.host = "h";
  r.service_key = "s";
  r.description = "has\ttab";
  EXPECT_SVC_ERROR(write_export(std::vector{r}), ErrorCode::DelimiterInField);
  r.description = "line\nbreak";
  EXPECT_SVC_ERROR(write_export(std::vector{r}), ErrorCode::DelimiterInField);
}

TEST(Normalize, Status) {
  EXPECT_EQ(normalize_status("Started"), Status::Running);
  EXPECT_EQ(normalize_status(""), Status::Stopped);
  EXPECT_EQ(normalize_status("RUNNING"), Status::Running);
  EXPECT_EQ(normalize_status(" stopped "), Status::Stopped);
  EXPECT_SVC_ERROR(normalize_status("Paused"), ErrorCode::UnknownStatus);
  for (auto s : {Status::Running, Status::Stopped}) {
    EXPECT_EQ(normalize_status(to_string(s)), s);
  }
}

TEST(Normalize, Startup) {
  EXPECT_EQ(normalize_startup("Automatic"), StartupType::Automatic);
  EXPECT_EQ(normalize_startup("disabled"), StartupType::Disabled);
  EXPECT_EQ(normalize_startup("  Manual "), StartupType::Manual);
  EXPECT_SVC_ERROR(normalize_startup("Boot"), ErrorCode::UnknownStartup);
  for (auto s : {StartupType::Automatic, StartupType::Manual, StartupType::Disabled}) {
    EXPECT_EQ(normalize_startup(to_string(s)), s);
  }
}

TEST(Normalize, Logon) {
  EXPECT_EQ(normalize_logon("Local System"), LogonAccount::local_system());
  EXPECT_EQ(normalize_logon("LocalSystem"), LogonAccount::local_system());
  EXPECT_EQ(normalize_logon(""), LogonAccount::local_system());
  EXPECT_EQ(normalize_logon("NT AUTHORITY\\LocalService"), LogonAccount::local_service());
  EXPECT_EQ(normalize_logon("Network Service"), LogonAccount::network_service());
  EXPECT_EQ(normalize_logon(".\\svc_backup").kind(), LogonAccount::Kind::Other);
  EXPECT_EQ(normalize_logon(".\\svc_backup").name(), ".\\svc_backup");
}

TEST(ToServiceRecords, NormalizesVocabulary) {
  RawExportRow row;
  row.host = " hostA ";
  row.service_key = "Spooler";
  row.status_raw = "Started";
  row.startup_raw = "Manual";
  row.logon_raw = "Local System";
  const auto records = to_service_records(std::vector{row});
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].host, "hostA");
  EXPECT_EQ(records[0].service_key, "spooler");
  EXPECT_EQ(records[0].status, Status::Running);
  EXPECT_EQ(records[0].startup, StartupType::Manual);
  EXPECT_EQ(records[0].logon, LogonAccount::local_system());
  EXPECT_TRUE(to_service_records(std::vector<RawExportRow>{}).empty());
}

TEST(ToServiceRecords, DuplicateAfterFolding) {
  RawExportRow a;
  a.host = "h";
  a.service_key = "spooler";
  a.startup_raw = "Manual";
  RawExportRow b = a;
  b.service_key = "SPOOLER";
  b.line_no = 3;
  ASSERT_EQ(text::fold_case(a.service_key), text::fold_case(b.service_key));
  EXPECT_SVC_ERROR(to_service_records(std::vector{a, b}), ErrorCode::DuplicateService);
  b.host = "other";
  EXPECT_EQ(to_service_records(std::vector{a, b}).size(), 2u);
}

TEST(ToServiceRecords, LineContextOnBadStatus) {
  RawExportRow a;
  a.host = "h";
  a.service_key = "x";
  a.status_raw = "Paused";
  a.line_no = 7;
  try {
    to_service_records(std::vector{a});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownStatus);
    EXPECT_EQ(e.line_no(), 7u);
  }
  const auto lenient = to_service_records_lenient(std::vector{a});
  EXPECT_TRUE(lenient.items.empty());
  ASSERT_EQ(lenient.errors.size(), 1u);
  EXPECT_EQ(lenient.errors[0].line_no, 7u);
}

TEST(BuildSnapshots, GroupsAndSorts) {
  const auto rows = parse_export(kHeader +
                                 "b\tZeta\t\tRunning\tManual\t\t\t\t\n"
                                 "a\tbeta\t\tRunning\tManual\t\t\t\t\n"
                                 "b\tAlpha\t\tStopped\tManual\t\t\t\t\n");
  const auto snaps =
      build_snapshots(to_service_records(rows), Timestamp{std::chrono::seconds{100}});
  ASSERT_EQ(snaps.size(), 2u);
  EXPECT_EQ(snaps[0].host, "a");
  EXPECT_EQ(snaps[1].host, "b");
  ASSERT_EQ(snaps[1].records.size(), 2u);
  EXPECT_EQ(snaps[1].records[0].service_key, "alpha");
  EXPECT_EQ(snaps[1].records[1].service_key, "zeta");
  EXPECT_FALSE(snaps[1].processes.has_value());
}

TEST(ParseTasklist, SingleLines) {
  auto p = parse_tasklist("services.exe 728 Eventlog, PlugPlay\n");
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], (ProcessRecord{"services.exe", 728, {"Eventlog", "PlugPlay"}}));
  p = parse_tasklist("System Idle Process 0 N/A");
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], (ProcessRecord{"System Idle Process", 0, {}}));
}

TEST(ParseTasklist, ConsoleLayoutWithContinuations) {
  const std::string text =
      "\n"
      "Image Name                     PID Services\n"
      "========================= ======== ============================================\n"
      "svchost.exe                    1080 AudioSrv, CryptSvc, Dhcp,\n"
      "                                    dmserver, ERSvc\n"
      "spoolsv.exe                    1448 Spooler\n";
  const auto p = parse_tasklist(text);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].services,
            (std::vector<std::string>{"AudioSrv", "CryptSvc", "Dhcp", "dmserver", "ERSvc"}));
  EXPECT_EQ(p[1].pid, 1448u);
}

TEST(ParseTasklist, Errors) {
  EXPECT_SVC_ERROR(parse_tasklist("svchost.exe N/A\n"), ErrorCode::NoPidToken);
  EXPECT_SVC_ERROR(parse_tasklist("a.exe 5 N/A\nb.exe 5 N/A\n"), ErrorCode::DuplicatePid);
  EXPECT_SVC_ERROR(parse_tasklist("1234 N/A\n"), ErrorCode::NoPidToken);
  try {
    parse_tasklist("a.exe 1 N/A\nnot a record\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.line_no(), 2u);
  }
}

// Counts straight from the file text: one line per record, commas split
// services, "N/A" is none.
struct FixtureCounts {
  std::size_t records = 0;
  std::size_t with_services = 0;
  std::size_t associations = 0;
};

FixtureCounts count_fixture(const std::string& text) {
  FixtureCounts c;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++c.records;
    const auto tab = line.rfind('\t');
    const auto services = line.substr(tab + 1);
    if (services == "N/A") continue;
    ++c.with_services;
    c.associations += 1 + static_cast<std::size_t>(std::count(services.begin(), services.end(), ','));
  }
  return c;
}

TEST(ParseTasklist, SampleTranscript) {
  const auto text = read_fixture("tasklist_svc_sample.txt");
  const auto p = parse_tasklist(text);
  const auto oracle = count_fixture(text);
  EXPECT_EQ(oracle.records, 41u);
  EXPECT_EQ(p.size(), oracle.records);
  std::size_t with = 0, total = 0;
  std::set<std::string> seen;
  for (const auto& r : p) {
    with += !r.services.empty();
    total += r.services.size();
    for (const auto& s : r.services) {
      EXPECT_TRUE(seen.insert(text::canonical_key(s)).second) << s << " listed twice";
    }
  }
  EXPECT_EQ(with, oracle.with_services);
  EXPECT_EQ(with, 17u);
  EXPECT_EQ(total, oracle.associations);
  EXPECT_EQ(total, 48u);
  for (const auto& r : p) {
    if (r.pid == 1080) {
      EXPECT_EQ(r.services.size(), 25u);
      EXPECT_EQ(r.services[23], "wuauerv");
    }
    if (r.pid == 912 || r.pid == 988 || r.pid == 1080 || r.pid == 1128 || r.pid == 1300) {
      EXPECT_EQ(r.image_name, "svchost.exe");
    }
  }
  EXPECT_EQ(p.front(), (ProcessRecord{"System Idle Process", 0, {}}));
  EXPECT_EQ(p[19].services, std::vector<std::string>{"TSM Client Acceptor"});
}

TEST(WriteTasklist, RoundTrip) {
  const auto p = parse_tasklist(read_fixture("tasklist_svc_sample.txt"));
  EXPECT_EQ(parse_tasklist(write_tasklist(p)), p);
}

}  // namespace
}  // namespace svcinv
