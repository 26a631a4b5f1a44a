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

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svcinv/error.hpp"
#include "svcinv/timestamp.hpp"
#include "svcinv/types.hpp"

// Parsing of service export files and tasklist /svc transcripts into domain
// records, plus normalization of the status/startup/logon vocabularies used
// by msconfig and services.msc.
namespace svcinv::ingest {

inline constexpr char kDefaultDelimiter = '\t';

/// Canonical export header, in column order.
inline constexpr std::array<std::string_view, 9> kExportColumns = {
    "Host", "Service", "DisplayName", "Status", "StartupType",
    "LogOnAs", "Path", "Manufacturer", "Description"};

struct LineError {
  std::size_t line_no = 0;
  ErrorCode code = ErrorCode::BadArgument;
  std::string message;
};

/// Result of a lenient pass: the good items plus one error per rejected line.
template <class T>
struct Lenient {
  std::vector<T> items;
  std::vector<LineError> errors;
};

/// Strict: the first bad line fails the whole input.
std::vector<RawExportRow> parse_export(std::string_view text,
                                       char delimiter = kDefaultDelimiter);

/// Header and encoding problems still throw; per-line problems are collected.
Lenient<RawExportRow> parse_export_lenient(std::string_view text,
                                           char delimiter = kDefaultDelimiter);

/// Header line plus one line per row, LF-terminated. Throws DelimiterInField
/// when a field would not survive re-parsing.
std::string write_export(std::span<const RawExportRow> rows,
                         char delimiter = kDefaultDelimiter);

/// Parses a "tasklist /svc" console transcript. The PID is the first
/// all-digit token of a record line, everything before it is the image name
/// and everything after it is a comma separated service list ("N/A" means
/// none). Lines starting with whitespace continue the previous record's list.
std::vector<ProcessRecord> parse_tasklist(std::string_view text);

/// Fixed-width transcript that parse_tasklist reads back losslessly.
std::string write_tasklist(std::span<const ProcessRecord> processes);

Status normalize_status(std::string_view raw);
StartupType normalize_startup(std::string_view raw);
LogonAccount normalize_logon(std::string_view raw);

/// Normalizes each row; rejects two rows with the same (host, canonical key).
std::vector<ServiceRecord> to_service_records(std::span<const RawExportRow> rows);
Lenient<ServiceRecord> to_service_records_lenient(std::span<const RawExportRow> rows);

/// Groups records into one snapshot per host, hosts ascending, records
/// ascending by key.
std::vector<HostSnapshot> build_snapshots(std::span<const ServiceRecord> records,
                                          Timestamp observed_at);

/// Inverse of normalization for writing a snapshot back out as an export.
std::vector<RawExportRow> to_export_rows(const HostSnapshot& snapshot);

}  // namespace svcinv::ingest
