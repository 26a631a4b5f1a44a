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

#include "svcinv/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "svcinv/text.hpp"

namespace svcinv::ingest {

namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";

std::string_view strip_bom(std::string_view text) {
  if (text.substr(0, kBom.size()) == kBom) {
    text.remove_prefix(kBom.size());
  }
  return text;
}

void require_utf8(std::string_view text) {
  if (!text::is_valid_utf8(text)) {
    throw Error(ErrorCode::EncodingError, "input is not valid UTF-8");
  }
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  }
  return out;
}

void check_header(std::string_view line, char delimiter) {
  const auto cols = text::split(line, delimiter);
  bool ok = cols.size() == kExportColumns.size();
  for (std::size_t i = 0; ok && i < cols.size(); ++i) {
    ok = lower_ascii(text::trim(cols[i])) == lower_ascii(kExportColumns[i]);
  }
  if (!ok) {
    throw Error(ErrorCode::MalformedHeader,
                "expected Host, Service, DisplayName, Status, StartupType, LogOnAs, "
                "Path, Manufacturer, Description",
                1);
  }
}

RawExportRow parse_export_line(std::string_view line, char delimiter, std::size_t line_no) {
  const auto fields = text::split(line, delimiter);
  if (fields.size() != kExportColumns.size()) {
    throw Error(ErrorCode::BadFieldCount,
                "expected 9 fields, found " + std::to_string(fields.size()), line_no);
  }
  RawExportRow row;
  row.host = fields[0];
  row.service_key = fields[1];
  row.display_name = fields[2];
  row.status_raw = fields[3];
  row.startup_raw = fields[4];
  row.logon_raw = fields[5];
  row.path = fields[6];
  row.manufacturer = fields[7];
  row.description = fields[8];
  row.line_no = line_no;
  if (text::trim(row.host).empty() || text::trim(row.service_key).empty()) {
    throw Error(ErrorCode::EmptyKey, "host and service must be non-empty", line_no);
  }
  return row;
}

template <class OnError>
std::vector<RawExportRow> parse_export_impl(std::string_view text, char delimiter,
                                            OnError&& on_error) {
  if (delimiter == '\n' || delimiter == '\r') {
    throw Error(ErrorCode::BadArgument, "line terminators cannot be delimiters");
  }
  require_utf8(text);
  const auto all = text::lines(strip_bom(text));
  if (all.empty()) {
    throw Error(ErrorCode::MalformedHeader, "missing header row", 1);
  }
  check_header(all[0], delimiter);

  std::vector<RawExportRow> rows;
  rows.reserve(all.size() - 1);
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].empty()) {
      continue;
    }
    try {
      rows.push_back(parse_export_line(all[i], delimiter, i + 1));
    } catch (const Error& e) {
      on_error(e);
    }
  }
  return rows;
}

void append_field(std::string& out, std::string_view field, char delimiter,
                  std::size_t line_no) {
  if (field.find(delimiter) != std::string_view::npos ||
      field.find_first_of("\r\n") != std::string_view::npos) {
    throw Error(ErrorCode::DelimiterInField,
                "field '" + std::string(field) + "' contains the delimiter or a line break",
                line_no);
  }
  out += field;
}

bool is_separator_line(std::string_view trimmed) {
  return !trimmed.empty() && trimmed.find_first_not_of("= \t") == std::string_view::npos;
}

bool is_header_line(std::string_view trimmed) {
  return lower_ascii(trimmed.substr(0, 10)) == "image name";
}

bool is_space(char c) { return c == ' ' || c == '\t'; }

bool all_digits(std::string_view tok) {
  return !tok.empty() && tok.find_first_not_of("0123456789") == std::string_view::npos;
}

// Appends comma-separated services into `record`, skipping empties, "N/A",
// and keys already present under case folding.
void append_services(ProcessRecord& record, std::set<std::string>& seen,
                     std::string_view list) {
  for (auto piece : text::split(list, ',')) {
    const auto name = text::trim(piece);
    if (name.empty() || text::iequals(name, "N/A")) {
      continue;
    }
    if (seen.insert(text::fold_case(name)).second) {
      record.services.emplace_back(name);
    }
  }
}

}  // namespace

std::vector<RawExportRow> parse_export(std::string_view text, char delimiter) {
  return parse_export_impl(text, delimiter, [](const Error& e) { throw e; });
}

Lenient<RawExportRow> parse_export_lenient(std::string_view text, char delimiter) {
  Lenient<RawExportRow> out;
  out.items = parse_export_impl(text, delimiter, [&](const Error& e) {
    out.errors.push_back({e.line_no().value_or(0), e.code(), e.what()});
  });
  return out;
}

std::string write_export(std::span<const RawExportRow> rows, char delimiter) {
  std::string out;
  for (std::size_t i = 0; i < kExportColumns.size(); ++i) {
    if (i != 0) out += delimiter;
    out += kExportColumns[i];
  }
  out += '\n';
  std::size_t line_no = 1;
  for (const auto& row : rows) {
    ++line_no;
    const std::string_view fields[] = {row.host,        row.service_key, row.display_name,
                                       row.status_raw,  row.startup_raw, row.logon_raw,
                                       row.path,        row.manufacturer, row.description};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      if (i != 0) out += delimiter;
      append_field(out, fields[i], delimiter, line_no);
    }
    out += '\n';
  }
  return out;
}

std::vector<ProcessRecord> parse_tasklist(std::string_view text) {
  require_utf8(text);
  std::vector<ProcessRecord> records;
  std::set<std::uint32_t> pids;
  std::set<std::string> seen_services;  // for the current record only

  const auto all = text::lines(strip_bom(text));
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto line = all[i];
    const auto line_no = i + 1;
    const auto trimmed = text::trim(line);
    if (trimmed.empty() || is_separator_line(trimmed) || is_header_line(trimmed)) {
      continue;
    }

    if (is_space(line.front()) && !records.empty()) {
      append_services(records.back(), seen_services, trimmed);
      continue;
    }

    // Locate the first all-digit whitespace-separated token.
    std::size_t pos = 0;
    std::size_t pid_begin = std::string_view::npos;
    std::size_t pid_end = 0;
    while (pos < trimmed.size()) {
      while (pos < trimmed.size() && is_space(trimmed[pos])) ++pos;
      const auto begin = pos;
      while (pos < trimmed.size() && !is_space(trimmed[pos])) ++pos;
      if (begin < pos && all_digits(trimmed.substr(begin, pos - begin))) {
        pid_begin = begin;
        pid_end = pos;
        break;
      }
    }
    if (pid_begin == std::string_view::npos) {
      throw Error(ErrorCode::NoPidToken, "no PID in '" + std::string(trimmed) + "'", line_no);
    }
    const auto image = text::trim(trimmed.substr(0, pid_begin));
    if (image.empty()) {
      throw Error(ErrorCode::NoPidToken, "no image name before the PID", line_no);
    }

    ProcessRecord record;
    record.image_name = image;
    const auto pid_text = trimmed.substr(pid_begin, pid_end - pid_begin);
    const auto [ptr, ec] =
        std::from_chars(pid_text.data(), pid_text.data() + pid_text.size(), record.pid);
    if (ec != std::errc{} || ptr != pid_text.data() + pid_text.size()) {
      throw Error(ErrorCode::NoPidToken, "PID out of range: " + std::string(pid_text), line_no);
    }
    if (!pids.insert(record.pid).second) {
      throw Error(ErrorCode::DuplicatePid, "pid " + std::to_string(record.pid), line_no);
    }
    seen_services.clear();
    append_services(record, seen_services, trimmed.substr(pid_end));
    records.push_back(std::move(record));
  }
  return records;
}

std::string write_tasklist(std::span<const ProcessRecord> processes) {
  constexpr std::size_t kImageWidth = 25;
  constexpr std::size_t kPidWidth = 8;
  std::string out = "\nImage Name                     PID Services\n";
  out += std::string(kImageWidth, '=') + ' ' + std::string(kPidWidth, '=') + ' ' +
         std::string(44, '=') + '\n';
  for (const auto& p : processes) {
    std::string line = p.image_name;
    line.append(line.size() < kImageWidth ? kImageWidth - line.size() : 0, ' ');
    line += ' ';
    const auto pid = std::to_string(p.pid);
    line.append(pid.size() < kPidWidth ? kPidWidth - pid.size() : 0, ' ');
    line += pid;
    line += ' ';
    line += p.services.empty() ? std::string("N/A") : text::join(p.services, ", ");
    out += line;
    out += '\n';
  }
  return out;
}

Status normalize_status(std::string_view raw) {
  const auto token = lower_ascii(text::trim(raw));
  if (token == "running" || token == "started") {
    return Status::Running;
  }
  if (token == "stopped" || token.empty()) {
    return Status::Stopped;
  }
  throw Error(ErrorCode::UnknownStatus, "'" + std::string(raw) + "'");
}

StartupType normalize_startup(std::string_view raw) {
  const auto token = lower_ascii(text::trim(raw));
  if (token == "automatic") return StartupType::Automatic;
  if (token == "manual") return StartupType::Manual;
  if (token == "disabled") return StartupType::Disabled;
  throw Error(ErrorCode::UnknownStartup, "'" + std::string(raw) + "'");
}

LogonAccount normalize_logon(std::string_view raw) {
  const auto trimmed = text::trim(raw);
  std::string compact;
  for (char c : lower_ascii(trimmed)) {
    if (c != ' ') compact.push_back(c);
  }
  for (std::string_view prefix : {"ntauthority\\", ".\\"}) {
    if (compact.starts_with(prefix)) {
      compact.erase(0, prefix.size());
    }
  }
  if (compact.empty() || compact == "localsystem" || compact == "system") {
    return LogonAccount::local_system();
  }
  if (compact == "localservice") return LogonAccount::local_service();
  if (compact == "networkservice") return LogonAccount::network_service();
  return LogonAccount::other(std::string(trimmed));
}

namespace {

ServiceRecord normalize_row(const RawExportRow& row) {
  try {
    ServiceRecord rec;
    rec.host = text::trim(row.host);
    rec.service_key = text::canonical_key(row.service_key);
    rec.display_name = row.display_name;
    rec.description = row.description;
    rec.status = normalize_status(row.status_raw);
    rec.startup = normalize_startup(row.startup_raw);
    rec.logon = normalize_logon(row.logon_raw);
    rec.path = row.path;
    rec.manufacturer = row.manufacturer;
    if (rec.host.empty() || rec.service_key.empty()) {
      throw Error(ErrorCode::EmptyKey, "host and service must be non-empty");
    }
    return rec;
  } catch (const Error& e) {
    if (e.line_no() || row.line_no == 0) {
      throw;
    }
    throw Error(e.code(), e.what(), row.line_no);
  }
}

template <class OnError>
std::vector<ServiceRecord> to_records_impl(std::span<const RawExportRow> rows,
                                           OnError&& on_error) {
  std::vector<ServiceRecord> out;
  out.reserve(rows.size());
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& row : rows) {
    try {
      auto rec = normalize_row(row);
      if (!seen.emplace(rec.host, rec.service_key).second) {
        throw Error(ErrorCode::DuplicateService, rec.host + "/" + rec.service_key,
                    row.line_no == 0 ? std::nullopt : std::optional(row.line_no));
      }
      out.push_back(std::move(rec));
    } catch (const Error& e) {
      on_error(e);
    }
  }
  return out;
}

}  // namespace

std::vector<ServiceRecord> to_service_records(std::span<const RawExportRow> rows) {
  return to_records_impl(rows, [](const Error& e) { throw e; });
}

Lenient<ServiceRecord> to_service_records_lenient(std::span<const RawExportRow> rows) {
  Lenient<ServiceRecord> out;
  out.items = to_records_impl(rows, [&](const Error& e) {
    out.errors.push_back({e.line_no().value_or(0), e.code(), e.what()});
  });
  return out;
}

std::vector<HostSnapshot> build_snapshots(std::span<const ServiceRecord> records,
                                          Timestamp observed_at) {
  std::map<std::string, HostSnapshot> by_host;
  for (const auto& rec : records) {
    auto& snap = by_host[rec.host];
    snap.host = rec.host;
    snap.observed_at = observed_at;
    snap.records.push_back(rec);
  }
  std::vector<HostSnapshot> out;
  out.reserve(by_host.size());
  for (auto& [host, snap] : by_host) {
    std::sort(snap.records.begin(), snap.records.end(),
              [](const ServiceRecord& a, const ServiceRecord& b) {
                return a.service_key < b.service_key;
              });
    out.push_back(std::move(snap));
  }
  return out;
}

std::vector<RawExportRow> to_export_rows(const HostSnapshot& snapshot) {
  std::vector<RawExportRow> out;
  out.reserve(snapshot.records.size());
  for (const auto& rec : snapshot.records) {
    RawExportRow row;
    row.host = rec.host;
    row.service_key = rec.service_key;
    row.display_name = rec.display_name;
    row.status_raw = to_string(rec.status);
    row.startup_raw = to_string(rec.startup);
    row.logon_raw = rec.logon.display();
    row.path = rec.path;
    row.manufacturer = rec.manufacturer;
    row.description = rec.description;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace svcinv::ingest
