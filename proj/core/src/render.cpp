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

#include <algorithm>

#include "codec.hpp"
#include "svcinv/error.hpp"
#include "svcinv/report.hpp"
#include "svcinv/text.hpp"

namespace svcinv::report {

namespace {

using codec::Json;

// --- JSON -------------------------------------------------------------------

Json classification_fields(Json obj, Classification c) {
  obj["classification"] = std::string(to_string(c));
  obj["color"] = std::string(to_string(color_of(c)));
  return obj;
}

Json entries_json(const std::vector<TriageEntry>& entries) {
  Json arr = Json::array();
  for (const auto& e : entries) {
    arr.push_back({{"service_key", e.service_key}, {"hosts", e.hosts}});
  }
  return arr;
}

Json to_json(const SystemReport& r) {
  Json out = Json::object();
  for (const auto& [host, rows] : r.hosts) {
    Json arr = Json::array();
    for (const auto& row : rows) {
      arr.push_back(classification_fields(codec::encode(row.record), row.classification));
    }
    out[host] = std::move(arr);
  }
  return out;
}

Json to_json(const TriageReport& r) {
  Json out{{"hostile", entries_json(r.hostile)},
           {"unknown", entries_json(r.unknown)},
           {"include_known", r.include_known}};
  if (r.include_known) out["known"] = entries_json(r.known);
  return out;
}

Json to_json(const AggregateReport& r) {
  Json arr = Json::array();
  for (const auto& row : r.rows) {
    arr.push_back(classification_fields(Json{{"service_key", row.service_key},
                                             {"display_name", row.display_name},
                                             {"running", row.running},
                                             {"stopped", row.stopped},
                                             {"total", row.total}},
                                        row.classification));
  }
  return arr;
}

Json to_json(const ApplicationReport& r) {
  Json arr = Json::array();
  for (const auto& row : r.rows) {
    arr.push_back({{"application", row.application},
                   {"description", row.description},
                   {"executable_path", row.executable_path},
                   {"services", row.services}});
  }
  return arr;
}

// --- HTML -------------------------------------------------------------------

constexpr std::string_view kStylesheet =
    "body{font-family:sans-serif;margin:1.5em}"
    "table{border-collapse:collapse;margin-bottom:1.5em}"
    "th,td{border:1px solid #999;padding:2px 8px;text-align:left}"
    ".hostile{background:#c00;color:#fff}"
    ".unknown{background:#cc0}"
    ".known{background:#0a0;color:#fff}";

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string_view css_class(Classification c) {
  switch (c) {
    case Classification::Hostile: return "hostile";
    case Classification::Unknown: return "unknown";
    case Classification::Known: return "known";
  }
  return "unknown";
}

class HtmlPage {
 public:
  explicit HtmlPage(std::string_view title) {
    out_ += "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>";
    out_ += escape(title);
    out_ += "</title><style>";
    out_ += kStylesheet;
    out_ += "</style></head><body>\n<h1>";
    out_ += escape(title);
    out_ += "</h1>\n";
  }

  void heading(std::string_view text) { out_ += "<h2>" + escape(text) + "</h2>\n"; }
  void paragraph(std::string_view text) { out_ += "<p>" + escape(text) + "</p>\n"; }

  void open_table(std::initializer_list<std::string_view> columns) {
    out_ += "<table><thead><tr>";
    for (auto c : columns) out_ += "<th>" + escape(c) + "</th>";
    out_ += "</tr></thead><tbody>\n";
  }

  void row(std::string_view cls, std::initializer_list<std::string_view> cells) {
    out_ += cls.empty() ? std::string("<tr>") : "<tr class=\"" + std::string(cls) + "\">";
    for (auto c : cells) out_ += "<td>" + escape(c) + "</td>";
    out_ += "</tr>\n";
  }

  void close_table() { out_ += "</tbody></table>\n"; }

  std::string finish() && {
    out_ += "</body></html>\n";
    return std::move(out_);
  }

 private:
  std::string out_;
};

void triage_block(HtmlPage& page, std::string_view title, Classification c,
                  const std::vector<TriageEntry>& entries) {
  page.heading(title);
  if (entries.empty()) {
    page.paragraph("None.");
    return;
  }
  page.open_table({"Service", "Running on"});
  for (const auto& e : entries) {
    page.row(css_class(c), {e.service_key, text::join(e.hosts, ", ")});
  }
  page.close_table();
}

std::string to_html(const TriageReport& r) {
  HtmlPage page("Unknown and Hostile Services");
  triage_block(page, "Hostile", Classification::Hostile, r.hostile);
  triage_block(page, "Unknown", Classification::Unknown, r.unknown);
  if (r.include_known) triage_block(page, "Known", Classification::Known, r.known);
  return std::move(page).finish();
}

std::string to_html(const SystemReport& r) {
  HtmlPage page("Services by System");
  for (const auto& [host, rows] : r.hosts) {
    page.heading(host);
    page.open_table({"Service", "Display name", "Status", "Startup type", "Log on as"});
    for (const auto& row : rows) {
      const auto logon = row.record.logon.display();
      page.row(css_class(row.classification),
               {row.record.service_key, row.record.display_name, to_string(row.record.status),
                to_string(row.record.startup), logon});
    }
    page.close_table();
  }
  return std::move(page).finish();
}

std::string to_html(const AggregateReport& r) {
  HtmlPage page("Services Across the Network");
  page.open_table({"Service", "Display name", "Running", "Stopped", "Total"});
  for (const auto& row : r.rows) {
    const auto running = std::to_string(row.running);
    const auto stopped = std::to_string(row.stopped);
    const auto total = std::to_string(row.total);
    page.row(css_class(row.classification),
             {row.service_key, row.display_name, running, stopped, total});
  }
  page.close_table();
  return std::move(page).finish();
}

std::string to_html(const ApplicationReport& r) {
  HtmlPage page("Applications");
  page.open_table({"Application", "Description", "Executable", "Services"});
  for (const auto& row : r.rows) {
    const auto services = text::join(row.services, ", ");
    page.row("", {row.application, row.description, row.executable_path, services});
  }
  page.close_table();
  return std::move(page).finish();
}

// --- CSV --------------------------------------------------------------------

class CsvWriter {
 public:
  explicit CsvWriter(char delimiter) : delimiter_(delimiter) {
    if (delimiter == '\n' || delimiter == '\r' || delimiter == ';') {
      throw Error(ErrorCode::BadArgument, "unusable CSV delimiter");
    }
  }

  void line(std::initializer_list<std::string_view> fields) {
    bool first = true;
    for (auto f : fields) {
      if (!first) out_ += delimiter_;
      first = false;
      if (f.find(delimiter_) != std::string_view::npos ||
          f.find_first_of("\r\n") != std::string_view::npos) {
        throw Error(ErrorCode::DelimiterInField,
                    "report field '" + std::string(f) + "' contains the delimiter");
      }
      out_ += f;
    }
    out_ += '\n';
  }

  std::string finish() && { return std::move(out_); }

 private:
  char delimiter_;
  std::string out_;
};

// Multi-valued cells are joined with ';', which the writer never accepts as
// the field delimiter.
std::string to_csv(const SystemReport& r, char d) {
  CsvWriter w(d);
  w.line({"Host", "Service", "DisplayName", "Status", "StartupType", "LogOnAs",
          "Classification"});
  for (const auto& [host, rows] : r.hosts) {
    for (const auto& row : rows) {
      const auto logon = row.record.logon.display();
      w.line({host, row.record.service_key, row.record.display_name,
              to_string(row.record.status), to_string(row.record.startup), logon,
              to_string(row.classification)});
    }
  }
  return std::move(w).finish();
}

std::string to_csv(const TriageReport& r, char d) {
  CsvWriter w(d);
  w.line({"Service", "Classification", "Color", "Hosts"});
  auto block = [&](Classification c, const std::vector<TriageEntry>& entries) {
    for (const auto& e : entries) {
      const auto hosts = text::join(e.hosts, ";");
      w.line({e.service_key, to_string(c), to_string(color_of(c)), hosts});
    }
  };
  block(Classification::Hostile, r.hostile);
  block(Classification::Unknown, r.unknown);
  if (r.include_known) block(Classification::Known, r.known);
  return std::move(w).finish();
}

std::string to_csv(const AggregateReport& r, char d) {
  CsvWriter w(d);
  w.line({"Service", "DisplayName", "Running", "Stopped", "Total", "Classification"});
  for (const auto& row : r.rows) {
    const auto running = std::to_string(row.running);
    const auto stopped = std::to_string(row.stopped);
    const auto total = std::to_string(row.total);
    w.line({row.service_key, row.display_name, running, stopped, total,
            to_string(row.classification)});
  }
  return std::move(w).finish();
}

std::string to_csv(const ApplicationReport& r, char d) {
  CsvWriter w(d);
  w.line({"Application", "Description", "Path", "Services"});
  for (const auto& row : r.rows) {
    const auto services = text::join(row.services, ";");
    w.line({row.application, row.description, row.executable_path, services});
  }
  return std::move(w).finish();
}

// --- plain text -------------------------------------------------------------

// Left-aligned columns separated by two spaces; widths in bytes.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string str() const {
    std::vector<std::size_t> width(rows_.front().size(), 0);
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t i = 0; i < row.size(); ++i) {
        line += row[i];
        if (i + 1 < row.size()) line.append(width[i] - row[i].size() + 2, ' ');
      }
      out += line + '\n';
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string to_text(const SystemReport& r) {
  std::string out;
  for (const auto& [host, rows] : r.hosts) {
    out += host + "\n";
    TextTable t({"SERVICE", "STATUS", "STARTUP", "CLASS"});
    for (const auto& row : rows) {
      t.add({row.record.service_key, std::string(to_string(row.record.status)),
             std::string(to_string(row.record.startup)),
             std::string(to_string(color_of(row.classification)))});
    }
    out += t.str() + "\n";
  }
  return out;
}

std::string to_text(const TriageReport& r) {
  std::string out;
  auto block = [&](std::string_view title, const std::vector<TriageEntry>& entries) {
    out += std::string(title) + " (" + std::to_string(entries.size()) + ")\n";
    for (const auto& e : entries) {
      out += "  " + e.service_key + ": " +
             (e.hosts.empty() ? std::string("-") : text::join(e.hosts, ", ")) + "\n";
    }
  };
  block("HOSTILE [red]", r.hostile);
  block("UNKNOWN [yellow]", r.unknown);
  if (r.include_known) block("KNOWN [green]", r.known);
  return out;
}

std::string to_text(const AggregateReport& r) {
  TextTable t({"SERVICE", "RUNNING", "STOPPED", "TOTAL", "CLASS"});
  for (const auto& row : r.rows) {
    t.add({row.service_key, std::to_string(row.running), std::to_string(row.stopped),
           std::to_string(row.total), std::string(to_string(color_of(row.classification)))});
  }
  return t.str();
}

std::string to_text(const ApplicationReport& r) {
  std::string out;
  for (const auto& row : r.rows) {
    out += row.application + "\n";
    if (!row.description.empty()) out += "  " + row.description + "\n";
    if (!row.executable_path.empty()) out += "  path: " + row.executable_path + "\n";
    out += "  services: " + text::join(row.services, ", ") + "\n";
  }
  return out;
}

}  // namespace

std::string render(const AnyReport& report, Format format, const RenderOptions& options) {
  return std::visit(
      [&](const auto& r) -> std::string {
        switch (format) {
          case Format::Json: return codec::dump(to_json(r));
          case Format::Html: return to_html(r);
          case Format::Csv: return to_csv(r, options.delimiter);
          case Format::Text: return to_text(r);
        }
        throw Error(ErrorCode::UnsupportedFormat, "unknown format");
      },
      report);
}

}  // namespace svcinv::report
