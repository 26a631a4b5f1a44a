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

#include "svcinv/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "svcinv/api_json.hpp"
#include "svcinv/error.hpp"
#include "svcinv/fleet.hpp"
#include "svcinv/report.hpp"
#include "svcinv/server.hpp"
#include "svcinv/text.hpp"
#include "svcinv/workspace.hpp"

namespace svcinv::cli {

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::BadArgument, "cannot read " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<Timestamp> optional_time(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_timestamp(s);
}

std::string default_data_dir() {
  if (const char* env = std::getenv("SVCINV_DATA_DIR"); env && *env) return env;
  return "svcinv-data";
}

struct Options {
  std::string data_dir = default_data_dir();
  std::size_t retain_last = 0;

  std::string file;
  std::string host;
  std::string delimiter = "tab";
  bool lenient = false;
  std::string observed_at;

  std::string report_kind;
  std::string format = "json";
  bool include_known = false;

  std::string key;
  std::string verdict;
  std::string description;
  std::string application;
  std::string path;
  std::string recommended;
  std::string note;

  std::string from;
  std::string to;

  std::size_t hosts = 5;
  std::uint64_t seed = 0;
  std::size_t hostile = 0;
  std::size_t unknown = 0;
  std::size_t extra_known = 12;
  std::string out_dir;

  std::string listen = "127.0.0.1";
  int port = 8080;
  std::string token;
};

Workspace open_ws(const Options& o) {
  return Workspace::open(o.data_dir, o.retain_last > 0 ? std::optional(o.retain_last)
                                                       : std::nullopt);
}

}  // namespace

char parse_delimiter(const std::string& text) {
  if (text == "\t" || text == "\\t" || text::iequals(text, "tab")) return '\t';
  if (text.size() == 1 && text[0] != '\n' && text[0] != '\r') return text[0];
  throw Error(ErrorCode::BadArgument, "delimiter must be a single character or 'tab'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Fleet inventory and triage of Windows services", "svcinv"};
  app.require_subcommand(1);
  app.add_option("--data-dir", o.data_dir, "Store directory (env SVCINV_DATA_DIR)");
  app.add_option("--retain-last", o.retain_last, "Keep only the newest N snapshots per host");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Load an export file or a tasklist listing");
  ingest_cmd->require_subcommand(1);
  auto* ingest_export_cmd = ingest_cmd->add_subcommand("export", "Ingest a delimited service export");
  ingest_export_cmd->add_option("file", o.file, "Export file, or - for stdin")->required();
  ingest_export_cmd->add_option("--host", o.host, "Require every row to belong to this host");
  ingest_export_cmd->add_option("--delimiter", o.delimiter, "Field delimiter (default tab)");
  ingest_export_cmd->add_flag("--lenient", o.lenient, "Keep good rows, report bad ones");
  ingest_export_cmd->add_option("--observed-at", o.observed_at, "Collection time (default now)");
  auto* ingest_tasklist_cmd = ingest_cmd->add_subcommand("tasklist", "Attach a tasklist /svc listing");
  ingest_tasklist_cmd->add_option("file", o.file, "Listing file, or - for stdin")->required();
  ingest_tasklist_cmd->add_option("--host", o.host, "Host the listing was taken on")->required();

  // report
  auto* report_cmd = app.add_subcommand("report", "Print a fleet report");
  report_cmd->add_option("kind", o.report_kind, "system | triage | aggregate | apps")
      ->required()
      ->check(CLI::IsMember({"system", "triage", "aggregate", "apps"}));
  report_cmd->add_option("--format", o.format, "json | html | csv | text");
  report_cmd->add_flag("--include-known", o.include_known, "Show the green block in triage");
  report_cmd->add_option("--delimiter", o.delimiter, "CSV delimiter (default tab)");

  // kb
  auto* kb_cmd = app.add_subcommand("kb", "Maintain the knowledge base");
  kb_cmd->require_subcommand(1);
  auto* kb_seed = kb_cmd->add_subcommand("seed", "Add the default service guidance");
  auto* kb_add = kb_cmd->add_subcommand("add", "Classify a service as Hostile or Known");
  kb_add->add_option("service", o.key)->required();
  kb_add->add_option("--verdict", o.verdict, "Hostile | Known")->required();
  kb_add->add_option("--description", o.description);
  kb_add->add_option("--application", o.application);
  kb_add->add_option("--path", o.path, "Executable path");
  kb_add->add_option("--recommended", o.recommended, "Recommended startup type");
  kb_add->add_option("--note", o.note);
  auto* kb_remove = kb_cmd->add_subcommand("remove", "Forget a service (it becomes Unknown)");
  kb_remove->add_option("service", o.key)->required();
  auto* kb_list = kb_cmd->add_subcommand("list", "Print the KB as JSON");
  auto* kb_import = kb_cmd->add_subcommand("import", "Upsert entries from a KB file");
  kb_import->add_option("file", o.file)->required();
  kb_import->add_option("--delimiter", o.delimiter);
  auto* kb_export = kb_cmd->add_subcommand("export", "Print the KB as a delimited file");
  kb_export->add_option("--delimiter", o.delimiter);

  // diff
  auto* diff_cmd = app.add_subcommand("diff", "Drift between two snapshots of a host");
  diff_cmd->add_option("--host", o.host)->required();
  diff_cmd->add_option("--from", o.from, "Older bound (default: snapshot before --to)");
  diff_cmd->add_option("--to", o.to, "Newer bound (default: latest)");

  // read-only views matching the HTTP API
  auto* hosts_cmd = app.add_subcommand("hosts", "List hosts with a snapshot");
  auto* snapshot_cmd = app.add_subcommand("snapshot", "Print a host's latest snapshot");
  snapshot_cmd->add_option("--host", o.host)->required();
  auto* history_cmd = app.add_subcommand("history", "List a host's stored snapshots");
  history_cmd->add_option("--host", o.host)->required();
  auto* processes_cmd = app.add_subcommand("processes", "Service/process correlation for a host");
  processes_cmd->add_option("--host", o.host)->required();
  auto* services_cmd = app.add_subcommand("services", "List service keys, or hosts for one key");
  services_cmd->add_option("service", o.key, "Show Running/Stopped hosts for this key");
  auto* policy_cmd = app.add_subcommand("policy", "Startup-type policy violations");

  // gen-fleet
  auto* gen_cmd = app.add_subcommand("gen-fleet", "Generate a deterministic synthetic fleet");
  gen_cmd->add_option("--hosts", o.hosts)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", o.seed);
  gen_cmd->add_option("--hostile", o.hostile)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--unknown", o.unknown)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--extra-known", o.extra_known)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--observed-at", o.observed_at);
  gen_cmd->add_option("--out", o.out_dir, "Write per-host files and kb.tsv here");
  gen_cmd->add_option("--delimiter", o.delimiter);

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--listen", o.listen);
  serve_cmd->add_option("--port", o.port);
  serve_cmd->add_option("--token", o.token, "Bearer token for mutations")
      ->envname("SVCINV_TOKEN");
  serve_cmd->add_flag("--include-known", o.include_known, "Show green rows by default");
  serve_cmd->add_option("--delimiter", o.delimiter);

  // store
  auto* store_cmd = app.add_subcommand("store", "Backup and restore the snapshot log");
  store_cmd->require_subcommand(1);
  auto* store_export = store_cmd->add_subcommand("export", "Dump snapshots as JSON lines");
  auto* store_import = store_cmd->add_subcommand("import", "Load a snapshot dump");
  store_import->add_option("file", o.file)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name

  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "svcinv: " << e.what() << "\n";
    err << app.help();
    return kInputError;
  }

  try {
    const char delimiter = parse_delimiter(o.delimiter);

    if (*ingest_export_cmd) {
      auto ws = open_ws(o);
      ExportIngestOptions opts;
      opts.delimiter = delimiter;
      opts.lenient = o.lenient;
      if (!o.host.empty()) opts.host = o.host;
      opts.observed_at = optional_time(o.observed_at);
      const auto summary = svcinv::ingest_export(ws, read_input(o.file), opts);
      for (const auto& e : summary.errors) {
        err << "svcinv: skipped line " << e.line_no << ": " << e.message << "\n";
      }
      out << ingest_summary_json(summary);
      return kOk;
    }
    if (*ingest_tasklist_cmd) {
      auto ws = open_ws(o);
      const auto id = svcinv::ingest_tasklist(ws, o.host, read_input(o.file));
      IngestSummary summary;
      const auto snap = ws.inventory.latest(text::trim(o.host));
      IngestSummary::Stored stored;
      stored.host = std::string(text::trim(o.host));
      stored.id = id;
      stored.records = snap ? snap->records.size() : 0;
      summary.snapshots.push_back(std::move(stored));
      out << ingest_summary_json(summary);
      return kOk;
    }
    if (*report_cmd) {
      auto ws = open_ws(o);
      const auto format = report::parse_format(o.format);
      const auto fleet = ws.inventory.view();
      const auto kb = ws.kb.state();
      report::AnyReport r;
      if (o.report_kind == "system") {
        r = report::by_system(fleet, *kb);
      } else if (o.report_kind == "triage") {
        r = report::triage(fleet, *kb, o.include_known);
      } else if (o.report_kind == "aggregate") {
        r = report::network_aggregate(fleet, *kb);
      } else {
        r = report::application_view(*kb, fleet);
      }
      out << report::render(r, format, report::RenderOptions{delimiter});
      return kOk;
    }
    if (*kb_seed) {
      auto ws = open_ws(o);
      const auto added = ws.kb.seed();
      err << "svcinv: seeded " << added << " entries (" << ws.kb.size() << " total)\n";
      out << api::kb_json(*ws.kb.state());
      return kOk;
    }
    if (*kb_add) {
      auto ws = open_ws(o);
      KbEntry e;
      e.service_key = o.key;
      e.verdict = parse_verdict(o.verdict);
      e.description = o.description;
      e.application = o.application;
      e.executable_path = o.path;
      if (!o.recommended.empty()) e.recommended_startup = ingest::normalize_startup(o.recommended);
      e.note = o.note;
      const auto key = text::canonical_key(o.key);
      const auto previous = ws.kb.upsert(std::move(e));
      if (previous) err << "svcinv: replaced existing entry for " << key << "\n";
      out << api::kb_entry_json(ws.kb.state()->at(key));
      return kOk;
    }
    if (*kb_remove) {
      auto ws = open_ws(o);
      const auto removed = ws.kb.remove(o.key);
      if (!removed) {
        throw Error(ErrorCode::NotFound, "no KB entry for '" + o.key + "'");
      }
      out << api::kb_entry_json(*removed);
      return kOk;
    }
    if (*kb_list) {
      out << api::kb_json(*open_ws(o).kb.state());
      return kOk;
    }
    if (*kb_import) {
      auto ws = open_ws(o);
      const auto entries = parse_kb_file(read_input(o.file), delimiter);
      for (const auto& e : entries) ws.kb.upsert(e);
      err << "svcinv: imported " << entries.size() << " entries\n";
      out << api::kb_json(*ws.kb.state());
      return kOk;
    }
    if (*kb_export) {
      out << write_kb_file(*open_ws(o).kb.state(), delimiter);
      return kOk;
    }
    if (*diff_cmd) {
      const auto ws = open_ws(o);
      out << api::changeset_json(
          diff_host(ws, o.host, optional_time(o.from), optional_time(o.to)));
      return kOk;
    }
    if (*hosts_cmd) {
      out << api::string_list_json(open_ws(o).inventory.list_hosts());
      return kOk;
    }
    if (*snapshot_cmd || *processes_cmd) {
      const auto ws = open_ws(o);
      const auto snap = ws.inventory.latest(o.host);
      if (!snap) throw Error(ErrorCode::NotFound, "unknown host '" + o.host + "'");
      out << (*snapshot_cmd ? api::snapshot_json(*snap) : api::processes_json(*snap));
      return kOk;
    }
    if (*history_cmd) {
      const auto history = open_ws(o).inventory.history(o.host);
      if (history.empty()) throw Error(ErrorCode::NotFound, "unknown host '" + o.host + "'");
      out << api::history_json(o.host, history);
      return kOk;
    }
    if (*services_cmd) {
      const auto ws = open_ws(o);
      if (o.key.empty()) {
        out << api::string_list_json(ws.inventory.list_service_keys());
        return kOk;
      }
      const auto hosts = report::service_hosts(ws.inventory.view(), o.key);
      if (!hosts) throw Error(ErrorCode::NotFound, "service '" + o.key + "' is not observed");
      out << api::service_hosts_json(text::canonical_key(o.key), *hosts);
      return kOk;
    }
    if (*policy_cmd) {
      const auto ws = open_ws(o);
      out << api::violations_json(
          report::fleet_policy_violations(ws.inventory.view(), *ws.kb.state()));
      return kOk;
    }
    if (*gen_cmd) {
      fleet::FleetOptions fo;
      fo.hosts = o.hosts;
      fo.seed = o.seed;
      fo.hostile = o.hostile;
      fo.unknown = o.unknown;
      fo.extra_known = o.extra_known;
      if (const auto at = optional_time(o.observed_at)) fo.observed_at = *at;
      const auto generated = fleet::generate_fleet(fo);
      if (!o.out_dir.empty()) {
        fleet::write_fleet(generated, o.out_dir, delimiter);
        err << "svcinv: wrote " << generated.hosts.size() << " hosts and kb.tsv to "
            << o.out_dir << "\n";
      }
      out << generated.combined_export(delimiter);
      return kOk;
    }
    if (*serve_cmd) {
      server::ApiConfig cfg;
      cfg.listen_address = o.listen;
      cfg.port = o.port;
      cfg.data_dir = o.data_dir;
      cfg.delimiter = delimiter;
      cfg.suppress_green = !o.include_known;
      if (!o.token.empty()) cfg.auth_token = o.token;
      if (o.retain_last > 0) cfg.retain_last = o.retain_last;
      return server::serve(cfg, err);
    }
    if (*store_export) {
      open_ws(o).inventory.export_dump(out);
      return kOk;
    }
    if (*store_import) {
      auto ws = open_ws(o);
      std::istringstream in(read_input(o.file));
      const auto n = ws.inventory.import_dump(in);
      err << "svcinv: imported " << n << " snapshots\n";
      return kOk;
    }
    err << app.help();
    return kInputError;
  } catch (const Error& e) {
    err << "svcinv: " << e.what() << "\n";
    return is_input_error(e.code()) ? kInputError : kInternalError;
  } catch (const std::exception& e) {
    err << "svcinv: internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace svcinv::cli
