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

#include "svcinv/server.hpp"

#include <httplib.h>
#include <signal.h>

#include <fstream>
#include <ostream>
#include <thread>

#include "svcinv/api_json.hpp"
#include "svcinv/error.hpp"
#include "svcinv/report.hpp"
#include "svcinv/text.hpp"

namespace svcinv::server {

namespace {

constexpr const char* kJson = "application/json";

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::InvariantViolation:
    case ErrorCode::DuplicateService:
    case ErrorCode::ConflictingHost:
    case ErrorCode::HostMismatch: return 422;
    case ErrorCode::StorageFailure:
    case ErrorCode::StoreOpenFailure:
    case ErrorCode::BindFailure: return 500;
    default: return 400;
  }
}

bool tokens_equal(std::string_view a, std::string_view b) {
  unsigned char diff = a.size() == b.size() ? 0 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff |= static_cast<unsigned char>(a[i] ^ (i < b.size() ? b[i] : 0));
  }
  return diff == 0;
}

bool flag_param(const httplib::Request& req, const char* name, bool fallback) {
  if (!req.has_param(name)) return fallback;
  const auto v = req.get_param_value(name);
  if (v.empty() || text::iequals(v, "true") || v == "1" || text::iequals(v, "yes")) return true;
  if (text::iequals(v, "false") || v == "0" || text::iequals(v, "no")) return false;
  throw Error(ErrorCode::BadArgument, std::string(name) + " must be a boolean");
}

std::optional<Timestamp> time_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return parse_timestamp(req.get_param_value(name));
}

}  // namespace

void validate_config(const ApiConfig& config) {
  if (config.port < 1 || config.port > 65535) {
    throw Error(ErrorCode::BadArgument,
                "port must be in [1, 65535], got " + std::to_string(config.port));
  }
  if (config.delimiter == '\n' || config.delimiter == '\r') {
    throw Error(ErrorCode::BadArgument, "line terminators cannot be delimiters");
  }
  std::error_code ec;
  std::filesystem::create_directories(config.data_dir, ec);
  const auto probe = config.data_dir / ".write-probe";
  {
    std::ofstream out(probe);
    if (ec || !out) {
      throw Error(ErrorCode::StoreOpenFailure,
                  "data directory " + config.data_dir.string() + " is not writable");
    }
  }
  std::filesystem::remove(probe, ec);
}

struct ApiServer::Impl {
  Workspace& ws;
  ApiConfig config;
  httplib::Server http;
  std::thread worker;
  int bound_port = -1;

  Impl(Workspace& w, ApiConfig c) : ws(w), config(std::move(c)) { routes(); }

  // Runs `fn`, mapping svcinv errors onto status codes with a JSON body.
  template <class Fn>
  auto guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        res.status = http_status(e.code());
        res.set_content(api::error_json(e), kJson);
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(api::error_json(ErrorCode::StorageFailure, e.what()), kJson);
      }
    };
  }

  static void json(httplib::Response& res, std::string body, int status = 200) {
    res.status = status;
    res.set_content(std::move(body), kJson);
  }

  [[noreturn]] static void not_found(const std::string& what) {
    throw Error(ErrorCode::NotFound, what);
  }

  HostSnapshot latest_or_404(const std::string& host) const {
    auto snap = ws.inventory.latest(host);
    if (!snap) not_found("unknown host '" + host + "'");
    return std::move(*snap);
  }

  report::AnyReport build_report(const std::string& kind, const httplib::Request& req) const {
    const auto fleet = ws.inventory.view();
    const auto kb = ws.kb.state();
    if (kind == "system") return report::by_system(fleet, *kb);
    if (kind == "triage") {
      return report::triage(fleet, *kb, flag_param(req, "include_known", !config.suppress_green));
    }
    if (kind == "aggregate") return report::network_aggregate(fleet, *kb);
    return report::application_view(*kb, fleet);
  }

  void routes() {
    http.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    http.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Authorization, Content-Type");
      res.status = 204;
    });

    http.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      const bool mutating = req.method == "POST" || req.method == "DELETE" || req.method == "PUT";
      if (!mutating || !config.auth_token) return httplib::Server::HandlerResponse::Unhandled;
      const auto header = req.get_header_value("Authorization");
      constexpr std::string_view kBearer = "Bearer ";
      if (header.starts_with(kBearer) &&
          tokens_equal(std::string_view(header).substr(kBearer.size()), *config.auth_token)) {
        return httplib::Server::HandlerResponse::Unhandled;
      }
      res.status = 401;
      res.set_header("WWW-Authenticate", "Bearer");
      res.set_content(api::error_json(ErrorCode::BadArgument, "missing or invalid bearer token"),
                      kJson);
      return httplib::Server::HandlerResponse::Handled;
    });

    http.Get("/hosts", guarded([this](const httplib::Request&, httplib::Response& res) {
      json(res, api::string_list_json(ws.inventory.list_hosts()));
    }));

    http.Get(R"(/hosts/([^/]+)/snapshot)",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               const std::string host = req.matches[1];
               if (const auto at = time_param(req, "at")) {
                 auto snap = ws.inventory.snapshot_at(host, *at);
                 if (!snap) not_found("no snapshot of '" + host + "' at that time");
                 json(res, api::snapshot_json(*snap));
                 return;
               }
               json(res, api::snapshot_json(latest_or_404(host)));
             }));

    http.Get(R"(/hosts/([^/]+)/history)",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               const std::string host = req.matches[1];
               auto history = ws.inventory.history(host);
               if (history.empty()) not_found("unknown host '" + host + "'");
               json(res, api::history_json(host, history));
             }));

    http.Get(R"(/hosts/([^/]+)/processes)",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               json(res, api::processes_json(latest_or_404(req.matches[1])));
             }));

    http.Get(R"(/hosts/([^/]+)/diff)",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               const auto changes = diff_host(ws, std::string(req.matches[1]),
                                              time_param(req, "from"), time_param(req, "to"));
               json(res, api::changeset_json(changes));
             }));

    http.Post("/ingest/export", guarded([this](const httplib::Request& req,
                                               httplib::Response& res) {
      ExportIngestOptions opts;
      opts.delimiter = config.delimiter;
      opts.lenient = flag_param(req, "lenient", false);
      if (req.has_param("host")) opts.host = req.get_param_value("host");
      opts.observed_at = time_param(req, "observed_at");
      json(res, ingest_summary_json(ingest_export(ws, req.body, opts)), 201);
    }));

    http.Post("/ingest/tasklist", guarded([this](const httplib::Request& req,
                                                 httplib::Response& res) {
      if (!req.has_param("host")) {
        throw Error(ErrorCode::BadArgument, "host query parameter is required");
      }
      const auto host = req.get_param_value("host");
      const auto id = ingest_tasklist(ws, host, req.body);
      IngestSummary summary;
      const auto snap = ws.inventory.latest(host);
      summary.snapshots.push_back({host, id, snap ? snap->records.size() : 0});
      json(res, ingest_summary_json(summary), 201);
    }));

    http.Get("/services", guarded([this](const httplib::Request&, httplib::Response& res) {
      json(res, api::string_list_json(ws.inventory.list_service_keys()));
    }));

    http.Get(R"(/services/([^/]+)/hosts)",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               const std::string key = req.matches[1];
               const auto hosts = report::service_hosts(ws.inventory.view(), key);
               if (!hosts) not_found("service '" + key + "' is not observed on any host");
               json(res, api::service_hosts_json(text::canonical_key(key), *hosts));
             }));

    http.Get(R"(/reports/(system|triage|aggregate|apps)(?:\.(json|html|csv|txt))?)",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               const std::string kind = req.matches[1];
               const std::string ext = req.matches[2];
               const auto format = ext.empty() ? report::Format::Json
                                   : ext == "txt" ? report::Format::Text
                                                  : report::parse_format(ext);
               auto body = report::render(build_report(kind, req), format,
                                          report::RenderOptions{config.delimiter});
               const char* type = format == report::Format::Json   ? kJson
                                  : format == report::Format::Html ? "text/html; charset=utf-8"
                                  : format == report::Format::Csv  ? "text/csv; charset=utf-8"
                                                                   : "text/plain; charset=utf-8";
               res.set_content(std::move(body), type);
             }));

    http.Get("/kb", guarded([this](const httplib::Request&, httplib::Response& res) {
      json(res, api::kb_json(*ws.kb.state()));
    }));

    http.Post("/kb/classify", guarded([this](const httplib::Request& req,
                                             httplib::Response& res) {
      auto entry = api::parse_kb_entry(req.body);
      const auto key = text::canonical_key(entry.service_key);
      const auto previous = ws.kb.upsert(std::move(entry));
      const auto state = ws.kb.state();
      const auto stored = state->find(key);
      if (stored == state->end()) not_found("entry '" + key + "' was removed concurrently");
      json(res, api::kb_entry_json(stored->second), previous ? 200 : 201);
    }));

    http.Delete(R"(/kb/([^/]+))", guarded([this](const httplib::Request& req,
                                                  httplib::Response& res) {
      const std::string key = req.matches[1];
      const auto removed = ws.kb.remove(key);
      if (!removed) not_found("no KB entry for '" + key + "'");
      json(res, api::kb_entry_json(*removed));
    }));

    http.Get("/policy/violations", guarded([this](const httplib::Request&,
                                                  httplib::Response& res) {
      json(res, api::violations_json(
                    report::fleet_policy_violations(ws.inventory.view(), *ws.kb.state())));
    }));

    http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        res.set_content(
            api::error_json(res.status == 404 ? ErrorCode::NotFound : ErrorCode::BadArgument,
                            "no such endpoint"),
            kJson);
      }
    });
  }
};

ApiServer::ApiServer(Workspace& ws, ApiConfig config)
    : impl_(std::make_unique<Impl>(ws, std::move(config))) {}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind() {
  if (impl_->bound_port > 0) return impl_->bound_port;
  const auto& cfg = impl_->config;
  // The library default adds SO_REUSEPORT, which lets a second server share
  // a port that is already in use.
  impl_->http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
  });
  const int port = cfg.port == 0 ? impl_->http.bind_to_any_port(cfg.listen_address)
                   : impl_->http.bind_to_port(cfg.listen_address, cfg.port) ? cfg.port
                                                                             : -1;
  if (port <= 0) {
    throw Error(ErrorCode::BindFailure,
                "cannot bind " + cfg.listen_address + ":" + std::to_string(cfg.port));
  }
  impl_->bound_port = port;
  return port;
}

void ApiServer::run() {
  bind();
  impl_->http.listen_after_bind();
}

void ApiServer::start() {
  bind();
  impl_->worker = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
}

void ApiServer::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

int ApiServer::port() const { return impl_->bound_port; }

int serve(const ApiConfig& config, std::ostream& log) {
  validate_config(config);
  auto ws = Workspace::open(config.data_dir, config.retain_last);

  // Block the shutdown signals everywhere; a dedicated sigwait() turns them
  // into a normal stop() call.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ApiServer server(ws, config);
  const int port = server.bind();
  log << "svcinv: listening on " << config.listen_address << ":" << port << " (data "
      << config.data_dir.string() << ")" << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.run();
  // run() returned on its own (listener failure): release the waiter.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  log << "svcinv: shut down" << std::endl;
  return 0;
}

}  // namespace svcinv::server
