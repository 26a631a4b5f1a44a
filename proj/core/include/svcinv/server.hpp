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

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "svcinv/workspace.hpp"

namespace svcinv::server {

struct ApiConfig {
  std::string listen_address = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = "svcinv-data";
  char delimiter = '\t';
  /// Leave Known services out of triage unless ?include_known=true.
  bool suppress_green = true;
  /// Bearer token required on mutating requests when set.
  std::optional<std::string> auth_token;
  std::optional<std::size_t> retain_last;
};

/// Port range and data-directory writability. Throws BadArgument or
/// StoreOpenFailure.
void validate_config(const ApiConfig& config);

/// JSON API over one workspace. Endpoints:
///   GET  /hosts, /hosts/{host}/snapshot, /hosts/{host}/history,
///        /hosts/{host}/processes, /hosts/{host}/diff?from=&to=
///   POST /ingest/export?host=&lenient=&observed_at=, /ingest/tasklist?host=
///   GET  /services, /services/{key}/hosts
///   GET  /reports/{system,triage,aggregate,apps}[.html|.csv|.txt]
///   GET  /kb, POST /kb/classify, DELETE /kb/{key}
///   GET  /policy/violations
class ApiServer {
 public:
  /// `ws` must outlive the server. `config.port` may be 0 for an ephemeral
  /// port (tests); `serve` rejects that.
  ApiServer(Workspace& ws, ApiConfig config);
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;
  ~ApiServer();

  /// Returns the bound port. Throws BindFailure.
  int bind();
  /// Blocks until stop().
  void run();
  /// bind() if needed, then run() on a background thread; returns once the
  /// listener accepts connections.
  void start();
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Opens the workspace, serves until SIGINT/SIGTERM, returns an exit code.
int serve(const ApiConfig& config, std::ostream& log);

}  // namespace svcinv::server
