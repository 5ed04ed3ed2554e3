// Copyright 2026 The Mockboard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "mockboard/error.hpp"
#include "mockboard/service.hpp"

namespace mockboard {

/// Every route lives under this prefix.
inline constexpr std::string_view kApiPrefix = "/mockboard/api";

/// HTTP status used for an error code in the failure envelope.
int http_status(ErrorCode code) noexcept;

struct HttpServerOptions {
  std::string host = "0.0.0.0";
  /// 0 picks an ephemeral port; see HttpServer::port().
  int port = 8080;
  int threads = 64;
  /// Receives one line per request. Defaults to stderr.
  std::function<void(const std::string&)> log;
};

/// JSON-over-HTTP front end for ExamService.
///
/// Failures use one envelope:
///   {"error": {"code": "AWAITING_VERIFICATION", "message": "...", "fields": {...}}}
class HttpServer {
 public:
  HttpServer(ExamService& service, HttpServerOptions options);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the listening socket. Throws std::runtime_error when the address
  /// is unavailable.
  void bind();
  /// Bound port; valid after bind().
  int port() const;
  /// Serves until stop(). Binds first if needed.
  void run();
  /// Blocks until run() is accepting connections.
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mockboard
