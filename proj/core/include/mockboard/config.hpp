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

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mockboard/types.hpp"

namespace mockboard {

/// Server settings. Precedence, lowest to highest: built-in defaults,
/// config file (JSON), MOCKBOARD_* environment variables, command-line
/// flags (applied by the caller).
///
///   key                  env                              default
///   listen               MOCKBOARD_LISTEN                 0.0.0.0:8080
///   data_dir             MOCKBOARD_DATA_DIR               ./data
///   overall_threshold    MOCKBOARD_OVERALL_THRESHOLD      75
///   grace_seconds        MOCKBOARD_GRACE_SECONDS          30
///   utc_offset_minutes   MOCKBOARD_UTC_OFFSET_MINUTES     0
///   threads              MOCKBOARD_THREADS                64
///   token_ttl_hours      MOCKBOARD_TOKEN_TTL_HOURS        8
///   snapshot_every       MOCKBOARD_SNAPSHOT_EVERY         5000
struct ServerConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::filesystem::path data_dir = "data";
  Percent overall_threshold = Percent::whole(75);
  std::chrono::seconds grace{30};
  std::chrono::minutes utc_offset{0};
  int threads = 64;
  std::chrono::hours token_ttl{8};
  std::size_t snapshot_every = 5000;

  std::string listen() const { return host + ":" + std::to_string(port); }
};

struct LoadedConfig {
  ServerConfig config;
  std::vector<std::string> warnings;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
std::optional<std::string> process_env(const std::string& name);

/// Missing file (or no path) means defaults plus a warning. Malformed
/// content or values throw Error{ValidationFailed}.
LoadedConfig load_config(const std::optional<std::filesystem::path>& file,
                         const EnvLookup& env = process_env);

/// "host:port". Throws Error{ValidationFailed}.
void apply_listen(ServerConfig& config, const std::string& listen);

}  // namespace mockboard
