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

#include "mockboard/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <json.hpp>

#include "mockboard/error.hpp"

namespace mockboard {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::ValidationFailed, "config " + key + ": " + why, {{key, why}});
}

long long to_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) bad(key, "not an integer: " + text);
  return v;
}

void set_threshold(ServerConfig& c, const std::string& text) {
  auto p = Percent::parse(text);
  if (!p || *p <= Percent{} || *p > Percent::whole(100)) bad("overall_threshold", "must be in (0, 100]");
  c.overall_threshold = *p;
}

void set_value(ServerConfig& c, const std::string& key, const std::string& text) {
  if (key == "listen") {
    apply_listen(c, text);
  } else if (key == "data_dir") {
    if (text.empty()) bad(key, "must not be empty");
    c.data_dir = text;
  } else if (key == "overall_threshold") {
    set_threshold(c, text);
  } else if (key == "grace_seconds") {
    auto v = to_integer(key, text);
    if (v < 0 || v > 3600) bad(key, "must be within 0..3600");
    c.grace = std::chrono::seconds{v};
  } else if (key == "utc_offset_minutes") {
    auto v = to_integer(key, text);
    if (v < -14 * 60 || v > 14 * 60) bad(key, "must be within -840..840");
    c.utc_offset = std::chrono::minutes{v};
  } else if (key == "threads") {
    auto v = to_integer(key, text);
    if (v < 1 || v > 4096) bad(key, "must be within 1..4096");
    c.threads = static_cast<int>(v);
  } else if (key == "token_ttl_hours") {
    auto v = to_integer(key, text);
    if (v < 1 || v > 24 * 30) bad(key, "must be within 1..720");
    c.token_ttl = std::chrono::hours{v};
  } else if (key == "snapshot_every") {
    auto v = to_integer(key, text);
    if (v < 0) bad(key, "must not be negative");
    c.snapshot_every = static_cast<std::size_t>(v);
  } else {
    bad(key, "unknown setting");
  }
}

constexpr const char* kKeys[] = {"listen",  "data_dir",        "overall_threshold",
                                 "grace_seconds", "utc_offset_minutes", "threads",
                                 "token_ttl_hours", "snapshot_every"};

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

void apply_listen(ServerConfig& config, const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos || colon == 0) bad("listen", "expected host:port");
  const auto port = to_integer("listen", listen.substr(colon + 1));
  if (port < 0 || port > 65535) bad("listen", "port out of range");
  config.host = listen.substr(0, colon);
  config.port = static_cast<int>(port);
}

LoadedConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
  LoadedConfig out;
  if (!file) {
    out.warnings.push_back("no config file given; using defaults");
  } else if (!std::filesystem::exists(*file)) {
    out.warnings.push_back("config file " + file->string() + " not found; using defaults");
  } else {
    std::ifstream in(*file);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ValidationFailed, "config file " + file->string() + ": " + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::ValidationFailed, "config file must hold an object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_string()) set_value(out.config, key, value.get<std::string>());
      else if (value.is_number()) set_value(out.config, key, value.dump());
      else bad(key, "expected a string or number");
    }
  }
  for (const char* key : kKeys) {
    std::string var = "MOCKBOARD_";
    for (const char* p = key; *p; ++p) var.push_back(static_cast<char>(std::toupper(*p)));
    if (auto v = env(var)) set_value(out.config, key, *v);
  }
  return out;
}

}  // namespace mockboard
