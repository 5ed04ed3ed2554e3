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

#include "mockboard/ops/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <CLI11.hpp>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "mockboard/config.hpp"
#include "mockboard/error.hpp"
#include "mockboard/http_server.hpp"
#include "mockboard/ops/question_bank.hpp"
#include "mockboard/ops/seed_demo.hpp"
#include "mockboard/ops/simulate.hpp"
#include "mockboard/password.hpp"
#include "mockboard/service.hpp"
#include "mockboard/store.hpp"

namespace mockboard::ops {

namespace {

struct CommonFlags {
  std::string config;
  std::string data_dir;
  std::string listen;
};

// Without an explicit --config only `serve` mentions that defaults apply.
ServerConfig resolve(const CommonFlags& f, bool serving = false) {
  std::optional<std::filesystem::path> file;
  if (!f.config.empty()) file = f.config;
  LoadedConfig loaded = load_config(file);
  if (serving || file) {
    for (const auto& w : loaded.warnings) std::cerr << "opsctl: warning: " << w << '\n';
  }
  if (!f.data_dir.empty()) loaded.config.data_dir = f.data_dir;
  if (!f.listen.empty()) apply_listen(loaded.config, f.listen);
  return loaded.config;
}

StoreOptions store_options(const ServerConfig& c) {
  StoreOptions o;
  o.data_dir = c.data_dir;
  o.grace = c.grace;
  o.utc_offset = c.utc_offset;
  o.snapshot_every = c.snapshot_every;
  return o;
}

void print_error(const Error& e) {
  std::cerr << "opsctl: " << code_name(e.code()) << ": " << e.what() << '\n';
  for (const auto& [field, message] : e.fields()) {
    std::cerr << "  " << field << ": " << message << '\n';
  }
}

int serve(const CommonFlags& flags) {
  const ServerConfig config = resolve(flags, true);
  std::error_code ec;
  std::filesystem::create_directories(config.data_dir, ec);
  if (ec) {
    std::cerr << "opsctl: cannot create data directory " << config.data_dir << ": "
              << ec.message() << '\n';
    return kExitOperational;
  }

  // Signals are taken synchronously by a dedicated thread; block them
  // before any other thread exists so every thread inherits the mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  std::unique_ptr<Store> store;
  try {
    store = std::make_unique<Store>(store_options(config));
  } catch (const Error& e) {
    print_error(e);
    return kExitOperational;
  }
  SystemClock clock;
  ServiceOptions so;
  so.overall_threshold = config.overall_threshold;
  so.token_ttl = config.token_ttl;
  ExamService service(*store, clock, so);

  HttpServerOptions ho;
  ho.host = config.host;
  ho.port = config.port;
  ho.threads = config.threads;
  HttpServer server(service, ho);
  try {
    server.bind();
  } catch (const std::exception& e) {
    std::cerr << "opsctl: " << e.what() << '\n';
    return kExitOperational;
  }
  std::cout << "listening on " << config.host << ":" << server.port() << std::endl;

  std::atomic<bool> done{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    if (!done) {
      std::cerr << "opsctl: shutting down\n";
      server.stop();
    }
  });
  server.run();
  done = true;
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kExitOk;
}

int init_admin(const CommonFlags& flags, const std::string& username, const std::string& password,
               const std::string& course) {
  const ServerConfig config = resolve(flags);
  if (password.size() < kMinPasswordLength) {
    std::cerr << "opsctl: password must have at least " << kMinPasswordLength << " characters\n";
    return kExitOperational;
  }
  std::filesystem::create_directories(config.data_dir);
  Store store(store_options(config));
  Account a;
  a.username = username;
  a.password_digest = crypto::hash_password(password);
  a.role = Role::Admin;
  a.status = AccountStatus::Verified;
  if (!course.empty()) {
    for (const auto& c : store.courses()) {
      if (c.name == course || std::to_string(c.id.value) == course) a.scope_course_id = c.id;
    }
    if (!a.scope_course_id) throw Error(ErrorCode::UnknownCourse, "no course " + course);
  }
  const Account created = store.create_account(std::move(a), SystemClock{}.now());
  std::cout << "created admin " << created.username << " (id " << created.id.value << ")";
  if (created.scope_course_id) std::cout << " scoped to course " << created.scope_course_id->value;
  std::cout << '\n';
  return kExitOk;
}

int import_bank(const CommonFlags& flags, std::uint64_t exam, const std::string& file) {
  const ServerConfig config = resolve(flags);
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    std::cerr << "opsctl: cannot read " << file << '\n';
    return kExitOperational;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  Store store(store_options(config));
  const auto n = import_questions(store, ExamId{exam}, buffer.str());
  std::cout << "imported " << n << " questions into exam " << exam << '\n';
  return kExitOk;
}

int export_bank(const CommonFlags& flags, std::uint64_t exam, const std::string& output) {
  const ServerConfig config = resolve(flags);
  Store store(store_options(config));
  const std::string csv = export_questions(store, ExamId{exam});
  if (output.empty() || output == "-") {
    std::cout << csv;
  } else {
    std::ofstream out(output, std::ios::binary);
    out << csv;
    if (!out) {
      std::cerr << "opsctl: cannot write " << output << '\n';
      return kExitOperational;
    }
  }
  return kExitOk;
}

int seed(const CommonFlags& flags, const DemoOptions& demo) {
  const ServerConfig config = resolve(flags);
  std::filesystem::create_directories(config.data_dir);
  Store store(store_options(config));
  const DemoSummary s = seed_demo(store, demo);
  std::cout << "seeded demo data in " << config.data_dir.string() << '\n'
            << "  admin     " << demo.admin_username << " / " << demo.admin_password << '\n'
            << "  examinee  " << demo.examinee_username << " / " << demo.examinee_password << '\n'
            << "  course    " << s.course.value << '\n'
            << "  exams    ";
  for (auto id : s.exams) std::cout << ' ' << id.value;
  std::cout << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Mock board examination operator tool"};
  app.require_subcommand(1);
  CommonFlags flags;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config, "JSON config file");
    cmd->add_option("--data-dir", flags.data_dir, "Data directory (overrides config)");
  };

  auto* serve_cmd = app.add_subcommand("serve", "Run the exam server");
  add_common(serve_cmd);
  serve_cmd->add_option("--listen", flags.listen, "host:port (overrides config)");

  std::string username, password, course;
  auto* admin_cmd = app.add_subcommand("init-admin", "Create a verified administrator");
  add_common(admin_cmd);
  admin_cmd->add_option("--username", username)->required();
  admin_cmd->add_option("--password", password)->required();
  admin_cmd->add_option("--course", course, "Restrict to one course (id or name)");

  std::uint64_t exam = 0;
  std::string file, output;
  auto* import_cmd = app.add_subcommand("import-questions", "Append a question bank CSV to an exam");
  add_common(import_cmd);
  import_cmd->add_option("--exam", exam)->required();
  import_cmd->add_option("file", file, "CSV file")->required();

  auto* export_cmd = app.add_subcommand("export-questions", "Write an exam's questions as CSV");
  add_common(export_cmd);
  export_cmd->add_option("--exam", exam)->required();
  export_cmd->add_option("--output,-o", output, "Output file (default stdout)");

  DemoOptions demo;
  auto* seed_cmd = app.add_subcommand("seed-demo", "Populate an empty data directory");
  add_common(seed_cmd);
  seed_cmd->add_option("--admin-password", demo.admin_password);
  seed_cmd->add_option("--examinee-password", demo.examinee_password);

  SimulateOptions sim;
  bool as_json = false;
  int timeout_s = 60;
  int correct = -1;
  auto* sim_cmd = app.add_subcommand("simulate", "Drive concurrent virtual examinees");
  sim_cmd->add_option("--server", sim.server, "Base URL")->capture_default_str();
  sim_cmd->add_option("--examinees", sim.examinees)->capture_default_str()->check(CLI::Range(1, 10000));
  sim_cmd->add_option("--exam", sim.exam_id)->required();
  sim_cmd->add_option("--admin-user", sim.admin_username)->capture_default_str();
  sim_cmd->add_option("--admin-password", sim.admin_password)->required();
  sim_cmd->add_option("--correct", correct, "Correct answers per examinee (default random)");
  sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
  sim_cmd->add_option("--timeout", timeout_s, "Per-request timeout in seconds")->capture_default_str();
  sim_cmd->add_flag("--json", as_json, "Machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitOperational;
  }

  try {
    if (*serve_cmd) return serve(flags);
    if (*admin_cmd) return init_admin(flags, username, password, course);
    if (*import_cmd) return import_bank(flags, exam, file);
    if (*export_cmd) return export_bank(flags, exam, output);
    if (*seed_cmd) return seed(flags, demo);
    if (*sim_cmd) {
      if (correct >= 0) sim.correct = correct;
      sim.timeout = std::chrono::seconds{timeout_s};
      const SimulateReport report = simulate(sim);
      std::cout << (as_json ? report.to_json() + "\n" : report.to_text());
      return report.exit_code();
    }
  } catch (const Error& e) {
    print_error(e);
    return kExitOperational;
  } catch (const std::exception& e) {
    std::cerr << "opsctl: " << e.what() << '\n';
    return kExitOperational;
  }
  return kExitOperational;
}

}  // namespace mockboard::ops
