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

#include <doctest.h>
#include <httplib.h>
#include <signal.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mockboard/ops/question_bank.hpp"
#include "mockboard/store.hpp"
#include "support.hpp"

using namespace mockboard;
using json = nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("opsctl init-admin refuses duplicates") {
  mbtest::TempDir dir;
  const std::string data = (dir / "data").string();
  const std::string ops = mbtest::opsctl_path();
  auto first = mbtest::run({ops, "init-admin", "--data-dir", data, "--username", "root", "--password", "rootpw1"});
  CHECK(first.exit_code == 0);
  CHECK(first.out.find("created admin root") != std::string::npos);
  auto again = mbtest::run({ops, "init-admin", "--data-dir", data, "--username", "root", "--password", "rootpw1"});
  CHECK(again.exit_code == 1);
  CHECK(again.err.find("DUPLICATE_KEY") != std::string::npos);
  auto bad_course = mbtest::run({ops, "init-admin", "--data-dir", data, "--username", "dean",
                                 "--password", "deanpw1", "--course", "Nope"});
  CHECK(bad_course.exit_code == 1);
}

TEST_CASE("opsctl seed-demo, import and export") {
  mbtest::TempDir dir;
  const std::string data = (dir / "data").string();
  const std::string ops = mbtest::opsctl_path();
  auto seeded = mbtest::run({ops, "seed-demo", "--data-dir", data});
  REQUIRE(seeded.exit_code == 0);
  std::vector<std::string> exams;
  {
    std::istringstream lines(seeded.out);
    for (std::string line; std::getline(lines, line);) {
      std::istringstream words(line);
      std::string label;
      words >> label;
      if (label != "exams") continue;
      for (std::string id; words >> id;) exams.push_back(id);
    }
  }
  REQUIRE(exams.size() == 5);
  auto rerun = mbtest::run({ops, "seed-demo", "--data-dir", data});
  CHECK(rerun.exit_code == 1);
  CHECK(rerun.err.find("NON_EMPTY_STORE") != std::string::npos);

  const auto out = dir / "bank.csv";
  auto exported = mbtest::run({ops, "export-questions", "--data-dir", data, "--exam", exams[0], "-o", out.string()});
  REQUIRE(exported.exit_code == 0);
  const std::string bank = read_file(out);
  CHECK(bank.rfind(std::string(ops::kQuestionBankHeader), 0) == 0);

  // Questions are frozen once attempts exist; the fifth exam has none.
  {
    std::ofstream bad(dir / "bad.csv");
    bad << ops::kQuestionBankHeader << "\nX,Stem,a,b,,,,F,\n";
  }
  auto rejected = mbtest::run({ops, "import-questions", "--data-dir", data, "--exam", exams[4], (dir / "bad.csv").string()});
  CHECK(rejected.exit_code == 1);
  CHECK(rejected.err.find("line 2") != std::string::npos);

  auto imported = mbtest::run({ops, "import-questions", "--data-dir", data, "--exam", exams[4], out.string()});
  CHECK(imported.exit_code == 0);
  CHECK(imported.out.find("imported 10 questions") != std::string::npos);
  auto frozen = mbtest::run({ops, "import-questions", "--data-dir", data, "--exam", exams[0], out.string()});
  CHECK(frozen.exit_code == 1);
  CHECK(frozen.err.find("EXAM_IN_USE") != std::string::npos);

  Store store(mbtest::options_for(data));
  CHECK(store.questions(ExamId{std::stoull(exams[4])}).size() == 20);
}

TEST_CASE("opsctl serve: port conflicts, locks and shutdown") {
  mbtest::TempDir dir;
  const std::string ops = mbtest::opsctl_path();
  mbtest::Child server({ops, "serve", "--data-dir", (dir / "a").string(), "--listen", "127.0.0.1:0"},
                       dir / "a.err");
  const int port = mbtest::start_server(server);

  httplib::Client c("127.0.0.1", port);
  auto health = c.Get("/mockboard/api/health");
  REQUIRE(health);
  CHECK(health->status == 200);

  auto taken = mbtest::run({ops, "serve", "--data-dir", (dir / "b").string(), "--listen",
                            "127.0.0.1:" + std::to_string(port)});
  CHECK(taken.exit_code == 1);
  auto locked = mbtest::run({ops, "serve", "--data-dir", (dir / "a").string(), "--listen", "127.0.0.1:0"});
  CHECK(locked.exit_code == 1);
  auto seed_locked = mbtest::run({ops, "seed-demo", "--data-dir", (dir / "a").string()});
  CHECK(seed_locked.exit_code == 1);

  server.signal(SIGTERM);
  CHECK(server.wait() == 0);
  CHECK(read_file(dir / "a.err").find("GET /mockboard/api/health 200") != std::string::npos);
}

TEST_CASE("opsctl simulate against a dead server is an operational failure") {
  auto r = mbtest::run({mbtest::opsctl_path(), "simulate", "--server", "http://127.0.0.1:1", "--exam", "1",
                        "--admin-password", "x", "--examinees", "2", "--timeout", "2"});
  CHECK(r.exit_code == 1);
  auto usage = mbtest::run({mbtest::opsctl_path(), "simulate"});
  CHECK(usage.exit_code != 0);
  CHECK(usage.exit_code != 2);
}
