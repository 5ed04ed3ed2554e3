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

#include "support.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mockboard/error.hpp"
#include "mockboard/password.hpp"

namespace mbtest {

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "mockboard-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

StoreOptions options_for(const std::filesystem::path& dir, bool sync) {
  StoreOptions o;
  o.data_dir = dir;
  o.sync = sync;
  return o;
}

Account admin_draft(const std::string& username, const std::string& password,
                    std::optional<CourseId> scope) {
  Account a;
  a.username = username;
  a.password_digest = crypto::hash_password(password, kFixtureRounds);
  a.role = Role::Admin;
  a.status = AccountStatus::Verified;
  a.scope_course_id = scope;
  return a;
}

Account examinee_draft(const std::string& username, const std::string& password,
                       const std::string& student_number, CourseId course, AccountStatus status,
                       std::optional<MajorId> major) {
  Account a;
  a.username = username;
  a.password_digest = crypto::hash_password(password, kFixtureRounds);
  a.role = Role::Examinee;
  a.status = status;
  ExamineeProfile p;
  p.student_number = student_number;
  p.last_name = "Dela Cruz";
  p.first_name = "Juan";
  p.middle_name = "Santos";
  p.address = "Calapan City";
  p.contact_number = "09171234567";
  p.birthdate = std::chrono::year{1998} / 1 / 2;
  p.course_id = course;
  p.major_id = major;
  p.terms_accepted = true;
  a.profile = p;
  return a;
}

Exam add_exam(Store& store, CourseId course, const ExamSpec& spec, Instant now) {
  Exam e;
  e.course_id = course;
  e.name = spec.name;
  e.exam_date = spec.exam_date;
  e.reexam_date = spec.reexam_date;
  e.duration_minutes = spec.duration_minutes;
  e.passing_rate = Percent::whole(spec.passing_rate);
  e.weight = Percent::whole(spec.weight);
  const Exam created = store.create_exam(e, now);
  std::vector<Question> qs;
  for (int i = 0; i < spec.questions; ++i) {
    Question q;
    q.exam_id = created.id;
    q.stem = spec.name + " question " + std::to_string(i + 1);
    for (std::size_t c = 0; c < spec.choices; ++c) {
      q.choices.push_back("choice " + std::to_string(c) + " of q" + std::to_string(i + 1));
    }
    q.correct_index = static_cast<std::size_t>(i * 3) % spec.choices;
    qs.push_back(std::move(q));
  }
  if (!qs.empty()) store.create_questions(created.id, std::move(qs));
  return *store.exam(created.id);
}

std::vector<std::size_t> answer_key(const Store& store, ExamId exam) {
  std::vector<std::size_t> key;
  for (const auto& q : store.questions(exam)) key.push_back(q.correct_index);
  return key;
}

namespace {

std::vector<char*> c_argv(const std::vector<std::string>& argv) {
  std::vector<char*> out;
  for (const auto& a : argv) out.push_back(const_cast<char*>(a.c_str()));
  out.push_back(nullptr);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int decode_status(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

}  // namespace

RunResult run(const std::vector<std::string>& argv) {
  TempDir tmp;
  const auto out_path = tmp / "stdout";
  const auto err_path = tmp / "stderr";
  const pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    const int out = open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    const int err = open(err_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    dup2(out, 1);
    dup2(err, 2);
    auto args = c_argv(argv);
    execv(args[0], args.data());
    _exit(127);
  }
  int status = 0;
  waitpid(pid, &status, 0);
  return {decode_status(status), slurp(out_path), slurp(err_path)};
}

Child::Child(const std::vector<std::string>& argv, const std::filesystem::path& err_file) {
  int fds[2];
  if (pipe(fds) != 0) throw std::runtime_error("pipe failed");
  pid_ = fork();
  if (pid_ < 0) throw std::runtime_error("fork failed");
  if (pid_ == 0) {
    close(fds[0]);
    dup2(fds[1], 1);
    const int err = open(err_file.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0600);
    dup2(err, 2);
    auto args = c_argv(argv);
    execv(args[0], args.data());
    _exit(127);
  }
  close(fds[1]);
  out_fd_ = fds[0];
}

Child::~Child() {
  if (!reaped_) {
    signal(SIGKILL);
    wait();
  }
  if (out_fd_ >= 0) close(out_fd_);
}

std::optional<std::string> Child::read_line(std::chrono::milliseconds timeout) {
  const auto until = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        until - std::chrono::steady_clock::now());
    if (left.count() <= 0) return std::nullopt;
    pollfd p{out_fd_, POLLIN, 0};
    if (poll(&p, 1, static_cast<int>(left.count())) <= 0) return std::nullopt;
    char buf[512];
    const ssize_t n = ::read(out_fd_, buf, sizeof buf);
    if (n <= 0) return std::nullopt;
    buffer_.append(buf, static_cast<std::size_t>(n));
  }
}

void Child::signal(int sig) {
  if (!reaped_) ::kill(pid_, sig);
}

int Child::wait() {
  if (!reaped_) {
    int status = 0;
    waitpid(pid_, &status, 0);
    status_ = decode_status(status);
    reaped_ = true;
  }
  return status_;
}

std::string opsctl_path() {
  const char* p = std::getenv("OPSCTL_PATH");
  if (!p) throw std::runtime_error("OPSCTL_PATH is not set");
  return p;
}

int start_server(Child& child) {
  const auto line = child.read_line(std::chrono::seconds{20});
  const std::string prefix = "listening on ";
  if (!line || line->rfind(prefix, 0) != 0) {
    throw std::runtime_error("server did not start: " + line.value_or("<no output>"));
  }
  return std::stoi(line->substr(line->rfind(':') + 1));
}

}  // namespace mbtest
