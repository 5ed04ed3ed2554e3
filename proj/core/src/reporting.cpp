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

#include "mockboard/reporting.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "mockboard/csv.hpp"
#include "mockboard/error.hpp"

namespace mockboard::reporting {

std::string score_text(Points weighted, Percent weight) {
  return weighted.str() + " of " + weight.compact() + "%";
}

namespace {

// Latest finalized attempt of each examinee, keyed by examinee.
std::map<AccountId, Attempt> latest_finalized(const std::vector<Attempt>& attempts) {
  std::map<AccountId, Attempt> latest;
  for (const auto& a : attempts) {
    if (!a.finalized()) continue;
    auto it = latest.find(a.examinee_id);
    if (it == latest.end() || it->second.attempt_no < a.attempt_no) latest[a.examinee_id] = a;
  }
  return latest;
}

std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

int to_int(const csv::ParsedRow& row, std::size_t col) {
  const std::string& s = row.fields[col];
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::SchemaError,
                "line " + std::to_string(row.line) + ": expected an integer, got '" + s + "'",
                {{"line", std::to_string(row.line)}});
  }
  return v;
}

Points to_points(const csv::ParsedRow& row, std::size_t col) {
  auto p = Percent::parse(row.fields[col]);
  if (!p || p->hundredths() % 10 != 0) {
    throw Error(ErrorCode::SchemaError,
                "line " + std::to_string(row.line) + ": bad score '" + row.fields[col] + "'",
                {{"line", std::to_string(row.line)}});
  }
  return Points{p->hundredths() / 10};
}

}  // namespace

// ---- certificate ----------------------------------------------------------

Certificate build_certificate(const Store& store, AccountId examinee, Percent threshold,
                              Instant issued_at) {
  auto account = store.account(examinee);
  if (!account || account->role != Role::Examinee || !account->profile) {
    throw Error(ErrorCode::UnknownExaminee, "no such examinee");
  }
  if (account->status != AccountStatus::Verified) {
    throw Error(ErrorCode::NotVerified, "examinee is not verified");
  }
  const ExamineeProfile& profile = *account->profile;

  Certificate cert;
  cert.examinee_id = examinee;
  cert.examinee_name = profile.display_name();
  cert.student_number = profile.student_number;
  cert.threshold = threshold;
  cert.issued_at = issued_at;
  if (auto course = store.course(profile.course_id)) {
    cert.course_name = course->name;
    if (profile.major_id) {
      for (const auto& m : course->majors) {
        if (m.id == *profile.major_id) cert.major_name = m.name;
      }
    }
  }

  std::map<ExamId, Attempt> latest;
  for (const auto& a : store.attempts_for_examinee(examinee)) {
    if (!a.finalized()) continue;
    auto it = latest.find(a.exam_id);
    if (it == latest.end() || it->second.attempt_no < a.attempt_no) latest[a.exam_id] = a;
  }

  std::vector<core::SubjectResult> parts;
  for (const auto& [exam_id, a] : latest) {  // ExamId order == authoring order
    auto exam = store.exam(exam_id);
    if (!exam) continue;
    CertificateRow row;
    row.exam_id = exam_id;
    row.exam_name = exam->name;
    row.attempt_no = a.attempt_no;
    row.finalized_at = *a.submitted_at;
    row.raw = a.raw_score;
    row.total = a.total_questions;
    row.weighted = a.weighted_score;
    row.weight = exam->weight;
    row.passing_rate = exam->passing_rate;
    row.outcome = a.outcome;
    cert.rows.push_back(row);
    parts.push_back({a.raw_score, a.total_questions, exam->weight, exam->passing_rate});
  }
  const auto overall = core::overall_rating(parts, threshold);
  cert.overall_rating = overall.rating;
  cert.overall_outcome = overall.outcome;
  return cert;
}

std::string render_certificate_html(const Certificate& cert) {
  std::string h;
  h += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  h += "<title>Examination Progress - " + html_escape(cert.examinee_name) + "</title>\n";
  h += "<style>\n"
       "body{font-family:Georgia,serif;margin:2.5cm;color:#111}\n"
       "h1{text-align:center;letter-spacing:.08em;font-size:1.4em}\n"
       "table{width:100%;border-collapse:collapse;margin-top:1em}\n"
       "th,td{border:1px solid #444;padding:.4em .6em;text-align:left}\n"
       "td.num{text-align:right}\n"
       ".meta{margin:.2em 0}.overall{margin-top:1.2em;font-weight:bold}\n"
       "@media print{body{margin:1.5cm}}\n"
       "</style>\n</head>\n<body>\n";
  h += "<h1>EXAMINATION PROGRESS</h1>\n";
  h += "<p class=\"meta\">Examinee: " + html_escape(cert.examinee_name) + "</p>\n";
  h += "<p class=\"meta\">Student number: " + html_escape(cert.student_number) + "</p>\n";
  h += "<p class=\"meta\">Course: " + html_escape(cert.course_name) + "</p>\n";
  h += "<p class=\"meta\">Major: " + html_escape(cert.major_name.value_or("N/A")) + "</p>\n";
  h += "<table>\n<thead><tr><th>#</th><th>Exam</th><th>Date taken</th><th>Score</th>"
       "<th>Status</th></tr></thead>\n<tbody>\n";
  std::size_t n = 0;
  for (const auto& row : cert.rows) {
    h += "<tr><td>" + std::to_string(++n) + "</td><td>" + html_escape(row.exam_name) +
         "</td><td>" + format_instant(row.finalized_at) + "</td><td class=\"num\">" +
         html_escape(row.score()) + "</td><td>" + std::string(to_string(row.outcome)) +
         "</td></tr>\n";
  }
  h += "</tbody>\n</table>\n";
  h += "<p class=\"overall\">Overall rating: " + cert.overall_rating.str() + " (passing " +
       cert.threshold.compact() + ") - " + std::string(to_string(cert.overall_outcome)) + "</p>\n";
  h += "<p class=\"meta\">Issued " + format_instant(cert.issued_at) + "</p>\n";
  h += "</body>\n</html>\n";
  return h;
}

// ---- grade report ---------------------------------------------------------

GradeReport grade_report(const Store& store, ExamId exam_id) {
  auto exam = store.exam(exam_id);
  if (!exam) throw Error(ErrorCode::UnknownExam, "no such exam");
  GradeReport report;
  report.exam_id = exam_id;
  report.exam_name = exam->name;
  auto attempts = store.attempts_for_exam(exam_id);
  std::sort(attempts.begin(), attempts.end(),
            [](const Attempt& a, const Attempt& b) { return a.id < b.id; });
  for (const auto& a : attempts) {
    if (!a.finalized()) continue;
    GradeRow row;
    row.examinee_id = a.examinee_id;
    if (auto acc = store.account(a.examinee_id); acc && acc->profile) {
      row.examinee_name = acc->profile->display_name();
      row.student_number = acc->profile->student_number;
    }
    row.attempt_no = a.attempt_no;
    row.raw = a.raw_score;
    row.total = a.total_questions;
    row.weighted = a.weighted_score;
    row.weight = exam->weight;
    row.outcome = a.outcome;
    row.started_at = a.started_at;
    row.submitted_at = *a.submitted_at;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string grade_report_csv(const GradeReport& report) {
  csv::Writer w;
  std::string header(kGradeReportHeader);
  csv::Row cols;
  for (std::size_t start = 0;;) {
    const auto comma = header.find(',', start);
    cols.push_back(header.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  w.row(cols);
  for (const auto& r : report.rows) {
    w.row({std::to_string(r.examinee_id.value), r.examinee_name, r.student_number,
           std::to_string(r.attempt_no), std::to_string(r.raw), std::to_string(r.total),
           r.weighted.str(), r.weight.compact(), std::string(to_string(r.outcome)),
           format_instant(r.started_at), format_instant(r.submitted_at)});
  }
  return w.take();
}

std::vector<GradeRow> parse_grade_report_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw Error(ErrorCode::SchemaError, "missing header row");
  {
    csv::Writer header;
    header.row(rows.front().fields);
    if (header.str() != std::string(kGradeReportHeader) + "\r\n") {
      throw Error(ErrorCode::SchemaError, "unexpected grade report header");
    }
  }
  std::vector<GradeRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string at = "line " + std::to_string(row.line);
    if (row.fields.size() != 11) {
      throw Error(ErrorCode::SchemaError, at + ": expected 11 fields",
                  {{"line", std::to_string(row.line)}});
    }
    GradeRow g;
    g.examinee_id = AccountId{static_cast<std::uint64_t>(to_int(row, 0))};
    g.examinee_name = row.fields[1];
    g.student_number = row.fields[2];
    g.attempt_no = to_int(row, 3);
    g.raw = to_int(row, 4);
    g.total = to_int(row, 5);
    g.weighted = to_points(row, 6);
    auto weight = Percent::parse(row.fields[7]);
    auto outcome = parse_outcome(row.fields[8]);
    auto started = parse_instant(row.fields[9]);
    auto submitted = parse_instant(row.fields[10]);
    if (!weight || !outcome || !started || !submitted) {
      throw Error(ErrorCode::SchemaError, at + ": malformed field",
                  {{"line", std::to_string(row.line)}});
    }
    g.weight = *weight;
    g.outcome = *outcome;
    g.started_at = *started;
    g.submitted_at = *submitted;
    out.push_back(std::move(g));
  }
  return out;
}

// ---- item analysis --------------------------------------------------------

ItemStats compute_item_stats(const Question& question, std::span<const CohortMember> cohort) {
  ItemStats stats;
  stats.question_id = question.id;
  stats.n_responses = cohort.size();
  stats.choice_distribution.assign(question.choices.size(), 0);

  std::vector<core::ItemResponse> responses;
  std::vector<core::ExamineeItemResult> ranked;
  responses.reserve(cohort.size());
  ranked.reserve(cohort.size());
  for (const auto& member : cohort) {
    std::optional<std::size_t> chosen;
    if (member.answers) {
      if (auto it = member.answers->find(question.id); it != member.answers->end()) {
        chosen = it->second;
      }
    }
    if (chosen && *chosen < stats.choice_distribution.size()) ++stats.choice_distribution[*chosen];
    responses.push_back({chosen, question.correct_index});
    ranked.push_back({member.examinee, member.total_raw, chosen == question.correct_index});
  }
  stats.difficulty = core::difficulty_index(responses);
  if (ranked.size() >= 2) stats.discrimination = core::discrimination_index(ranked);
  return stats;
}

bool needs_review(const ItemStats& stats) {
  if (stats.difficulty < kMinDifficulty || stats.difficulty > kMaxDifficulty) return true;
  return stats.discrimination && *stats.discrimination < kMinDiscrimination;
}

ItemAnalysisReport item_analysis_report(const Store& store, ExamId exam_id) {
  auto exam = store.exam(exam_id);
  if (!exam) throw Error(ErrorCode::UnknownExam, "no such exam");
  ItemAnalysisReport report;
  report.exam_id = exam_id;
  report.exam_name = exam->name;

  const auto latest = latest_finalized(store.attempts_for_exam(exam_id));
  std::vector<CohortMember> cohort;
  for (const auto& [examinee, a] : latest) cohort.push_back({examinee, a.raw_score, &a.answers});
  report.cohort_size = cohort.size();

  std::size_t position = 0;
  for (const auto& q : store.questions(exam_id)) {
    ItemReportRow row;
    row.question_id = q.id;
    row.position = ++position;
    row.stem_excerpt = excerpt(q.stem);
    row.category = q.category;
    row.correct_index = q.correct_index;
    if (!cohort.empty()) {
      row.stats = compute_item_stats(q, cohort);
      row.flagged = needs_review(*row.stats);
    }
    report.items.push_back(std::move(row));
  }
  return report;
}

std::string excerpt(std::string_view text, std::size_t max_chars) {
  std::size_t chars = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if ((c & 0xC0) == 0x80) continue;  // continuation byte
    if (chars == max_chars) return std::string(text.substr(0, i)) + "...";
    ++chars;
  }
  return std::string(text);
}

}  // namespace mockboard::reporting
