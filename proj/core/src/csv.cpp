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

#include "mockboard/csv.hpp"

#include "mockboard/error.hpp"

namespace mockboard::csv {

std::string escape_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void Writer::row(const Row& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_.push_back(',');
    out_ += escape_field(fields[i]);
  }
  out_ += "\r\n";
}

std::vector<ParsedRow> parse(std::string_view text) {
  std::vector<ParsedRow> rows;
  ParsedRow current;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  bool row_open = false;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(current));
    current = ParsedRow{};
    row_open = false;
  };

  while (i < text.size()) {
    if (!row_open) {
      current.line = line;
      row_open = true;
    }
    const char c = text[i];
    if (c == '"' && field.empty()) {
      const std::size_t start_line = line;
      ++i;
      for (;;) {
        if (i >= text.size()) {
          throw Error(ErrorCode::SchemaError,
                      "unterminated quoted field starting on line " + std::to_string(start_line),
                      {{"line", std::to_string(start_line)}});
        }
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        if (text[i] == '\n') ++line;
        field.push_back(text[i++]);
      }
      if (i < text.size() && text[i] != ',' && text[i] != '\r' && text[i] != '\n') {
        throw Error(ErrorCode::SchemaError,
                    "unexpected character after closing quote on line " + std::to_string(line),
                    {{"line", std::to_string(line)}});
      }
      continue;
    }
    if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      end_row();
      i += 2;
      ++line;
    } else if (c == '\n') {
      end_row();
      ++i;
      ++line;
    } else {
      field.push_back(c);
      ++i;
    }
  }
  if (row_open) end_row();
  return rows;
}

}  // namespace mockboard::csv
