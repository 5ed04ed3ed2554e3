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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mockboard::csv {

using Row = std::vector<std::string>;

/// RFC 4180 writer: comma separated, CRLF line endings, a field is quoted
/// when it contains a comma, quote, CR or LF (embedded quotes doubled).
class Writer {
 public:
  void row(const Row& fields);
  const std::string& str() const { return out_; }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

std::string escape_field(std::string_view field);

struct ParsedRow {
  Row fields;
  /// 1-based line on which the record starts.
  std::size_t line = 0;
};

/// Parses RFC 4180 text; accepts CRLF or bare LF, quoted fields may span
/// lines. A trailing line break does not produce an empty record.
/// Throws mockboard::Error{SchemaError} on an unterminated quote or stray
/// characters after a closing quote.
std::vector<ParsedRow> parse(std::string_view text);

}  // namespace mockboard::csv
