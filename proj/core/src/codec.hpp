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

// Durable JSON encoding of entities (journal records and snapshots). This is
// the on-disk form: percents are integer hundredths, points integer tenths,
// instants ISO-8601 UTC. The HTTP layer has its own presentation.

#include <json.hpp>

#include "mockboard/types.hpp"

namespace mockboard {

template <class Tag>
void to_json(nlohmann::json& j, const Id<Tag>& id) {
  j = id.value;
}
template <class Tag>
void from_json(const nlohmann::json& j, Id<Tag>& id) {
  id.value = j.get<std::uint64_t>();
}

void to_json(nlohmann::json& j, const ExamineeProfile& p);
void from_json(const nlohmann::json& j, ExamineeProfile& p);
void to_json(nlohmann::json& j, const Account& a);
void from_json(const nlohmann::json& j, Account& a);
void to_json(nlohmann::json& j, const Course& c);
void from_json(const nlohmann::json& j, Course& c);
void to_json(nlohmann::json& j, const Exam& e);
void from_json(const nlohmann::json& j, Exam& e);
void to_json(nlohmann::json& j, const Question& q);
void from_json(const nlohmann::json& j, Question& q);
void to_json(nlohmann::json& j, const Attempt& a);
void from_json(const nlohmann::json& j, Attempt& a);
void to_json(nlohmann::json& j, const Announcement& a);
void from_json(const nlohmann::json& j, Announcement& a);

namespace codec {

nlohmann::json instant(Instant t);
Instant instant(const nlohmann::json& j);
nlohmann::json date(Date d);
Date date(const nlohmann::json& j);

}  // namespace codec

}  // namespace mockboard
