// Copyright 2026 The garec Authors. All Rights Reserved.
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

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "garec/corpus.hpp"

namespace garec {

struct ScoredCourse {
  CourseId course;
  double score = 0.0;

  friend bool operator==(const ScoredCourse&, const ScoredCourse&) = default;
};

// Non-increasing score, ties by ascending course id.
void sort_ranked(std::vector<ScoredCourse>& ranked);

std::vector<ScoredCourse> rank_scores(std::span<const CourseId> candidates, std::span<const double> scores);

// How target-term labels are used during learning: good courses only, good
// and bad with opposite signs, or every course regardless of label.
enum class Variant : std::uint8_t { Plus, PlusMinus, PlusPlus };

std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view text);

}  // namespace garec
