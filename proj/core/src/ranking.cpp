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

#include "garec/ranking.hpp"

#include <algorithm>

#include "garec/errors.hpp"

namespace garec {

void sort_ranked(std::vector<ScoredCourse>& ranked) {
  std::sort(ranked.begin(), ranked.end(), [](const ScoredCourse& a, const ScoredCourse& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.course < b.course;
  });
}

std::vector<ScoredCourse> rank_scores(std::span<const CourseId> candidates, std::span<const double> scores) {
  if (candidates.size() != scores.size()) throw Error("rank_scores: candidate/score length mismatch");
  std::vector<ScoredCourse> ranked;
  ranked.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) ranked.push_back({candidates[i], scores[i]});
  sort_ranked(ranked);
  return ranked;
}

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::Plus:
      return "plus";
    case Variant::PlusMinus:
      return "plusminus";
    case Variant::PlusPlus:
      return "plusplus";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view text) {
  if (text == "plus" || text == "+") return Variant::Plus;
  if (text == "plusminus" || text == "+-") return Variant::PlusMinus;
  if (text == "plusplus" || text == "++") return Variant::PlusPlus;
  return std::nullopt;
}

}  // namespace garec
