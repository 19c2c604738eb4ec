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

#include "garec/grade.hpp"

#include <cmath>

namespace garec {

std::optional<Grade> parse_letter(std::string_view text) {
  for (std::size_t i = 0; i < kLetterCount; ++i) {
    if (kLetterNames[i] == text) return Grade(static_cast<Letter>(i));
  }
  return std::nullopt;
}

std::optional<Grade> grade_from_points(double points) {
  for (std::size_t i = 0; i < kLetterCount; ++i) {
    if (kLetterPoints[i] == points) return Grade(static_cast<Letter>(i));
  }
  return std::nullopt;
}

Grade quantize_points(double points) {
  std::size_t best = 0;
  double best_gap = std::abs(points - kLetterPoints[0]);
  for (std::size_t i = 1; i < kLetterCount; ++i) {
    const double gap = std::abs(points - kLetterPoints[i]);
    if (gap < best_gap) {
      best = i;
      best_gap = gap;
    }
  }
  return Grade(static_cast<Letter>(best));
}

}  // namespace garec
