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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace garec {

enum class Letter : std::uint8_t { A, AMinus, BPlus, B, BMinus, CPlus, C, CMinus, DPlus, D, F };

inline constexpr std::size_t kLetterCount = 11;

// Numeric values of the 11-letter scale, three decimals.
inline constexpr std::array<double, kLetterCount> kLetterPoints = {
    4.0, 3.667, 3.333, 3.0, 2.667, 2.333, 2.0, 1.667, 1.333, 1.0, 0.0};

inline constexpr std::array<std::string_view, kLetterCount> kLetterNames = {
    "A", "A-", "B+", "B", "B-", "C+", "C", "C-", "D+", "D", "F"};

inline constexpr double kDPlusPoints = 1.333;
inline constexpr double kCPlusPoints = 2.333;

class Grade {
 public:
  constexpr explicit Grade(Letter letter) : letter_(letter) {}

  constexpr Letter letter() const { return letter_; }
  constexpr double points() const { return kLetterPoints[static_cast<std::size_t>(letter_)]; }
  constexpr std::string_view name() const { return kLetterNames[static_cast<std::size_t>(letter_)]; }

  // Grades strictly above D+ are eligible as context courses.
  constexpr bool counts_as_context() const { return points() > kDPlusPoints; }

  friend constexpr bool operator==(Grade, Grade) = default;

 private:
  Letter letter_;
};

// Exact letter lookup ("B+", "A-", ...). Pass/fail markers are not grades.
std::optional<Grade> parse_letter(std::string_view text);

// Inverse of Grade::points over the table; nullopt for off-table values.
std::optional<Grade> grade_from_points(double points);

// Nearest letter on the scale; ties resolve toward the higher grade.
Grade quantize_points(double points);

inline bool is_pass_fail_marker(std::string_view text) { return text == "S" || text == "N"; }

}  // namespace garec
