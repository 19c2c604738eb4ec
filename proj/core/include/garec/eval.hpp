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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "garec/corpus.hpp"
#include "garec/ranker.hpp"

namespace garec {

enum class GpaType : std::uint8_t { A, B, C };

struct GpaThresholds {
  double a = 3.667;  // final GPA >= a
  double b = 2.667;  // final GPA >= b, otherwise C
};

GpaType gpa_type(double final_gpa, const GpaThresholds& thresholds = {});
std::string_view gpa_type_name(GpaType t);

// Metrics of one (student, term) query.
struct TermEvaluation {
  std::string student;
  int term = 0;
  std::string major;
  AcademicLevel level = AcademicLevel::Freshman;
  GpaType type = GpaType::B;

  std::size_t taken = 0;  // n(s,t)
  std::size_t actual_good = 0;
  std::size_t actual_bad = 0;
  std::size_t recommended = 0;
  std::size_t hit_good = 0;
  std::size_t hit_bad = 0;

  std::optional<double> recall_good;  // absent when actual_good == 0
  std::optional<double> recall_bad;   // absent when actual_bad == 0
  std::optional<double> recall_diff;  // good - bad, when both are present

  std::optional<double> gpa_increase;  // percent, over recommended good courses
  std::optional<double> gpa_decrease;  // percent, over recommended bad courses
};

// Recall(good/bad/diff) of a recommended list against a term's actual good
// and bad courses. The list may be shorter than the term load (few eligible
// candidates) but never longer: Error otherwise.
TermEvaluation recall_metrics(std::span<const CourseId> actual_good, std::span<const CourseId> actual_bad,
                              std::span<const CourseId> recommended);

struct GpaImpact {
  std::optional<double> increase;
  std::optional<double> decrease;
};

// Percentage change of the mean grade over recommended good (bad) courses
// relative to the prior GPA. A side is absent when none of its actual courses
// was recommended, and both are when the prior GPA is not positive.
GpaImpact gpa_impact(std::span<const std::pair<CourseId, double>> actual_good,
                     std::span<const std::pair<CourseId, double>> actual_bad, std::span<const CourseId> recommended,
                     double prior_gpa);

struct Coverage {
  std::size_t good_terms = 0;
  std::size_t bad_terms = 0;
};

Coverage term_coverage(std::span<const TermEvaluation> terms);

struct MetricSummary {
  std::size_t terms = 0;
  std::size_t good_terms = 0;  // terms with actual good courses
  std::size_t bad_terms = 0;
  std::optional<double> recall_good;
  std::optional<double> recall_bad;
  std::optional<double> recall_diff;
  std::size_t gpa_increase_terms = 0;
  std::optional<double> gpa_increase;
  std::size_t gpa_decrease_terms = 0;
  std::optional<double> gpa_decrease;
  Coverage coverage;
};

// Per-term means; Recall(diff) is the difference of the two means.
MetricSummary summarize(std::span<const TermEvaluation> terms);

enum class Grouping : std::uint8_t { Major, GpaType, AcademicLevel };

struct GroupRow {
  std::string group;
  MetricSummary summary;
};

// Rows ordered by group name; groups without an evaluable term are omitted.
std::vector<GroupRow> group_breakdown(std::span<const TermEvaluation> terms, Grouping grouping);

struct EvaluationReport {
  std::string backend;
  std::vector<TermEvaluation> terms;
  MetricSummary overall;
  std::size_t skipped_short_history = 0;
  std::size_t skipped_no_profile = 0;
  std::size_t skipped_no_candidates = 0;
};

struct EvaluateOptions {
  GpaThresholds thresholds;
};

// Runs `backend` on every instance: one query per (student, term), list
// length equal to the term load.
EvaluationReport evaluate(const Recommender& backend, const Corpus& corpus,
                          std::span<const TrainingInstance> instances, const EvaluateOptions& options = {});

// Course -> term number (1 = first term of the plan); first take wins.
using DegreePlan = std::map<CourseId, int>;

DegreePlan degree_plan(const StudentHistory& student);

inline constexpr double kDefaultSimilarityDecay = 0.5;

// Mean over unordered pairs of common courses of T(dt1, dt2): 1 when both
// gaps are zero, exp(-lambda |dt1 - dt2|) when the pair is taken in the same
// order in both plans, 0 otherwise. Absent with fewer than two common courses.
std::optional<double> degree_similarity(const DegreePlan& a, const DegreePlan& b,
                                        double lambda = kDefaultSimilarityDecay);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

// Distribution of (grade - prior mean) over every take with a defined prior
// mean, in bins one third of a grade point wide centered on multiples of 1/3.
std::vector<HistogramBin> grade_deviation_histogram(std::span<const StudentHistory> students);

void write_terms_csv(const EvaluationReport& report, std::ostream& out);
void write_groups_csv(std::span<const GroupRow> rows, std::ostream& out);
void write_histogram_csv(std::span<const HistogramBin> bins, std::ostream& out);
// Machine-readable summary (JSON).
void write_summary_json(const EvaluationReport& report, std::ostream& out);

}  // namespace garec
