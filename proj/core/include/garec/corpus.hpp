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
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "garec/grade.hpp"

namespace garec {

// Dense course index. Vocabularies are sorted by course name, so ordering on
// CourseId is the lexicographic order of the underlying ids.
enum class CourseId : std::int32_t {};

constexpr std::size_t index(CourseId c) { return static_cast<std::size_t>(c); }
constexpr CourseId course_at(std::size_t i) { return static_cast<CourseId>(static_cast<std::int32_t>(i)); }

class Vocabulary {
 public:
  Vocabulary() = default;
  // Sorted and deduplicated.
  static Vocabulary from_names(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  std::optional<CourseId> find(std::string_view name) const;
  CourseId at(std::string_view name) const;  // DataError when absent
  const std::string& name(CourseId c) const { return names_[index(c)]; }
  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::int32_t> lookup_;
};

// Maps "Fall 2014"-style labels onto monotone integers (year*3 + season with
// Spring < Summer < Fall). Plain integers pass through unchanged.
int parse_term(std::string_view text);

inline constexpr double kDefaultCredits = 3.0;

struct EnrollmentRecord {
  std::string student;
  std::string course;
  int term = 0;
  Grade grade{Letter::F};
  std::string major;
  double credits = kDefaultCredits;
};

struct TranscriptFile {
  std::vector<EnrollmentRecord> records;
  std::size_t dropped_pass_fail = 0;
};

// Columns: student_id,course_id,term,grade_letter[,major,credits], header
// row required, any column order. Rows graded S/N are dropped and counted.
TranscriptFile read_transcript_csv(std::istream& in);

struct OfferingRecord {
  std::string course;
  int term = 0;
};

// Columns: course_id,term.
std::vector<OfferingRecord> read_offerings_csv(std::istream& in);

struct Enrollment {
  CourseId course;
  Grade grade;
  double credits = kDefaultCredits;
};

struct TermRecord {
  int term = 0;
  std::vector<Enrollment> courses;  // sorted by course
};

// One student's transcript. Positions index `terms` (0 = first term taken);
// term indices are the global, corpus-wide values.
struct StudentHistory {
  std::string id;
  std::string major;
  std::vector<TermRecord> terms;
  // Mean grade over all courses before each position; nullopt at position 0.
  std::vector<std::optional<double>> prior_mean;
  // Credits accumulated before each position.
  std::vector<double> prior_credits;

  std::size_t courses_before(std::size_t position) const;
  double final_gpa() const;
  // Position of the term with this global index, if the student has one.
  std::optional<std::size_t> position_of(int term) const;
};

class Offerings {
 public:
  void add(int term, CourseId course);
  bool offered(int term, CourseId course) const;
  // Sorted; empty when the term has no offerings.
  std::span<const CourseId> at(int term) const;
  const std::map<int, std::vector<CourseId>>& by_term() const { return by_term_; }
  void finalize();  // sorts and deduplicates after a sequence of add()

 private:
  std::map<int, std::vector<CourseId>> by_term_;
};

struct Corpus {
  Vocabulary courses;
  std::vector<StudentHistory> students;  // sorted by student id
  Offerings offerings;
  std::size_t dropped_pass_fail = 0;

  // Without explicit offerings a course counts as offered in every term in
  // which at least one student took it.
  static Corpus build(const TranscriptFile& transcripts,
                      const std::optional<std::vector<OfferingRecord>>& offerings = std::nullopt);
};

Corpus parse_transcripts(std::istream& transcripts);
Corpus parse_transcripts(std::istream& transcripts, std::istream& offerings);

// Target-term tolerance for "grade >= prior mean": absorbs the rounding of
// means over three-decimal points.
inline constexpr double kGradeTolerance = 1e-9;

struct TrainingInstance {
  std::size_t student = 0;   // index into Corpus::students
  std::size_t position = 0;  // target term position within that student
  int term = 0;              // global term index of the target term
  double prior_mean = 0.0;
  std::vector<CourseId> context;  // prior takes graded above D+, one entry per take
  std::vector<CourseId> good;
  std::vector<CourseId> bad;

  std::size_t target_count() const { return good.size() + bad.size(); }
};

// One instance per term that has a defined prior mean (every position >= 1).
// The context can be empty when every prior grade was D+ or lower; consumers
// that need a profile skip those.
std::vector<TrainingInstance> label_good_bad(const StudentHistory& history, std::size_t student_index);

std::vector<TrainingInstance> build_instances(const Corpus& corpus);

struct InstanceSplit {
  std::vector<TrainingInstance> train;  // term <= train_end
  std::vector<TrainingInstance> valid;  // train_end < term <= valid_end
  std::vector<TrainingInstance> test;   // term > valid_end
  std::vector<std::string> warnings;
};

InstanceSplit split_by_time(std::span<const TrainingInstance> instances, int train_end, int valid_end);

// Recommendations need this many prior courses.
inline constexpr std::size_t kMinPriorCourses = 3;

// True when an earlier take of `course` (before `position`) had a grade
// >= C+ or >= prior mean - 1.0, which removes it from the candidate set.
bool excluded_by_history(const StudentHistory& history, std::size_t position, CourseId course);

// Courses offered in the target term minus those excluded by history.
std::vector<CourseId> eligible_candidates(const StudentHistory& history, std::size_t position,
                                          const Offerings& offerings);

// Courses appearing in any instance, as context or target.
std::vector<std::uint8_t> known_courses(std::span<const TrainingInstance> instances, std::size_t courses);

enum class AcademicLevel : std::uint8_t { Freshman, Sophomore, Junior, Senior };

inline constexpr std::array<std::string_view, 4> kAcademicLevelNames = {"freshman", "sophomore", "junior",
                                                                         "senior"};

AcademicLevel academic_level(double credits);

// Histories restricted to terms <= last_term (students left empty are dropped).
std::vector<StudentHistory> truncate_histories(std::span<const StudentHistory> students, int last_term);

}  // namespace garec
