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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "garec/corpus.hpp"
#include "garec/ranking.hpp"

namespace garec {

// ---------------------------------------------------------------------------
// Mann-Whitney U
// ---------------------------------------------------------------------------

enum class MannWhitneyMethod : std::uint8_t { Auto, Exact, Normal };

// Auto enumerates exactly while either sample has at most this many values
// and uses the normal approximation beyond. Letter grades tie heavily, and at
// eight per side the approximation can still be off by 0.1.
inline constexpr std::size_t kMannWhitneyExactMax = 8;

struct MannWhitneyResult {
  double u = 0.0;        // U of the first sample: pairs it wins, ties counted 1/2
  double p_value = 1.0;  // one-sided, H1: first sample stochastically larger
  bool exact = false;
};

// Midrank tie handling. The exact path enumerates the permutation
// distribution of the pooled (tied) values; the normal path uses a
// tie-corrected variance with continuity correction. All-equal pooled
// samples return p = 0.5.
MannWhitneyResult mann_whitney_u(std::span<const double> first, std::span<const double> second,
                                 MannWhitneyMethod method = MannWhitneyMethod::Auto);

// ---------------------------------------------------------------------------
// Group popularity
// ---------------------------------------------------------------------------

class GroupPopModel {
 public:
  struct Counts {
    std::int64_t good = 0;
    std::int64_t bad = 0;
  };
  using GroupKey = std::pair<std::string, AcademicLevel>;

  GroupPopModel() = default;
  explicit GroupPopModel(std::size_t courses) : courses_(courses) {}

  // Counts target-term labels per (major, academic level at term start).
  static GroupPopModel build(std::span<const StudentHistory> students, std::span<const TrainingInstance> train,
                             std::size_t courses);

  void add(const std::string& major, AcademicLevel level, CourseId course, bool good);
  void set(const std::string& major, AcademicLevel level, CourseId course, Counts counts);
  Counts counts(const std::string& major, AcademicLevel level, CourseId course) const;
  std::size_t courses() const { return courses_; }
  const std::map<GroupKey, std::vector<Counts>>& groups() const { return groups_; }

 private:
  std::size_t courses_ = 0;
  std::map<GroupKey, std::vector<Counts>> groups_;
};

// n+ (plus), n+ - n- (plusminus) or n+ + n- (plusplus); unseen groups score 0.
std::vector<ScoredCourse> grppop_rank(const GroupPopModel& model, const std::string& major, AcademicLevel level,
                                      std::span<const CourseId> candidates, Variant variant);

// ---------------------------------------------------------------------------
// Course dependency graph
// ---------------------------------------------------------------------------

struct DependencyEdge {
  CourseId from;
  CourseId to;
  double u = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

struct DependencyConfig {
  double alpha = 0.05;
  std::size_t min_n = 10;
};

class DependencyGraph {
 public:
  DependencyGraph() = default;
  DependencyGraph(std::size_t courses, std::vector<DependencyEdge> tested);

  std::size_t courses() const { return courses_; }
  // Every pair that met the sample-size gate, sorted by (from, to).
  const std::vector<DependencyEdge>& tested() const { return tested_; }
  std::vector<DependencyEdge> edges() const;  // significant only
  bool has_edge(CourseId from, CourseId to) const;
  // Significant predecessors of `to`, sorted.
  std::span<const CourseId> incoming(CourseId to) const;

 private:
  std::size_t courses_ = 0;
  std::vector<DependencyEdge> tested_;
  std::vector<std::vector<CourseId>> incoming_;
};

// For each ordered pair (A, B): grades in B (first take) of students whose
// first take of A came in an earlier term, against those of all other
// students who took B. An edge A -> B is kept when both groups have at least
// min_n grades and the one-sided test gives p < alpha.
DependencyGraph build_dependency_graph(std::span<const StudentHistory> students, std::size_t courses,
                                       const DependencyConfig& config = {});

// Score = number of distinct context courses with an edge into the candidate.
std::vector<ScoredCourse> depgraph_rank(const DependencyGraph& graph, std::span<const CourseId> context,
                                        std::span<const CourseId> candidates);

// Edge list as CSV: src,dst,u,p (significant edges only).
void write_dependency_csv(const DependencyGraph& graph, const Vocabulary& courses, std::ostream& out);

}  // namespace garec
