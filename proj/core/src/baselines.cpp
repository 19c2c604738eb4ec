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

#include "garec/baselines.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "garec/errors.hpp"

namespace garec {

namespace {

struct Ranked {
  std::vector<double> doubled_ranks;  // 2 * midrank, integral
  std::vector<std::size_t> tie_sizes;
};

// Midranks of the pooled sample, doubled so that they stay integral.
Ranked pooled_ranks(std::span<const double> pooled) {
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
  Ranked r;
  r.doubled_ranks.assign(pooled.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && pooled[order[j]] == pooled[order[i]]) ++j;
    // ranks i+1..j, midrank (i+1+j)/2
    const double doubled = static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) r.doubled_ranks[order[k]] = doubled;
    r.tie_sizes.push_back(j - i);
    i = j;
  }
  return r;
}

// P(sum of doubled ranks of a random n1-subset >= observed), by dynamic
// programming over items.
double exact_upper_tail(const std::vector<double>& doubled, std::size_t n1, double observed) {
  const std::size_t n = doubled.size();
  std::vector<long> values(n);
  long max_sum = 0;
  for (std::size_t i = 0; i < n; ++i) values[i] = std::lround(doubled[i]);
  {
    std::vector<long> sorted = values;
    std::sort(sorted.rbegin(), sorted.rend());
    for (std::size_t i = 0; i < n1; ++i) max_sum += sorted[i];
  }
  const auto width = static_cast<std::size_t>(max_sum + 1);
  // ways[j * width + s]: subsets of size j with sum s
  std::vector<double> ways((n1 + 1) * width, 0.0);
  ways[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const long v = values[i];
    for (std::size_t j = std::min(n1, i + 1); j >= 1; --j) {
      double* dst = &ways[j * width];
      const double* src = &ways[(j - 1) * width];
      for (long s = max_sum; s >= v; --s) dst[s] += src[s - v];
    }
  }
  double total = 0.0, tail = 0.0;
  const long threshold = std::lround(observed);
  for (long s = 0; s <= max_sum; ++s) {
    const double w = ways[n1 * width + static_cast<std::size_t>(s)];
    total += w;
    if (s >= threshold) tail += w;
  }
  return total > 0.0 ? tail / total : 1.0;
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> first, std::span<const double> second,
                                 MannWhitneyMethod method) {
  if (first.empty() || second.empty()) throw DataError("mann_whitney_u: both samples must be nonempty");
  const std::size_t n1 = first.size(), n2 = second.size(), n = n1 + n2;

  std::vector<double> pooled(first.begin(), first.end());
  pooled.insert(pooled.end(), second.begin(), second.end());
  const Ranked ranked = pooled_ranks(pooled);

  double r1_doubled = 0.0;
  for (std::size_t i = 0; i < n1; ++i) r1_doubled += ranked.doubled_ranks[i];
  const double d1 = static_cast<double>(n1), d2 = static_cast<double>(n2);
  MannWhitneyResult result;
  result.u = r1_doubled / 2.0 - d1 * (d1 + 1.0) / 2.0;

  if (ranked.tie_sizes.size() == 1) {
    result.p_value = 0.5;
    result.exact = true;
    return result;
  }

  bool exact = method == MannWhitneyMethod::Exact;
  if (method == MannWhitneyMethod::Auto) exact = n1 <= kMannWhitneyExactMax || n2 <= kMannWhitneyExactMax;

  if (exact) {
    result.exact = true;
    result.p_value = exact_upper_tail(ranked.doubled_ranks, n1, r1_doubled);
    return result;
  }

  double tie_term = 0.0;
  for (std::size_t t : ranked.tie_sizes) {
    const double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  const double dn = static_cast<double>(n);
  const double variance = d1 * d2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (!(variance > 0.0)) {
    result.p_value = 0.5;
    return result;
  }
  const double z = (result.u - d1 * d2 / 2.0 - 0.5) / std::sqrt(variance);
  result.p_value = 0.5 * std::erfc(z / std::sqrt(2.0));
  return result;
}

GroupPopModel GroupPopModel::build(std::span<const StudentHistory> students,
                                   std::span<const TrainingInstance> train, std::size_t courses) {
  GroupPopModel model(courses);
  for (const auto& inst : train) {
    const StudentHistory& s = students[inst.student];
    const AcademicLevel level = academic_level(s.prior_credits.at(inst.position));
    for (CourseId c : inst.good) model.add(s.major, level, c, true);
    for (CourseId c : inst.bad) model.add(s.major, level, c, false);
  }
  return model;
}

void GroupPopModel::set(const std::string& major, AcademicLevel level, CourseId course, Counts counts) {
  auto& group = groups_[{major, level}];
  if (group.empty()) group.resize(courses_);
  group.at(index(course)) = counts;
}

void GroupPopModel::add(const std::string& major, AcademicLevel level, CourseId course, bool good) {
  auto& counts = groups_[{major, level}];
  if (counts.empty()) counts.resize(courses_);
  auto& c = counts.at(index(course));
  if (good) {
    ++c.good;
  } else {
    ++c.bad;
  }
}

GroupPopModel::Counts GroupPopModel::counts(const std::string& major, AcademicLevel level, CourseId course) const {
  auto it = groups_.find({major, level});
  if (it == groups_.end() || index(course) >= it->second.size()) return {};
  return it->second[index(course)];
}

std::vector<ScoredCourse> grppop_rank(const GroupPopModel& model, const std::string& major, AcademicLevel level,
                                      std::span<const CourseId> candidates, Variant variant) {
  std::vector<ScoredCourse> ranked;
  ranked.reserve(candidates.size());
  for (CourseId c : candidates) {
    const auto n = model.counts(major, level, c);
    double score = 0.0;
    switch (variant) {
      case Variant::Plus:
        score = static_cast<double>(n.good);
        break;
      case Variant::PlusMinus:
        score = static_cast<double>(n.good - n.bad);
        break;
      case Variant::PlusPlus:
        score = static_cast<double>(n.good + n.bad);
        break;
    }
    ranked.push_back({c, score});
  }
  sort_ranked(ranked);
  return ranked;
}

DependencyGraph::DependencyGraph(std::size_t courses, std::vector<DependencyEdge> tested)
    : courses_(courses), tested_(std::move(tested)), incoming_(courses) {
  std::sort(tested_.begin(), tested_.end(), [](const DependencyEdge& a, const DependencyEdge& b) {
    return std::pair(a.from, a.to) < std::pair(b.from, b.to);
  });
  for (const auto& e : tested_) {
    if (e.from == e.to) throw DataError("dependency graph: self edge");
    if (e.significant) incoming_.at(index(e.to)).push_back(e.from);
  }
}

std::vector<DependencyEdge> DependencyGraph::edges() const {
  std::vector<DependencyEdge> out;
  for (const auto& e : tested_) {
    if (e.significant) out.push_back(e);
  }
  return out;
}

bool DependencyGraph::has_edge(CourseId from, CourseId to) const {
  const auto in = incoming(to);
  return std::binary_search(in.begin(), in.end(), from);
}

std::span<const CourseId> DependencyGraph::incoming(CourseId to) const {
  if (index(to) >= incoming_.size()) return {};
  return incoming_[index(to)];
}

DependencyGraph build_dependency_graph(std::span<const StudentHistory> students, std::size_t courses,
                                       const DependencyConfig& config) {
  const std::size_t ns = students.size();
  std::vector<int> first_term(ns * courses, INT_MAX);
  std::vector<std::vector<std::pair<std::size_t, double>>> takers(courses);  // (student, grade in first take)
  for (std::size_t s = 0; s < ns; ++s) {
    for (const auto& term : students[s].terms) {
      for (const auto& e : term.courses) {
        int& slot = first_term[s * courses + index(e.course)];
        if (slot == INT_MAX) {
          slot = term.term;
          takers[index(e.course)].emplace_back(s, e.grade.points());
        }
      }
    }
  }

  std::vector<DependencyEdge> tested;
  std::vector<double> before, other;
  for (std::size_t b = 0; b < courses; ++b) {
    if (takers[b].size() < 2 * config.min_n) continue;
    for (std::size_t a = 0; a < courses; ++a) {
      if (a == b) continue;
      before.clear();
      other.clear();
      for (const auto& [s, grade] : takers[b]) {
        const int ta = first_term[s * courses + a];
        const int tb = first_term[s * courses + b];
        (ta < tb ? before : other).push_back(grade);
      }
      if (before.size() < config.min_n || other.size() < config.min_n) continue;
      const auto mw = mann_whitney_u(before, other);
      tested.push_back({course_at(a), course_at(b), mw.u, mw.p_value, mw.p_value < config.alpha});
    }
  }
  return DependencyGraph(courses, std::move(tested));
}

std::vector<ScoredCourse> depgraph_rank(const DependencyGraph& graph, std::span<const CourseId> context,
                                        std::span<const CourseId> candidates) {
  std::vector<CourseId> unique(context.begin(), context.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  std::vector<ScoredCourse> ranked;
  ranked.reserve(candidates.size());
  for (CourseId c : candidates) {
    double score = 0.0;
    for (CourseId from : graph.incoming(c)) {
      if (std::binary_search(unique.begin(), unique.end(), from)) score += 1.0;
    }
    ranked.push_back({c, score});
  }
  sort_ranked(ranked);
  return ranked;
}

void write_dependency_csv(const DependencyGraph& graph, const Vocabulary& courses, std::ostream& out) {
  out << "src,dst,u,p\n";
  out << std::setprecision(10);
  for (const auto& e : graph.edges()) {
    out << courses.name(e.from) << ',' << courses.name(e.to) << ',' << e.u << ',' << e.p_value << '\n';
  }
}

}  // namespace garec
