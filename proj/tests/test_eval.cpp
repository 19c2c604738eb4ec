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

#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>
#include <random>
#include <sstream>

#include "garec/errors.hpp"
#include "garec/eval.hpp"
#include "support.hpp"

namespace garec {
namespace {

const CourseId a = course_at(0), b = course_at(1), c = course_at(2), d = course_at(3), x = course_at(4);

TEST(RecallMetrics, Examples) {
  const std::vector<CourseId> good = {a, b}, bad = {c, d};
  const std::vector<CourseId> list = {a, b, c, x};
  const TermEvaluation t = recall_metrics(good, bad, list);
  EXPECT_DOUBLE_EQ(*t.recall_good, 1.0);
  EXPECT_DOUBLE_EQ(*t.recall_bad, 0.5);
  EXPECT_DOUBLE_EQ(*t.recall_diff, 0.5);
  EXPECT_EQ(t.hit_good, 2u);
  EXPECT_EQ(t.hit_bad, 1u);
  EXPECT_EQ(t.taken, 4u);

  const std::vector<CourseId> disjoint = {x, course_at(5), course_at(6), course_at(7)};
  const TermEvaluation none = recall_metrics(good, bad, disjoint);
  EXPECT_DOUBLE_EQ(*none.recall_good, 0.0);
  EXPECT_DOUBLE_EQ(*none.recall_bad, 0.0);
  EXPECT_DOUBLE_EQ(*none.recall_diff, 0.0);

  const std::vector<CourseId> actual = {a, b, c, d};
  const TermEvaluation all = recall_metrics(good, bad, actual);
  EXPECT_DOUBLE_EQ(*all.recall_good, 1.0);
  EXPECT_DOUBLE_EQ(*all.recall_bad, 1.0);
  EXPECT_DOUBLE_EQ(*all.recall_diff, 0.0);
}

TEST(RecallMetrics, UndefinedSidesAndLengthRule) {
  const std::vector<CourseId> good = {a, b}, none;
  const std::vector<CourseId> list = {a};
  const TermEvaluation t = recall_metrics(good, none, list);
  EXPECT_DOUBLE_EQ(*t.recall_good, 0.5);
  EXPECT_FALSE(t.recall_bad.has_value());
  EXPECT_FALSE(t.recall_diff.has_value());
  const std::vector<CourseId> too_long = {a, b, c};
  EXPECT_THROW(recall_metrics(good, none, too_long), Error);
}

TEST(GpaImpact, Examples) {
  using Pair = std::pair<CourseId, double>;
  const std::vector<Pair> good = {{a, 3.333}, {b, 3.267}}, bad = {{c, 2.4}, {d, 1.0}};
  const std::vector<CourseId> rec = {a, b, c};
  const GpaImpact g = gpa_impact(good, bad, rec, 3.0);
  EXPECT_NEAR(*g.increase, 10.0, 1e-9);
  EXPECT_NEAR(*g.decrease, 20.0, 1e-9);
  const std::vector<Pair> flat = {{a, 3.0}};
  const std::vector<CourseId> only_a = {a};
  EXPECT_DOUBLE_EQ(*gpa_impact(flat, {}, only_a, 3.0).increase, 0.0);
  EXPECT_FALSE(gpa_impact(flat, {}, only_a, 3.0).decrease.has_value());
  const std::vector<CourseId> miss = {x};
  EXPECT_FALSE(gpa_impact(good, bad, miss, 3.0).increase.has_value());
}

TermEvaluation term(std::size_t hit_good, std::size_t hit_bad) {
  TermEvaluation t;
  t.hit_good = hit_good;
  t.hit_bad = hit_bad;
  return t;
}

TEST(TermCoverage, Counts) {
  const std::vector<TermEvaluation> none = {term(0, 0), term(0, 0)};
  EXPECT_EQ(term_coverage(none).good_terms, 0u);
  EXPECT_EQ(term_coverage(none).bad_terms, 0u);
  const std::vector<TermEvaluation> mixed = {term(2, 0), term(0, 1), term(1, 1), term(0, 0)};
  EXPECT_EQ(term_coverage(mixed).good_terms, 2u);
  EXPECT_EQ(term_coverage(mixed).bad_terms, 2u);
}

TEST(DegreeSimilarity, ExactProperties) {
  const DegreePlan p1 = {{a, 1}, {b, 2}, {c, 2}, {d, 4}};
  const DegreePlan p2 = {{a, 1}, {b, 3}, {c, 2}, {x, 1}};
  EXPECT_EQ(degree_similarity(p1, p1), 1.0);
  EXPECT_EQ(degree_similarity(p1, p2), degree_similarity(p2, p1));
  // Common a, b, c: (a,b) gaps 1 and 2, (a,c) 1 and 1, (b,c) 0 and -1.
  EXPECT_NEAR(*degree_similarity(p1, p2), (std::exp(-0.5) + 1.0 + 0.0) / 3.0, 1e-15);

  const DegreePlan fwd = {{a, 1}, {b, 3}}, rev = {{a, 3}, {b, 1}};
  EXPECT_EQ(degree_similarity(fwd, rev), 0.0);
  const DegreePlan gap1 = {{a, 1}, {b, 2}}, gap2 = {{a, 1}, {b, 3}};
  EXPECT_NEAR(*degree_similarity(gap1, gap2, 0.5), 0.6065, 1e-4);
  const DegreePlan single = {{a, 1}, {x, 2}};
  EXPECT_FALSE(degree_similarity(p1, single).has_value());
}

TEST(DegreeSimilarity, RandomPlansAreBoundedSymmetricAndMonotoneInLambda) {
  std::mt19937 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    DegreePlan p, q;
    for (std::size_t k = 0; k < 8; ++k) {
      if (gen() % 4 != 0) p[course_at(k)] = 1 + static_cast<int>(gen() % 6);
      if (gen() % 4 != 0) q[course_at(k)] = 1 + static_cast<int>(gen() % 6);
    }
    const auto s = degree_similarity(p, q, 0.5);
    if (!s) continue;
    EXPECT_GE(*s, 0.0);
    EXPECT_LE(*s, 1.0);
    EXPECT_EQ(s, degree_similarity(q, p, 0.5));
    EXPECT_LE(*degree_similarity(p, q, 0.9), *s);
  }
}

constexpr const char* kHeader = "student_id,course_id,term,grade_letter,major,credits\n";

// Random corpus without retakes; every course offered every term.
Corpus random_corpus(std::uint32_t seed, int students, const std::vector<std::string>& majors) {
  std::mt19937 gen(seed);
  const int courses = 14, terms = 5;
  std::string csv = kHeader;
  for (int s = 0; s < students; ++s) {
    std::vector<int> order(courses);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), gen);
    std::size_t next = 0;
    for (int t = 1; t <= terms; ++t) {
      const int load = 1 + static_cast<int>(gen() % 2);
      for (int k = 0; k < load; ++k) {
        csv += "s" + std::to_string(100 + s) + ",c" + std::to_string(10 + order[next++]) + "," + std::to_string(t) +
               "," + std::string(kLetterNames[gen() % 8]) + "," + majors[static_cast<std::size_t>(s) % majors.size()] +
               ",3\n";
      }
    }
  }
  std::string offers = "course_id,term\n";
  for (int k = 0; k < courses; ++k) {
    for (int t = 1; t <= terms; ++t) offers += "c" + std::to_string(10 + k) + "," + std::to_string(t) + "\n";
  }
  return testing::corpus_from_csv(csv, offers);
}

// Good courses of the target term first, then courses outside the term, then
// the term's bad courses.
class OracleRecommender final : public Recommender {
 public:
  std::vector<double> score(const Query& q, std::span<const CourseId> candidates) const override {
    const auto& term = q.student->terms[q.position].courses;
    std::vector<double> out;
    for (CourseId c : candidates) {
      double s = 1.0;
      for (const Enrollment& e : term) {
        if (e.course == c) s = e.grade.points() >= q.prior_mean - kGradeTolerance ? 2.0 : 0.0;
      }
      out.push_back(s);
    }
    return out;
  }
  std::string name() const override { return "oracle"; }
};

class RandomRecommender final : public Recommender {
 public:
  std::vector<double> score(const Query& q, std::span<const CourseId> candidates) const override {
    std::vector<double> out;
    for (CourseId c : candidates) {
      out.push_back(static_cast<double>((index(c) * 7919 + q.student->id.size() * 31 + static_cast<std::size_t>(q.term) * 104729) % 97));
    }
    return out;
  }
  std::string name() const override { return "scrambled"; }
};

TEST(Evaluate, PerfectOracleRetrievesEveryGoodAndNoBadCourse) {
  for (std::uint32_t seed = 1; seed <= 5; ++seed) {
    const Corpus corpus = random_corpus(seed, 40, {"cs", "ee"});
    const auto instances = build_instances(corpus);
    const EvaluationReport r = evaluate(OracleRecommender(), corpus, instances);
    ASSERT_FALSE(r.terms.empty());
    EXPECT_DOUBLE_EQ(*r.overall.recall_good, 1.0);
    EXPECT_DOUBLE_EQ(*r.overall.recall_bad, 0.0);
    EXPECT_EQ(r.overall.coverage.good_terms, r.overall.good_terms);
    EXPECT_EQ(r.overall.coverage.bad_terms, 0u);
    EXPECT_GT(r.skipped_short_history, 0u);
  }
}

void expect_identity(const MetricSummary& m) {
  if (m.recall_good && m.recall_bad) {
    EXPECT_NEAR(*m.recall_diff, *m.recall_good - *m.recall_bad, 1e-12);
    EXPECT_GE(*m.recall_good, 0.0);
    EXPECT_LE(*m.recall_good, 1.0);
    EXPECT_GE(*m.recall_bad, 0.0);
    EXPECT_LE(*m.recall_bad, 1.0);
  }
}

TEST(Evaluate, RecallIdentityAtEveryLevel) {
  const Corpus corpus = random_corpus(9, 60, {"cs", "ee", "me"});
  const auto instances = build_instances(corpus);
  const EvaluationReport r = evaluate(RandomRecommender(), corpus, instances);
  for (const auto& t : r.terms) {
    if (t.recall_diff) EXPECT_NEAR(*t.recall_diff, *t.recall_good - *t.recall_bad, 1e-12);
    EXPECT_LE(t.recommended, t.taken);
  }
  expect_identity(r.overall);
  for (Grouping g : {Grouping::Major, Grouping::GpaType, Grouping::AcademicLevel}) {
    for (const auto& row : group_breakdown(r.terms, g)) expect_identity(row.summary);
  }
}

TEST(GroupBreakdown, SingleGroupEqualsOverallAndWeightedMeans) {
  const Corpus one = random_corpus(4, 30, {"cs"});
  const auto inst1 = build_instances(one);
  const EvaluationReport r1 = evaluate(RandomRecommender(), one, inst1);
  const auto rows = group_breakdown(r1.terms, Grouping::Major);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].group, "cs");
  EXPECT_EQ(rows[0].summary.recall_good, r1.overall.recall_good);
  EXPECT_EQ(rows[0].summary.recall_diff, r1.overall.recall_diff);
  EXPECT_EQ(rows[0].summary.terms, r1.overall.terms);

  const Corpus two = random_corpus(5, 40, {"cs", "ee"});
  const auto inst2 = build_instances(two);
  const EvaluationReport r2 = evaluate(RandomRecommender(), two, inst2);
  const auto split = group_breakdown(r2.terms, Grouping::Major);
  ASSERT_EQ(split.size(), 2u);
  double weighted = 0.0;
  std::size_t weight = 0;
  for (const auto& row : split) {
    weighted += *row.summary.recall_good * static_cast<double>(row.summary.good_terms);
    weight += row.summary.good_terms;
  }
  EXPECT_EQ(weight, r2.overall.good_terms);
  EXPECT_NEAR(weighted / static_cast<double>(weight), *r2.overall.recall_good, 1e-12);
}

TEST(GroupBreakdown, EmptyGroupsAreOmitted) {
  TermEvaluation only_a;
  only_a.major = "cs";
  only_a.level = AcademicLevel::Junior;
  only_a.type = GpaType::A;
  only_a.actual_good = 1;
  only_a.recall_good = 1.0;
  TermEvaluation nothing;
  nothing.major = "ee";
  const std::vector<TermEvaluation> terms = {only_a, nothing};
  const auto rows = group_breakdown(terms, Grouping::Major);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].group, "cs");
  EXPECT_EQ(group_breakdown(terms, Grouping::AcademicLevel)[0].group, "junior");
}

TEST(GpaType, Thresholds) {
  EXPECT_EQ(gpa_type(3.667), GpaType::A);
  EXPECT_EQ(gpa_type(3.5), GpaType::B);
  EXPECT_EQ(gpa_type(2.667), GpaType::B);
  EXPECT_EQ(gpa_type(2.0), GpaType::C);
  EXPECT_EQ(gpa_type(3.0, GpaThresholds{3.0, 2.0}), GpaType::A);
}

TEST(Histogram, BinsCoverDeviationsInThirds) {
  const Corpus corpus = testing::corpus_from_csv(std::string(kHeader) +
                                                 "s1,a,1,B,cs,3\ns1,b,2,B+,cs,3\ns1,c,3,C,cs,3\n");
  const auto bins = grade_deviation_histogram(corpus.students);
  ASSERT_EQ(bins.size(), 25u);
  std::size_t total = 0;
  for (const auto& bin : bins) total += bin.count;
  EXPECT_EQ(total, 2u);
  // b: +0.333 over a mean of 3.0. c: 2.0 - 3.1665 = -1.1665, nearest third is -1.0.
  const auto bin_of = [&](double v) {
    for (const auto& bin : bins) {
      if (v >= bin.lo && v < bin.hi) return bin.count;
    }
    return std::size_t{99};
  };
  EXPECT_EQ(bin_of(1.0 / 3.0), 1u);
  EXPECT_EQ(bin_of(-1.0), 1u);
}

TEST(Reports, CsvAndJsonOutputs) {
  const Corpus corpus = random_corpus(6, 30, {"cs", "ee"});
  const auto instances = build_instances(corpus);
  const EvaluationReport r = evaluate(RandomRecommender(), corpus, instances);
  std::ostringstream terms;
  write_terms_csv(r, terms);
  const std::string text = terms.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), r.terms.size() + 1);

  std::ostringstream json;
  write_summary_json(r, json);
  const auto parsed = nlohmann::json::parse(json.str());
  EXPECT_EQ(parsed.at("backend"), "scrambled");
  const auto& overall = parsed.at("overall");
  EXPECT_NEAR(overall.at("recall_diff").get<double>(),
              overall.at("recall_good").get<double>() - overall.at("recall_bad").get<double>(), 1e-12);
  EXPECT_TRUE(parsed.contains("by_major"));
  EXPECT_TRUE(parsed.contains("by_gpa_type"));
  EXPECT_TRUE(parsed.contains("by_level"));
}

}  // namespace
}  // namespace garec
