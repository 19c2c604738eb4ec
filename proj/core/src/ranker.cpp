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

#include "garec/ranker.hpp"

#include <algorithm>
#include <cmath>

#include "garec/errors.hpp"

namespace garec {

Query Query::at(const StudentHistory& student, std::size_t position) {
  if (position >= student.terms.size()) throw DataError("query position beyond the student's history");
  Query q;
  q.student = &student;
  q.position = position;
  q.term = student.terms[position].term;
  q.prior_mean = student.prior_mean[position].value_or(0.0);
  q.level = academic_level(student.prior_credits[position]);
  for (std::size_t p = 0; p < position; ++p) {
    for (const auto& e : student.terms[p].courses) {
      if (e.grade.counts_as_context()) q.context.push_back(e.course);
    }
  }
  std::sort(q.context.begin(), q.context.end());
  return q;
}

StudentHistory prefix_for_term(const StudentHistory& student, int term) {
  StudentHistory out;
  out.id = student.id;
  out.major = student.major;
  double sum = 0.0, credits = 0.0;
  std::size_t n = 0;
  for (const auto& t : student.terms) {
    if (t.term >= term) break;
    out.terms.push_back(t);
    out.prior_mean.push_back(n > 0 ? std::optional<double>(sum / static_cast<double>(n)) : std::nullopt);
    out.prior_credits.push_back(credits);
    for (const auto& e : t.courses) {
      sum += e.grade.points();
      credits += e.credits;
      ++n;
    }
  }
  out.terms.push_back(TermRecord{term, {}});
  out.prior_mean.push_back(n > 0 ? std::optional<double>(sum / static_cast<double>(n)) : std::nullopt);
  out.prior_credits.push_back(credits);
  return out;
}

namespace {

std::vector<double> scores_of(const std::vector<ScoredCourse>& ranked, std::span<const CourseId> candidates) {
  // ranked is a permutation of candidates; map back to candidate order.
  std::vector<double> out(candidates.size(), 0.0);
  std::vector<std::pair<CourseId, double>> by_course;
  by_course.reserve(ranked.size());
  for (const auto& r : ranked) by_course.emplace_back(r.course, r.score);
  std::sort(by_course.begin(), by_course.end());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto it = std::lower_bound(by_course.begin(), by_course.end(), candidates[i],
                               [](const std::pair<CourseId, double>& a, CourseId c) { return a.first < c; });
    if (it != by_course.end() && it->first == candidates[i]) out[i] = it->second;
  }
  return out;
}

}  // namespace

std::vector<double> SvdRecommender::score(const Query& query, std::span<const CourseId> candidates) const {
  return scores_of(svd_rank(*model_, query.context, candidates), candidates);
}

std::string SvdRecommender::name() const { return "svd-" + std::string(variant_name(model_->variant)); }

std::vector<double> Course2vecRecommender::score(const Query& query, std::span<const CourseId> candidates) const {
  return scores_of(c2v_rank(*model_, query.context, candidates), candidates);
}

std::string Course2vecRecommender::name() const { return "c2v-" + std::string(variant_name(model_->variant)); }

std::vector<double> GroupPopRecommender::score(const Query& query, std::span<const CourseId> candidates) const {
  return scores_of(grppop_rank(*model_, query.student->major, query.level, candidates, variant_), candidates);
}

std::string GroupPopRecommender::name() const { return "grppop-" + std::string(variant_name(variant_)); }

std::vector<double> DependencyRecommender::score(const Query& query, std::span<const CourseId> candidates) const {
  return scores_of(depgraph_rank(*graph_, query.context, candidates), candidates);
}

double hybrid_score(double g, double r, double alpha) {
  const double grade_part = g < 0.0 ? -std::pow(-g, alpha) : std::pow(g, alpha);
  return grade_part * std::pow(std::fabs(r), 1.0 - alpha) * (r > 0.0 ? 1.0 : -1.0);
}

std::vector<double> standardize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return out;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  const double sd = std::sqrt(var);
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mean) / sd;
  return out;
}

void HybridConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("hybrid alpha must lie in (0, 1)");
}

HybridRecommender::HybridRecommender(std::shared_ptr<const Recommender> base,
                                     std::shared_ptr<const GradePredictor> grades, HybridConfig config,
                                     const Offerings* offerings)
    : base_(std::move(base)), grades_(std::move(grades)), config_(config), offerings_(offerings) {
  config_.validate();
  if (config_.population == StandardizeOver::TermOfferings && offerings_ == nullptr) {
    throw ConfigError("hybrid: term-offering standardization needs the offerings table");
  }
}

std::string HybridRecommender::name() const { return std::string(grades_->kind()) + "+" + base_->name(); }

namespace {

// Standardized grade and relevance scores combined per candidate. A side with
// zero variance carries no ordering information and would zero every
// product, so the other side decides alone.
std::vector<double> combine(std::span<const double> g, std::span<const double> r, double alpha) {
  const auto gz = standardize(g);
  const auto rz = standardize(r);
  auto flat = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  };
  const bool g_flat = flat(gz), r_flat = flat(rz);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = r_flat ? gz[i] : g_flat ? rz[i] : hybrid_score(gz[i], rz[i], alpha);
  }
  return out;
}

}  // namespace

std::vector<double> HybridRecommender::score(const Query& query, std::span<const CourseId> candidates) const {
  std::vector<CourseId> population(candidates.begin(), candidates.end());
  if (config_.population == StandardizeOver::TermOfferings) {
    const auto offered = offerings_->at(query.term);
    population.assign(offered.begin(), offered.end());
    for (CourseId c : candidates) {
      if (!std::binary_search(offered.begin(), offered.end(), c)) population.push_back(c);
    }
  }
  const std::vector<double> r = base_->score(query, population);
  std::vector<double> g(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) {
    g[i] = grades_->predict(*query.student, query.position, population[i]).value;
  }
  const std::vector<double> combined = combine(g, r, config_.alpha);
  if (config_.population == StandardizeOver::Candidates) return combined;

  std::vector<double> out(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto slot = static_cast<std::size_t>(std::find(population.begin(), population.end(), candidates[i]) -
                                               population.begin());
    out[i] = combined[slot];
  }
  return out;
}

std::vector<ScoredCourse> hybrid_rank(const Recommender& base, const GradePredictor& grades, const Query& query,
                                      std::span<const CourseId> candidates, double alpha) {
  HybridConfig{alpha}.validate();
  const std::vector<double> r = base.score(query, candidates);
  std::vector<double> g(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    g[i] = grades.predict(*query.student, query.position, candidates[i]).value;
  }
  return rank_scores(candidates, combine(g, r, alpha));
}

Recommendation recommend(const Recommender& backend, const Query& query, const Offerings& offerings, std::size_t n) {
  if (n < 1) throw ConfigError("recommend: n must be >= 1");
  Recommendation out;
  if (query.student->courses_before(query.position) < kMinPriorCourses) {
    out.diagnostic = "fewer than " + std::to_string(kMinPriorCourses) + " prior courses";
    return out;
  }
  const auto candidates = eligible_candidates(*query.student, query.position, offerings);
  if (candidates.empty()) {
    out.diagnostic = "no eligible candidates in term " + std::to_string(query.term);
    return out;
  }
  const auto scores = backend.score(query, candidates);
  out.courses = rank_scores(candidates, scores);
  if (out.courses.size() > n) out.courses.resize(n);
  return out;
}

}  // namespace garec
