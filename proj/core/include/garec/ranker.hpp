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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "garec/baselines.hpp"
#include "garec/corpus.hpp"
#include "garec/course2vec.hpp"
#include "garec/gradepred.hpp"
#include "garec/ranking.hpp"
#include "garec/svd_embed.hpp"

namespace garec {

// A student about to start the term at `position` of their history.
struct Query {
  const StudentHistory* student = nullptr;
  std::size_t position = 0;
  int term = 0;
  std::vector<CourseId> context;  // prior takes above D+
  double prior_mean = 0.0;
  AcademicLevel level = AcademicLevel::Freshman;

  static Query at(const StudentHistory& student, std::size_t position);
};

// The student's history before `term`, followed by an empty record for
// `term`, so that a query can be issued for a term not taken yet.
StudentHistory prefix_for_term(const StudentHistory& student, int term);

class Recommender {
 public:
  virtual ~Recommender() = default;
  // One score per candidate, higher is better.
  virtual std::vector<double> score(const Query& query, std::span<const CourseId> candidates) const = 0;
  virtual std::string name() const = 0;
};

class SvdRecommender final : public Recommender {
 public:
  explicit SvdRecommender(std::shared_ptr<const SvdEmbedding> model) : model_(std::move(model)) {}
  std::vector<double> score(const Query& query, std::span<const CourseId> candidates) const override;
  std::string name() const override;

 private:
  std::shared_ptr<const SvdEmbedding> model_;
};

class Course2vecRecommender final : public Recommender {
 public:
  explicit Course2vecRecommender(std::shared_ptr<const EmbeddingModel> model) : model_(std::move(model)) {}
  std::vector<double> score(const Query& query, std::span<const CourseId> candidates) const override;
  std::string name() const override;

 private:
  std::shared_ptr<const EmbeddingModel> model_;
};

class GroupPopRecommender final : public Recommender {
 public:
  GroupPopRecommender(std::shared_ptr<const GroupPopModel> model, Variant variant)
      : model_(std::move(model)), variant_(variant) {}
  std::vector<double> score(const Query& query, std::span<const CourseId> candidates) const override;
  std::string name() const override;

 private:
  std::shared_ptr<const GroupPopModel> model_;
  Variant variant_;
};

class DependencyRecommender final : public Recommender {
 public:
  explicit DependencyRecommender(std::shared_ptr<const DependencyGraph> graph) : graph_(std::move(graph)) {}
  std::vector<double> score(const Query& query, std::span<const CourseId> candidates) const override;
  std::string name() const override { return "depgraph"; }

 private:
  std::shared_ptr<const DependencyGraph> graph_;
};

// Signed-power combination sign(g)|g|^alpha * sign(r)|r|^(1-alpha), with
// sign(r) = -1 for r <= 0. Identical to g^alpha |r|^(1-alpha) sign(r) when g >= 0.
double hybrid_score(double g, double r, double alpha);

// Zero mean, unit population variance; all zeros when the values are constant.
std::vector<double> standardize(std::span<const double> values);

enum class StandardizeOver : std::uint8_t {
  Candidates,     // the candidate set of the query
  TermOfferings,  // every course offered in the query term
};

struct HybridConfig {
  double alpha = 0.5;
  StandardizeOver population = StandardizeOver::Candidates;

  void validate() const;  // 0 < alpha < 1
};

class HybridRecommender final : public Recommender {
 public:
  // `offerings` is only consulted for StandardizeOver::TermOfferings.
  HybridRecommender(std::shared_ptr<const Recommender> base, std::shared_ptr<const GradePredictor> grades,
                    HybridConfig config, const Offerings* offerings = nullptr);
  std::vector<double> score(const Query& query, std::span<const CourseId> candidates) const override;
  std::string name() const override;

 private:
  std::shared_ptr<const Recommender> base_;
  std::shared_ptr<const GradePredictor> grades_;
  HybridConfig config_;
  const Offerings* offerings_;
};

// Both score vectors are standardized over the candidates and combined with
// hybrid_score. When one of them is constant, the other decides alone.
std::vector<ScoredCourse> hybrid_rank(const Recommender& base, const GradePredictor& grades, const Query& query,
                                      std::span<const CourseId> candidates, double alpha);

struct Recommendation {
  std::vector<ScoredCourse> courses;  // at most n, best first
  std::string diagnostic;             // why the list is empty, if it is
};

// Top-n over the eligible candidates of the query term. Queries for students
// with fewer than three prior courses, or without eligible candidates,
// return an empty list with a diagnostic.
Recommendation recommend(const Recommender& backend, const Query& query, const Offerings& offerings, std::size_t n);

}  // namespace garec
