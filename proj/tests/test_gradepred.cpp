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
#include <random>
#include <string>

#include "garec/errors.hpp"
#include "garec/gradepred.hpp"
#include "support.hpp"

namespace garec {
namespace {

using Matrix = KnowledgeModel::Matrix;

KnowledgeModel random_knowledge(std::size_t courses, std::size_t k, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Matrix p(static_cast<Eigen::Index>(courses), static_cast<Eigen::Index>(k));
  Matrix r(static_cast<Eigen::Index>(courses), static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = u(gen);
  for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = u(gen);
  return KnowledgeModel(p, r, 2.9);
}

TEST(KnowledgeState, WeightedSumOfProvidedVectors) {
  const KnowledgeModel m = random_knowledge(6, 3, 1);
  const std::vector<PriorGrade> one = {{course_at(2), 4.0}};
  EXPECT_EQ(m.knowledge_state(one), Eigen::VectorXd(4.0 * m.provided().row(2).transpose()));
  const std::vector<PriorGrade> three = {{course_at(0), 3.333}, {course_at(4), 2.0}, {course_at(5), 3.667}};
  Eigen::VectorXd oracle = Eigen::VectorXd::Zero(3);
  for (Eigen::Index j = 0; j < 3; ++j) {
    oracle(j) = 3.333 * m.provided()(0, j) + 2.0 * m.provided()(4, j) + 3.667 * m.provided()(5, j);
  }
  EXPECT_LE((m.knowledge_state(three) - oracle).norm(), 1e-14);
  // An F contributes nothing.
  const std::vector<PriorGrade> with_f = {{course_at(2), 4.0}, {course_at(3), 0.0}};
  EXPECT_EQ(m.knowledge_state(with_f), m.knowledge_state(one));
  EXPECT_THROW(m.knowledge_state(std::vector<PriorGrade>{}), DataError);
}

TEST(PredictGrade, DegenerateAndHandComputedCases) {
  const KnowledgeModel zero(Matrix::Zero(3, 2), Matrix::Zero(3, 2), 3.1);
  EXPECT_DOUBLE_EQ(zero.predict_from_state(Eigen::Vector2d(1, 2), course_at(1)).value, 3.1);

  Matrix provided(3, 2), required(3, 2);
  provided << 1, 0, 0, 1, 0.5, 0.5;
  required << 0, 1, 0.2, -0.1, 0.3, 0.4;
  const KnowledgeModel m(provided, required, 2.0);
  // Orthogonal state and required vector.
  EXPECT_DOUBLE_EQ(m.predict_from_state(Eigen::Vector2d(1, 0), course_at(0)).value, 2.0);
  // State 4 * (1, 0) + 3 * (0, 1) = (4, 3); course 2: 4 * 0.3 + 3 * 0.4 + 2 = 4.4.
  const std::vector<PriorGrade> priors = {{course_at(0), 4.0}, {course_at(1), 3.0}};
  const GradePrediction g = m.predict_from_state(m.knowledge_state(priors), course_at(2));
  EXPECT_NEAR(g.value, 4.4, 1e-12);
  EXPECT_FALSE(g.fallback);
}

TEST(PredictGrade, UnknownCourseFallsBackFlagged) {
  KnowledgeModel m = random_knowledge(4, 2, 2);
  m.known = {1, 1, 1, 0};
  const GradePrediction g = m.predict_from_state(Eigen::Vector2d(1, 1), course_at(3));
  EXPECT_TRUE(g.fallback);
  EXPECT_DOUBLE_EQ(g.value, m.bias());
}

TEST(PredictGrade, LinearInState) {
  const KnowledgeModel m = random_knowledge(5, 4, 3);
  const Eigen::VectorXd state = Eigen::Vector4d(0.3, -1.2, 2.0, 0.7);
  for (double a : {-2.0, 0.5, 3.0}) {
    const double lhs = m.predict_from_state(a * state, course_at(2)).value - m.bias();
    const double rhs = a * (m.predict_from_state(state, course_at(2)).value - m.bias());
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}

// Random regression data over `courses` courses.
KnowledgeData random_data(std::size_t courses, std::uint32_t seed) {
  std::mt19937 gen(seed);
  KnowledgeData data;
  for (std::uint32_t p = 0; p < 12; ++p) {
    KnowledgeData::Prior prior;
    for (std::size_t c = 0; c < courses; ++c) {
      if (gen() % 3 == 0) prior.courses.push_back({course_at(c), kLetterPoints[gen() % kLetterCount]});
    }
    if (prior.courses.empty()) prior.courses.push_back({course_at(0), 3.0});
    data.priors.push_back(prior);
    for (int t = 0; t < 3; ++t) {
      data.targets.push_back({p, course_at(gen() % courses), kLetterPoints[gen() % kLetterCount]});
    }
  }
  return data;
}

TEST(KnowledgeGradient, MatchesCentralDifferences) {
  for (std::uint32_t seed = 1; seed <= 3; ++seed) {
    const KnowledgeModel m = random_knowledge(10, 4, seed);
    const KnowledgeData data = random_data(10, seed + 100);
    const double l2 = 0.01;
    const KnowledgeGradient g = knowledge_gradient(m, data, l2);
    const double eps = 1e-5;
    double worst = 0.0;
    auto compare = [&](double analytic, double numeric) {
      worst = std::max(worst, std::fabs(analytic - numeric) / std::max(std::fabs(numeric), 1e-3));
    };
    for (int which = 0; which < 2; ++which) {
      for (Eigen::Index i = 0; i < 10; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
          KnowledgeModel plus = m, minus = m;
          (which ? plus.required() : plus.provided())(i, j) += eps;
          (which ? minus.required() : minus.provided())(i, j) -= eps;
          const double numeric = (knowledge_loss(plus, data, l2) - knowledge_loss(minus, data, l2)) / (2 * eps);
          compare((which ? g.required : g.provided)(i, j), numeric);
        }
      }
    }
    KnowledgeModel plus = m, minus = m;
    plus.bias() += eps;
    minus.bias() -= eps;
    compare(g.bias, (knowledge_loss(plus, data, l2) - knowledge_loss(minus, data, l2)) / (2 * eps));
    EXPECT_LT(worst, 1e-4) << "seed " << seed;
  }
}

constexpr const char* kHeader = "student_id,course_id,term,grade_letter,major,credits\n";

TEST(FitKnowledge, ConstantGradesGiveConstantPredictions) {
  std::string csv = kHeader;
  for (int s = 0; s < 20; ++s) {
    for (int t = 1; t <= 4; ++t) {
      csv += "s" + std::to_string(s) + ",c" + std::to_string((s + t) % 6) + "," + std::to_string(t) + ",B,cs,3\n";
    }
  }
  const Corpus c = testing::corpus_from_csv(csv);
  const auto instances = build_instances(c);
  KnowledgeConfig config;
  config.k = 3;
  config.epochs = 300;
  config.l2 = 0.0;
  const KnowledgeFit fit = fit_knowledge(c.students, instances, c.courses.size(), config);
  EXPECT_NEAR(fit.model.bias(), 3.0, 0.01);
  EXPECT_LT(fit.train_rmse, 0.01);
}

TEST(FitKnowledge, PlantedPrerequisiteRaisesPrediction) {
  // q is an A after p and a C otherwise; filler courses keep states non-trivial.
  std::string csv = kHeader;
  for (int s = 0; s < 60; ++s) {
    const std::string id = "s" + std::to_string(s);
    const bool prepared = s % 2 == 0;
    csv += id + ",f" + std::to_string(s % 3) + ",1,B,cs,3\n";
    if (prepared) csv += id + ",p,1,B,cs,3\n";
    csv += id + ",q,2," + std::string(prepared ? "A" : "C") + ",cs,3\n";
  }
  const Corpus c = testing::corpus_from_csv(csv);
  const auto instances = build_instances(c);
  KnowledgeConfig config;
  config.k = 2;
  const KnowledgeFit fit = fit_knowledge(c.students, instances, c.courses.size(), config);
  const CourseId p = c.courses.at("p"), q = c.courses.at("q"), f = c.courses.at("f0");
  const std::vector<PriorGrade> with_p = {{f, 3.0}, {p, 3.0}};
  const std::vector<PriorGrade> without_p = {{f, 3.0}};
  const double a = fit.model.predict_from_state(fit.model.knowledge_state(with_p), q).value;
  const double b = fit.model.predict_from_state(fit.model.knowledge_state(without_p), q).value;
  EXPECT_GT(a, b + 0.5);
}

TEST(FitKnowledge, SeededAndValidated) {
  std::string csv = kHeader;
  for (int s = 0; s < 10; ++s) {
    csv += "s" + std::to_string(s) + ",a,1,A,cs,3\ns" + std::to_string(s) + ",b,2,B,cs,3\n";
  }
  const Corpus c = testing::corpus_from_csv(csv);
  const auto instances = build_instances(c);
  KnowledgeConfig config;
  config.epochs = 20;
  const auto a = fit_knowledge(c.students, instances, 2, config);
  const auto b = fit_knowledge(c.students, instances, 2, config);
  EXPECT_EQ(a.model.provided(), b.model.provided());
  config.k = 0;
  EXPECT_THROW(fit_knowledge(c.students, instances, 2, config), ConfigError);
  config = KnowledgeConfig{};
  config.learning_rate = 1e300;
  EXPECT_THROW(fit_knowledge(c.students, instances, 2, config), NumericError);
}

TEST(BiasBaseline, UnseenStudentAndCourseGetGlobalMean) {
  const std::vector<GradeObservation> train = {{"s1", course_at(0), 3.0}, {"s2", course_at(1), 2.0}};
  const BiasBaseline b = fit_bias_baseline(train, 3);
  EXPECT_DOUBLE_EQ(b.predict_pair("nobody", course_at(2)), 2.5);
}

TEST(BiasBaseline, StrongStudentIsPulledTowardFour) {
  std::vector<GradeObservation> train;
  for (int c = 0; c < 10; ++c) {
    train.push_back({"star", course_at(static_cast<std::size_t>(c)), 4.0});
    train.push_back({"mid", course_at(static_cast<std::size_t>(c)), 2.0});
  }
  const BiasBaseline b = fit_bias_baseline(train, 10, 5.0);
  // Closed form: mean 3, star offset 10 * 1 / (10 + 5); course offsets vanish.
  EXPECT_NEAR(b.student_offsets().at("star"), 10.0 / 15.0, 1e-12);
  for (double o : b.course_offsets()) EXPECT_NEAR(o, 0.0, 1e-12);
  EXPECT_GT(b.predict_pair("star", course_at(0)), b.global_mean());
  EXPECT_LT(b.predict_pair("star", course_at(0)), 4.0);
}

TEST(BiasBaseline, SingleObservationShrinksTowardMean) {
  std::vector<GradeObservation> train;
  for (int s = 0; s < 9; ++s) train.push_back({"s" + std::to_string(s), course_at(0), 3.0});
  train.push_back({"x", course_at(1), 1.0});
  const BiasBaseline b = fit_bias_baseline(train, 2);
  const double p = b.predict_pair("x", course_at(1));
  EXPECT_GT(p, 1.0);
  EXPECT_LT(p, b.global_mean());
}

TEST(BiasBaseline, PredictionsStayWithinOnePointOfObservedRange) {
  std::mt19937 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<GradeObservation> train;
    for (int i = 0; i < 40; ++i) {
      train.push_back({"s" + std::to_string(gen() % 6), course_at(gen() % 5), kLetterPoints[gen() % 6]});
    }
    const BiasBaseline b = fit_bias_baseline(train, 5, 0.0);
    for (const auto& o : train) {
      const double p = b.predict_pair(o.student, o.course);
      EXPECT_GE(p, b.lower());
      EXPECT_LE(p, b.upper());
    }
  }
}

}  // namespace
}  // namespace garec
