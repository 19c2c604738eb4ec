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
#include <map>
#include <random>

#include "garec/errors.hpp"
#include "garec/svd_embed.hpp"
#include "support.hpp"

namespace garec {
namespace {

TrainingInstance instance(std::vector<int> context, std::vector<int> good, std::vector<int> bad) {
  TrainingInstance i;
  for (int c : context) i.context.push_back(course_at(static_cast<std::size_t>(c)));
  for (int c : good) i.good.push_back(course_at(static_cast<std::size_t>(c)));
  for (int c : bad) i.bad.push_back(course_at(static_cast<std::size_t>(c)));
  return i;
}

TEST(Cooccurrence, CountingExamples) {
  const std::vector<TrainingInstance> one = {instance({0}, {1}, {})};
  const Eigen::MatrixXd plus = build_cooccurrence(one, Variant::Plus, 3).dense();
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
  expected(0, 1) = 1.0;
  EXPECT_EQ(plus, expected);

  const std::vector<TrainingInstance> two = {instance({0}, {1}, {}), instance({0}, {}, {1})};
  EXPECT_DOUBLE_EQ(build_cooccurrence(two, Variant::PlusMinus, 3).dense()(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(build_cooccurrence(two, Variant::PlusPlus, 3).dense()(0, 1), 2.0);

  const std::vector<TrainingInstance> empty = {instance({0, 1}, {}, {})};
  EXPECT_TRUE(build_cooccurrence(empty, Variant::PlusPlus, 3).entries().empty());
}

TEST(Cooccurrence, RetakenContextCountsOncePerInstance) {
  const std::vector<TrainingInstance> train = {instance({0, 0}, {1}, {}), instance({0}, {1}, {})};
  EXPECT_DOUBLE_EQ(build_cooccurrence(train, Variant::Plus, 2).dense()(0, 1), 2.0);
}

TEST(Cooccurrence, PlusMinusIsPlusMinusBadOnlyByIndependentCount) {
  std::mt19937 gen(11);
  const int courses = 8;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<TrainingInstance> train;
    for (int s = 0; s < 20; ++s) {
      std::vector<int> ctx, good, bad;
      for (int c = 0; c < courses; ++c) {
        const unsigned r = gen() % 4;
        if (r == 0) ctx.push_back(c);
        if (r == 1) good.push_back(c);
        if (r == 2) bad.push_back(c);
      }
      train.push_back(instance(ctx, good, bad));
    }
    Eigen::MatrixXd n_good = Eigen::MatrixXd::Zero(courses, courses);
    Eigen::MatrixXd n_bad = Eigen::MatrixXd::Zero(courses, courses);
    for (const auto& i : train) {
      for (CourseId a : i.context) {
        for (CourseId b : i.good) n_good(static_cast<Eigen::Index>(index(a)), static_cast<Eigen::Index>(index(b))) += 1;
        for (CourseId b : i.bad) n_bad(static_cast<Eigen::Index>(index(a)), static_cast<Eigen::Index>(index(b))) += 1;
      }
    }
    EXPECT_EQ(build_cooccurrence(train, Variant::Plus, courses).dense(), n_good);
    EXPECT_EQ(build_cooccurrence(train, Variant::PlusMinus, courses).dense(), n_good - n_bad);
    EXPECT_EQ(build_cooccurrence(train, Variant::PlusPlus, courses).dense(), n_good + n_bad);
  }
}

TEST(L1Scale, Examples) {
  Eigen::MatrixXd m(3, 2);
  m << 2, 2, 3, -1, 0, 0;
  const Eigen::MatrixXd s = l1_scale_rows(m);
  EXPECT_DOUBLE_EQ(s(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(s(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(s(1, 0), 0.75);
  EXPECT_DOUBLE_EQ(s(1, 1), -0.25);
  EXPECT_DOUBLE_EQ(s(2, 0), 0.0);
  EXPECT_DOUBLE_EQ(s(2, 1), 0.0);
}

Eigen::MatrixXd reconstruct(const SvdEmbedding& e) { return e.previous * e.subsequent.transpose(); }

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = u(gen);
  }
  return m;
}

TEST(TruncatedSvd, DiagonalMatrix) {
  const Eigen::MatrixXd m = Eigen::Vector3d(3, 2, 1).asDiagonal();
  for (SvdMethod method : {SvdMethod::Dense, SvdMethod::Iterative}) {
    SvdOptions options;
    options.method = method;
    const SvdEmbedding e = truncated_svd(m, 2, options);
    ASSERT_EQ(e.dims(), 2u);
    EXPECT_NEAR(e.singular_values(0), 3.0, 1e-12);
    EXPECT_NEAR(e.singular_values(1), 2.0, 1e-12);
  }
}

TEST(TruncatedSvd, RankOneIsExact) {
  const Eigen::VectorXd u = random_matrix(6, 1, 1).col(0);
  const Eigen::VectorXd v = random_matrix(5, 1, 2).col(0);
  const Eigen::MatrixXd m = u * v.transpose();
  EXPECT_LE((reconstruct(truncated_svd(m, 1)) - m).norm(), 1e-8);
}

TEST(TruncatedSvd, FullRankMatchesJacobiOracle) {
  for (std::uint32_t seed = 1; seed <= 3; ++seed) {
    const Eigen::MatrixXd m = random_matrix(50, 50, seed);
    const SvdEmbedding e = truncated_svd(m, 50);
    EXPECT_LE((reconstruct(e) - m).norm(), 1e-8);
    const std::vector<double> oracle = testing::jacobi_singular_values(m);
    for (std::size_t i = 0; i < 50; ++i) EXPECT_NEAR(e.singular_values(static_cast<Eigen::Index>(i)), oracle[i], 1e-6);
  }
}

TEST(TruncatedSvd, IterativeMatchesOracleOnLargerMatrices) {
  const Eigen::MatrixXd m = l1_scale_rows(random_matrix(200, 200, 9).cwiseAbs());
  SvdOptions options;
  options.method = SvdMethod::Iterative;
  const SvdEmbedding e = truncated_svd(m, 10, options);
  const std::vector<double> oracle = testing::jacobi_singular_values(m);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(e.singular_values(static_cast<Eigen::Index>(i)), oracle[i], 1e-6);
  // Seeded and deterministic.
  const SvdEmbedding again = truncated_svd(m, 10, options);
  EXPECT_EQ(e.previous, again.previous);
}

TEST(TruncatedSvd, SqrtSplitMatchesTriplets) {
  const Eigen::MatrixXd m = random_matrix(12, 9, 4);
  const SvdEmbedding e = truncated_svd(m, 5);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd low = svd.matrixU().leftCols(5) * svd.singularValues().head(5).asDiagonal() *
                              svd.matrixV().leftCols(5).transpose();
  EXPECT_LE((reconstruct(e) - low).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(TruncatedSvd, LeftVectorSignConvention) {
  const SvdEmbedding e = truncated_svd(random_matrix(10, 10, 5), 4);
  for (Eigen::Index k = 0; k < 4; ++k) {
    const Eigen::VectorXd col = e.previous.col(k);
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    EXPECT_GE(col(arg), 0.0);
  }
}

TEST(TruncatedSvd, RankOutOfRangeIsConfigError) {
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_THROW(truncated_svd(m, 4), ConfigError);
  EXPECT_THROW(truncated_svd(m, 0), ConfigError);
}

SvdEmbedding hand_embedding() {
  SvdEmbedding e;
  e.previous.resize(4, 2);
  e.subsequent.resize(4, 2);
  e.previous << 1, 0, 0, 1, 1, 1, 0, 0;
  e.subsequent << 1, 1, 2, 2, 1, 1, -1, 0;
  e.singular_values = Eigen::Vector2d(1, 1);
  e.known = {1, 1, 1, 0};
  return e;
}

TEST(SvdRank, ProfileIsMeanOfKnownContext) {
  const SvdEmbedding e = hand_embedding();
  const std::vector<CourseId> a = {course_at(0)};
  EXPECT_EQ(svd_profile(e, a), Eigen::Vector2d(1, 0));
  const std::vector<CourseId> ab_unseen = {course_at(0), course_at(1), course_at(3)};
  EXPECT_EQ(svd_profile(e, ab_unseen), Eigen::Vector2d(0.5, 0.5));
  const std::vector<CourseId> unseen = {course_at(3)};
  EXPECT_THROW(svd_profile(e, unseen), DataError);
}

TEST(SvdRank, CollinearScaleAndTies) {
  const SvdEmbedding e = hand_embedding();
  const std::vector<CourseId> ctx = {course_at(0)};
  // S_1 = 2 S_0 and S_2 = S_0, so course 1 wins and 0 ties with 2.
  const std::vector<CourseId> cands = {course_at(2), course_at(0), course_at(1), course_at(3)};
  const auto ranked = svd_rank(e, ctx, cands);
  ASSERT_EQ(ranked.size(), 4u);
  EXPECT_EQ(ranked[0].course, course_at(1));
  EXPECT_EQ(ranked[1].course, course_at(0));
  EXPECT_EQ(ranked[2].course, course_at(2));
  EXPECT_DOUBLE_EQ(ranked[1].score, ranked[2].score);
  EXPECT_EQ(ranked[3].course, course_at(3));
  EXPECT_DOUBLE_EQ(ranked[3].score, 0.0);  // unseen candidate
}

TEST(SvdRank, InvariantUnderPositiveScaling) {
  SvdEmbedding e;
  e.previous = random_matrix(8, 3, 21);
  e.subsequent = random_matrix(8, 3, 22);
  e.singular_values = Eigen::Vector3d(1, 1, 1);
  e.known.assign(8, 1);
  const std::vector<CourseId> ctx = {course_at(1), course_at(2)};
  std::vector<CourseId> cands;
  for (std::size_t i = 0; i < 8; ++i) cands.push_back(course_at(i));
  const auto base = svd_rank(e, ctx, cands);
  SvdEmbedding scaled = e;
  scaled.subsequent *= 3.7;
  const auto other = svd_rank(scaled, ctx, cands);
  for (std::size_t i = 0; i < base.size(); ++i) EXPECT_EQ(base[i].course, other[i].course);
}

TEST(FitSvd, MarksKnownCourses) {
  const std::vector<TrainingInstance> train = {instance({0}, {1}, {2}), instance({1}, {0}, {})};
  const SvdEmbedding e = fit_svd(train, Variant::PlusMinus, 4, 2);
  EXPECT_EQ(e.known, (std::vector<std::uint8_t>{1, 1, 1, 0}));
  EXPECT_EQ(e.variant, Variant::PlusMinus);
}

}  // namespace
}  // namespace garec
