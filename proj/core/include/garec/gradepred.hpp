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

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "garec/corpus.hpp"

namespace garec {

struct GradePrediction {
  double value = 0.0;   // nominally in [0, 4], not clamped
  bool fallback = false;  // course unknown to the model; value is its baseline
};

// Predicted grade of `course` for the student about to start term `position`.
class GradePredictor {
 public:
  virtual ~GradePredictor() = default;
  virtual GradePrediction predict(const StudentHistory& student, std::size_t position, CourseId course) const = 0;
  virtual std::string_view kind() const = 0;
};

using PriorGrade = std::pair<CourseId, double>;

// Every course taken before `position` with its numeric grade.
std::vector<PriorGrade> prior_grades(const StudentHistory& student, std::size_t position);

// Knowledge-state regression: a student's state is the grade-weighted sum of
// the "provided" vectors of the courses they took; the predicted grade in a
// course is that state dotted with the course's "required" vector plus a
// global bias.
class KnowledgeModel final : public GradePredictor {
 public:
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  KnowledgeModel() = default;
  KnowledgeModel(Matrix provided, Matrix required, double bias, bool centered = false);

  // DataError when `priors` is empty.
  Eigen::VectorXd knowledge_state(std::span<const PriorGrade> priors) const;
  GradePrediction predict_from_state(const Eigen::VectorXd& state, CourseId course) const;

  GradePrediction predict(const StudentHistory& student, std::size_t position, CourseId course) const override;
  std::string_view kind() const override { return "knowledge"; }

  const Matrix& provided() const { return provided_; }
  const Matrix& required() const { return required_; }
  Matrix& provided() { return provided_; }
  Matrix& required() { return required_; }
  double bias() const { return bias_; }
  double& bias() { return bias_; }
  bool centered() const { return centered_; }
  std::size_t dims() const { return static_cast<std::size_t>(provided_.cols()); }
  std::size_t courses() const { return static_cast<std::size_t>(provided_.rows()); }

  std::vector<std::uint8_t> known;  // empty means every course is known

 private:
  Matrix provided_;
  Matrix required_;
  double bias_ = 0.0;
  bool centered_ = false;
};

struct KnowledgeConfig {
  std::size_t k = 10;
  int epochs = 400;
  double learning_rate = 0.02;  // Adam step size
  double l2 = 0.01;
  std::uint64_t seed = 1;
  // Weight prior courses by (grade - prior mean) instead of the raw grade.
  bool centered_grades = false;

  void validate() const;
};

// Flattened regression data: one row per (train instance, target course).
struct KnowledgeData {
  struct Prior {
    std::vector<PriorGrade> courses;  // weights already applied (raw or centered)
  };
  struct Target {
    std::uint32_t prior;  // index into priors
    CourseId course;
    double grade;
  };
  std::vector<Prior> priors;
  std::vector<Target> targets;
};

KnowledgeData build_knowledge_data(std::span<const StudentHistory> students,
                                   std::span<const TrainingInstance> instances, bool centered_grades);

// Mean squared error plus l2 * (|provided|^2 + |required|^2).
double knowledge_loss(const KnowledgeModel& model, const KnowledgeData& data, double l2);

struct KnowledgeGradient {
  KnowledgeModel::Matrix provided;
  KnowledgeModel::Matrix required;
  double bias = 0.0;
};

KnowledgeGradient knowledge_gradient(const KnowledgeModel& model, const KnowledgeData& data, double l2);

struct KnowledgeFit {
  KnowledgeModel model;
  double train_rmse = 0.0;
};

KnowledgeFit fit_knowledge(std::span<const StudentHistory> students, std::span<const TrainingInstance> train,
                           std::size_t courses, const KnowledgeConfig& config);

struct GradeObservation {
  std::string student;
  CourseId course;
  double grade = 0.0;
};

// Target-term grades of the given instances.
std::vector<GradeObservation> grade_observations(std::span<const StudentHistory> students,
                                                 std::span<const TrainingInstance> instances);

// Global mean plus shrunken student and course offsets. Offsets are fit in
// one pass (students, then courses on the residual) with `shrinkage`
// pseudo-counts pulling each toward zero. Predictions are clipped to one
// grade point beyond the observed training range.
class BiasBaseline final : public GradePredictor {
 public:
  BiasBaseline() = default;
  BiasBaseline(double global_mean, std::unordered_map<std::string, double> student_offsets,
               std::vector<double> course_offsets, double lo, double hi);

  double predict_pair(std::string_view student, CourseId course) const;
  GradePrediction predict(const StudentHistory& student, std::size_t position, CourseId course) const override;
  std::string_view kind() const override { return "bias"; }

  double global_mean() const { return global_mean_; }
  const std::unordered_map<std::string, double>& student_offsets() const { return student_offsets_; }
  const std::vector<double>& course_offsets() const { return course_offsets_; }
  double lower() const { return lo_; }
  double upper() const { return hi_; }

 private:
  double global_mean_ = 0.0;
  std::unordered_map<std::string, double> student_offsets_;
  std::vector<double> course_offsets_;
  double lo_ = 0.0;
  double hi_ = 4.0;
};

inline constexpr double kDefaultBiasShrinkage = 5.0;

BiasBaseline fit_bias_baseline(std::span<const GradeObservation> train, std::size_t courses,
                               double shrinkage = kDefaultBiasShrinkage);

}  // namespace garec
