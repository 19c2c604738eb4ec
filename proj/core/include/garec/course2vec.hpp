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
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "garec/corpus.hpp"
#include "garec/ranking.hpp"

namespace garec {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Log-linear previous -> subsequent course model. `input` holds a course's
// vector when it appears in a context, `output` its vector as a prediction
// target. Both are |C| x d.
struct EmbeddingModel {
  Variant variant = Variant::Plus;
  RowMatrix input;
  RowMatrix output;
  std::vector<std::uint8_t> known;  // course seen in training

  std::size_t dims() const { return static_cast<std::size_t>(input.cols()); }
  std::size_t courses() const { return static_cast<std::size_t>(input.rows()); }
};

struct TrainConfig {
  Variant variant = Variant::PlusMinus;
  std::size_t dims = 20;
  // Minimum number of non-target courses in each step's softmax denominator.
  std::size_t samples = 5;
  // Relations seen fewer times than this join a step's denominator with
  // probability freq / threshold.
  int freq_threshold = 20;
  int epochs = 50;
  double learning_rate = 0.025;
  std::uint64_t seed = 1;
  double clip_norm = 5.0;
  // Every known course in every denominator (exact restricted softmax).
  bool full_denominator = false;

  void validate() const;  // ConfigError on out-of-range values
};

struct EpochRecord {
  int epoch = 0;
  double mean_objective = 0.0;  // mean signed log-probability over the epoch's steps
  double learning_rate = 0.0;   // rate at the last step of the epoch
};

struct TrainResult {
  EmbeddingModel model;
  std::vector<EpochRecord> log;
};

using EpochObserver = std::function<void(const EpochRecord&, const EmbeddingModel&)>;

TrainResult train_course2vec(std::span<const TrainingInstance> train, std::size_t courses, const TrainConfig& config,
                             const EpochObserver& observer = {});

// Average of input rows over the known context courses (one term per take).
// DataError when none is known.
Eigen::VectorXd context_profile(const EmbeddingModel& model, std::span<const CourseId> context);

// Softmax over all |C| output vectors, evaluated with max subtraction.
double softmax_prob(const EmbeddingModel& model, const Eigen::VectorXd& profile, CourseId target);

std::vector<ScoredCourse> c2v_rank(const EmbeddingModel& model, std::span<const CourseId> context,
                                   std::span<const CourseId> candidates);

// Gradient of sign * log p(target | context) where p is the softmax over
// `denominator` (which must contain the target, no duplicates).
struct StepGradient {
  double objective = 0.0;
  std::vector<double> probabilities;  // aligned with the denominator
  std::vector<std::pair<CourseId, Eigen::VectorXd>> input;   // unique context courses
  std::vector<std::pair<CourseId, Eigen::VectorXd>> output;  // denominator courses
};

StepGradient step_gradient(const EmbeddingModel& model, std::span<const CourseId> context,
                           std::span<const CourseId> denominator, CourseId target, double sign);

// Signed log-likelihood of the training targets with every known course in
// the denominator: good targets count +log p, bad targets -log p under
// plusminus and are ignored under plus; plusplus counts every target as good.
double full_objective(const EmbeddingModel& model, std::span<const TrainingInstance> train);

}  // namespace garec
