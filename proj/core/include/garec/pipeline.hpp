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

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "garec/baselines.hpp"
#include "garec/config.hpp"
#include "garec/corpus.hpp"
#include "garec/course2vec.hpp"
#include "garec/eval.hpp"
#include "garec/gradepred.hpp"
#include "garec/ranker.hpp"
#include "garec/svd_embed.hpp"

namespace garec {

struct Dataset {
  Corpus corpus;
  std::vector<TrainingInstance> instances;
  InstanceSplit split;
};

// Reads paths.corpus (and paths.offerings when set), labels and splits.
Dataset load_dataset(const RunConfig& config);

// Whatever the configured backend and predictor need; unused members stay
// null.
struct TrainedModels {
  BackendSpec backend;
  std::shared_ptr<const SvdEmbedding> svd;
  std::shared_ptr<const EmbeddingModel> c2v;
  std::vector<EpochRecord> c2v_log;
  std::shared_ptr<const GroupPopModel> grppop;
  std::shared_ptr<const DependencyGraph> graph;
  PredictorKind predictor = PredictorKind::None;
  std::shared_ptr<const KnowledgeModel> knowledge;
  std::shared_ptr<const BiasBaseline> bias;
};

TrainedModels train_base(const RunConfig& config, const Dataset& data, std::span<const TrainingInstance> train);
void train_predictor(const RunConfig& config, const Dataset& data, std::span<const TrainingInstance> train,
                     TrainedModels& models);
TrainedModels train_models(const RunConfig& config, const Dataset& data, std::span<const TrainingInstance> train);

// Base recommender, wrapped in the hybrid when a predictor is configured.
std::shared_ptr<const Recommender> make_recommender(const RunConfig& config, const Dataset& data,
                                                    const TrainedModels& models);

// Model files live in paths.model_dir, named after the backend and predictor.
std::string base_model_file(const BackendSpec& backend);
std::string predictor_model_file(PredictorKind kind);
void save_models(const RunConfig& config, const Vocabulary& courses, const TrainedModels& models);
// DataError when a file is missing or was trained on another vocabulary.
TrainedModels load_models(const RunConfig& config, const Vocabulary& courses);

// One row per pair of students in the same major with a defined similarity
// summary: major, pairs, mean.
struct MajorSimilarity {
  std::string major;
  std::size_t pairs = 0;
  double mean = 0.0;
};
std::vector<MajorSimilarity> degree_similarity_by_major(std::span<const StudentHistory> students, double lambda);
void write_similarity_csv(std::span<const MajorSimilarity> rows, std::ostream& out);

struct GridPoint {
  std::size_t d = 0;
  std::size_t samples = 0;
  double alpha = 0.0;
  std::optional<double> recall_diff;
};

// Axes that do not apply to the configured backend collapse to the
// configured value.
std::vector<GridPoint> selection_grid(const RunConfig& config);

// Highest Recall(diff); ties go to the smallest d, then samples, then alpha.
// Points without a value never win. nullopt when none has a value.
std::optional<std::size_t> best_grid_point(std::span<const GridPoint> points);

// Commands. Each reads and writes the paths named in the config.
void cmd_synth(const RunConfig& config, std::ostream& log);
void cmd_train(const RunConfig& config, std::ostream& log);
// CSV rows student_id,term,rank,course_id,score,backend.
void cmd_recommend(const RunConfig& config, const std::string& student, int term, std::ostream& out);
EvaluationReport cmd_evaluate(const RunConfig& config, std::ostream& log);
// Writes select.csv and best.conf to the report directory; returns the
// winning configuration.
RunConfig cmd_select(const RunConfig& config, std::ostream& log);

}  // namespace garec
