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
#include <string>
#include <string_view>
#include <vector>

#include "garec/course2vec.hpp"
#include "garec/gradepred.hpp"
#include "garec/ranker.hpp"
#include "garec/svd_embed.hpp"
#include "garec/synth.hpp"

namespace garec {

enum class BackendFamily : std::uint8_t { Svd, Course2vec, GroupPop, Dependency };

struct BackendSpec {
  BackendFamily family = BackendFamily::Svd;
  Variant variant = Variant::PlusMinus;  // unused for the dependency graph

  std::string name() const;  // "svd-plusminus", "depgraph", ...
};

// ConfigError for anything other than svd-*, c2v-*, grppop-* or depgraph.
BackendSpec parse_backend(std::string_view text);

enum class PredictorKind : std::uint8_t { None, Knowledge, Bias };

struct RunConfig {
  struct Paths {
    std::string corpus = "data/corpus.csv";
    std::string offerings = "data/offerings.csv";  // empty: derive from the transcripts
    std::string dag = "data/dag.csv";              // written by synth only
    std::string model_dir = "models";
    std::string report_dir = "reports";
  } paths;

  struct Split {
    int train_end = 10;
    int valid_end = 12;
  } split;

  std::uint64_t seed = 1;
  int threads = 1;
  BackendSpec backend;

  struct Hybrid {
    PredictorKind predictor = PredictorKind::None;
    double alpha = 0.5;
    StandardizeOver population = StandardizeOver::Candidates;
  } hybrid;

  std::size_t d = 20;  // SVD rank and Course2vec width
  SvdMethod svd_method = SvdMethod::Auto;

  struct C2v {
    std::size_t samples = 5;
    int freq_threshold = 20;
    int epochs = 50;
    double learning_rate = 0.025;
    bool full_denominator = false;
  } c2v;

  struct Knowledge {
    std::size_t k = 10;
    int epochs = 400;
    double learning_rate = 0.02;
    double l2 = 0.01;
    bool centered = false;
  } knowledge;

  double bias_shrinkage = kDefaultBiasShrinkage;

  struct Depgraph {
    double alpha = 0.05;
    std::size_t min_n = 10;
  } depgraph;

  struct Eval {
    std::string split = "test";  // or "valid"
    double lambda = 0.5;
    double gpa_a = 3.667;
    double gpa_b = 2.667;
    bool emit_histogram = false;
    bool degree_similarity = false;
  } eval;

  struct Recommend {
    std::size_t n = 5;
  } recommend;

  struct Select {
    std::vector<std::size_t> d = {10, 15, 20, 25, 30};
    std::vector<std::size_t> samples = {3, 5};
    std::vector<double> alpha = {0.1, 0.3, 0.5, 0.7, 0.9};
  } select;

  SynthConfig synth;

  // Sets one dotted key from its text value. ConfigError for unknown keys
  // and unparsable or out-of-range values.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  static const std::vector<std::string>& keys();

  void validate() const;

  TrainConfig c2v_config() const;
  KnowledgeConfig knowledge_config() const;
  SvdOptions svd_options() const;
  HybridConfig hybrid_config() const;
};

// "key = value" lines; '#' starts a comment; blank lines ignored. Later
// lines override earlier ones. ConfigError names the offending line.
void apply_config(RunConfig& config, std::istream& in);
RunConfig load_config(const std::string& path);

// Every key with its current value, in a stable order.
void dump_config(const RunConfig& config, std::ostream& out);

}  // namespace garec
