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

#include "garec/pipeline.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "garec/errors.hpp"
#include "garec/model_io.hpp"
#include "garec/synth.hpp"

namespace garec {

namespace fs = std::filesystem;

Dataset load_dataset(const RunConfig& config) {
  Dataset data;
  TranscriptFile transcripts;
  read_file(config.paths.corpus, [&](std::istream& in) { transcripts = read_transcript_csv(in); });
  if (config.paths.offerings.empty()) {
    data.corpus = Corpus::build(transcripts);
  } else {
    std::vector<OfferingRecord> offerings;
    read_file(config.paths.offerings, [&](std::istream& in) { offerings = read_offerings_csv(in); });
    data.corpus = Corpus::build(transcripts, offerings);
  }
  data.instances = build_instances(data.corpus);
  data.split = split_by_time(data.instances, config.split.train_end, config.split.valid_end);
  return data;
}

TrainedModels train_base(const RunConfig& config, const Dataset& data, std::span<const TrainingInstance> train) {
  TrainedModels m;
  m.backend = config.backend;
  const std::size_t n = data.corpus.courses.size();
  switch (config.backend.family) {
    case BackendFamily::Svd:
      m.svd = std::make_shared<SvdEmbedding>(fit_svd(train, config.backend.variant, n, config.d, config.svd_options()));
      break;
    case BackendFamily::Course2vec: {
      TrainResult r = train_course2vec(train, n, config.c2v_config());
      m.c2v = std::make_shared<EmbeddingModel>(std::move(r.model));
      m.c2v_log = std::move(r.log);
      break;
    }
    case BackendFamily::GroupPop:
      m.grppop = std::make_shared<GroupPopModel>(GroupPopModel::build(data.corpus.students, train, n));
      break;
    case BackendFamily::Dependency: {
      const auto histories = truncate_histories(data.corpus.students, config.split.train_end);
      DependencyConfig dc;
      dc.alpha = config.depgraph.alpha;
      dc.min_n = config.depgraph.min_n;
      m.graph = std::make_shared<DependencyGraph>(build_dependency_graph(histories, n, dc));
      break;
    }
  }
  return m;
}

void train_predictor(const RunConfig& config, const Dataset& data, std::span<const TrainingInstance> train,
                     TrainedModels& models) {
  models.predictor = config.hybrid.predictor;
  const std::size_t n = data.corpus.courses.size();
  switch (config.hybrid.predictor) {
    case PredictorKind::None:
      break;
    case PredictorKind::Knowledge:
      models.knowledge = std::make_shared<KnowledgeModel>(
          fit_knowledge(data.corpus.students, train, n, config.knowledge_config()).model);
      break;
    case PredictorKind::Bias:
      models.bias = std::make_shared<BiasBaseline>(
          fit_bias_baseline(grade_observations(data.corpus.students, train), n, config.bias_shrinkage));
      break;
  }
}

TrainedModels train_models(const RunConfig& config, const Dataset& data, std::span<const TrainingInstance> train) {
  TrainedModels m = train_base(config, data, train);
  train_predictor(config, data, train, m);
  return m;
}

std::shared_ptr<const Recommender> make_recommender(const RunConfig& config, const Dataset& data,
                                                    const TrainedModels& models) {
  std::shared_ptr<const Recommender> base;
  switch (models.backend.family) {
    case BackendFamily::Svd:
      base = std::make_shared<SvdRecommender>(models.svd);
      break;
    case BackendFamily::Course2vec:
      base = std::make_shared<Course2vecRecommender>(models.c2v);
      break;
    case BackendFamily::GroupPop:
      base = std::make_shared<GroupPopRecommender>(models.grppop, models.backend.variant);
      break;
    case BackendFamily::Dependency:
      base = std::make_shared<DependencyRecommender>(models.graph);
      break;
  }
  std::shared_ptr<const GradePredictor> grades;
  if (models.predictor == PredictorKind::Knowledge) grades = models.knowledge;
  if (models.predictor == PredictorKind::Bias) grades = models.bias;
  if (!grades) return base;
  return std::make_shared<HybridRecommender>(base, grades, config.hybrid_config(), &data.corpus.offerings);
}

std::string base_model_file(const BackendSpec& backend) { return backend.name() + ".model"; }

std::string predictor_model_file(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::Knowledge:
      return "knowledge.model";
    case PredictorKind::Bias:
      return "bias.model";
    case PredictorKind::None:
      break;
  }
  return {};
}

void save_models(const RunConfig& config, const Vocabulary& courses, const TrainedModels& models) {
  const fs::path dir = config.paths.model_dir;
  const fs::path base = dir / base_model_file(models.backend);
  auto save = [&](const fs::path& path, const auto& model) {
    write_file(path, [&](std::ostream& out) { save_model(model, courses, out); }, true);
  };
  switch (models.backend.family) {
    case BackendFamily::Svd:
      save(base, *models.svd);
      break;
    case BackendFamily::Course2vec:
      save(base, *models.c2v);
      write_file(dir / (models.backend.name() + ".log.csv"), [&](std::ostream& out) {
        out << std::setprecision(12) << "epoch,mean_objective,learning_rate\n";
        for (const auto& r : models.c2v_log) out << r.epoch << ',' << r.mean_objective << ',' << r.learning_rate << '\n';
      });
      break;
    case BackendFamily::GroupPop:
      save(base, *models.grppop);
      break;
    case BackendFamily::Dependency:
      save(base, *models.graph);
      write_file(dir / "depgraph_edges.csv", [&](std::ostream& out) { write_dependency_csv(*models.graph, courses, out); });
      break;
  }
  if (models.predictor == PredictorKind::Knowledge) save(dir / predictor_model_file(models.predictor), *models.knowledge);
  if (models.predictor == PredictorKind::Bias) save(dir / predictor_model_file(models.predictor), *models.bias);
}

TrainedModels load_models(const RunConfig& config, const Vocabulary& courses) {
  const fs::path dir = config.paths.model_dir;
  TrainedModels m;
  m.backend = config.backend;
  const fs::path base = dir / base_model_file(config.backend);
  if (!fs::exists(base)) throw DataError("model file " + base.string() + " not found; run `train` first");
  read_file(base, [&](std::istream& in) {
    switch (config.backend.family) {
      case BackendFamily::Svd:
        m.svd = std::make_shared<SvdEmbedding>(load_svd(in, courses));
        if (m.svd->variant != config.backend.variant) throw DataError(base.string() + ": variant mismatch");
        break;
      case BackendFamily::Course2vec:
        m.c2v = std::make_shared<EmbeddingModel>(load_course2vec(in, courses));
        if (m.c2v->variant != config.backend.variant) throw DataError(base.string() + ": variant mismatch");
        break;
      case BackendFamily::GroupPop:
        m.grppop = std::make_shared<GroupPopModel>(load_grouppop(in, courses));
        break;
      case BackendFamily::Dependency:
        m.graph = std::make_shared<DependencyGraph>(load_dependency(in, courses));
        break;
    }
  }, true);
  m.predictor = config.hybrid.predictor;
  if (m.predictor != PredictorKind::None) {
    const fs::path p = dir / predictor_model_file(m.predictor);
    if (!fs::exists(p)) throw DataError("model file " + p.string() + " not found; run `train` first");
    read_file(p, [&](std::istream& in) {
      if (m.predictor == PredictorKind::Knowledge) m.knowledge = std::make_shared<KnowledgeModel>(load_knowledge(in, courses));
      if (m.predictor == PredictorKind::Bias) m.bias = std::make_shared<BiasBaseline>(load_bias(in, courses));
    }, true);
  }
  return m;
}

std::vector<MajorSimilarity> degree_similarity_by_major(std::span<const StudentHistory> students, double lambda) {
  std::map<std::string, std::vector<DegreePlan>> plans;
  for (const auto& s : students) plans[s.major].push_back(degree_plan(s));
  std::vector<MajorSimilarity> rows;
  for (const auto& [major, list] : plans) {
    MajorSimilarity row{major, 0, 0.0};
    double total = 0.0;
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (std::size_t j = i + 1; j < list.size(); ++j) {
        if (auto sim = degree_similarity(list[i], list[j], lambda)) {
          total += *sim;
          ++row.pairs;
        }
      }
    }
    if (row.pairs == 0) continue;
    row.mean = total / static_cast<double>(row.pairs);
    rows.push_back(row);
  }
  return rows;
}

void write_similarity_csv(std::span<const MajorSimilarity> rows, std::ostream& out) {
  out << std::setprecision(12) << "major,pairs,mean_similarity\n";
  for (const auto& r : rows) out << r.major << ',' << r.pairs << ',' << r.mean << '\n';
}

std::vector<GridPoint> selection_grid(const RunConfig& config) {
  const auto family = config.backend.family;
  const bool uses_d = family == BackendFamily::Svd || family == BackendFamily::Course2vec;
  const bool uses_samples = family == BackendFamily::Course2vec;
  const bool uses_alpha = config.hybrid.predictor != PredictorKind::None;
  const std::vector<std::size_t> ds = uses_d ? config.select.d : std::vector<std::size_t>{config.d};
  const std::vector<std::size_t> ss = uses_samples ? config.select.samples : std::vector<std::size_t>{config.c2v.samples};
  const std::vector<double> as = uses_alpha ? config.select.alpha : std::vector<double>{config.hybrid.alpha};
  std::vector<GridPoint> grid;
  for (std::size_t d : ds) {
    for (std::size_t s : ss) {
      for (double a : as) grid.push_back({d, s, a, std::nullopt});
    }
  }
  return grid;
}

std::optional<std::size_t> best_grid_point(std::span<const GridPoint> points) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const GridPoint& p = points[i];
    if (!p.recall_diff) continue;
    if (!best) {
      best = i;
      continue;
    }
    const GridPoint& b = points[*best];
    if (*p.recall_diff != *b.recall_diff) {
      if (*p.recall_diff > *b.recall_diff) best = i;
      continue;
    }
    if (std::tie(p.d, p.samples, p.alpha) < std::tie(b.d, b.samples, b.alpha)) best = i;
  }
  return best;
}

void cmd_synth(const RunConfig& config, std::ostream& log) {
  SynthConfig sc = config.synth;
  sc.seed = config.seed;
  const SynthCorpus corpus = generate(sc);
  write_file(config.paths.corpus, [&](std::ostream& out) { write_transcript_csv(corpus.records, out); });
  if (!config.paths.offerings.empty()) {
    write_file(config.paths.offerings, [&](std::ostream& out) { write_offerings_csv(corpus.offerings, out); });
  }
  if (!config.paths.dag.empty()) {
    write_file(config.paths.dag, [&](std::ostream& out) { write_edges_csv(corpus.edges, out); });
  }
  log << "synth: " << corpus.records.size() << " enrollments, " << corpus.edges.size() << " planted edges -> "
      << config.paths.corpus << '\n';
}

namespace {

void report_split(const Dataset& data, std::ostream& log) {
  log << "corpus: " << data.corpus.students.size() << " students, " << data.corpus.courses.size() << " courses, "
      << data.split.train.size() << '/' << data.split.valid.size() << '/' << data.split.test.size()
      << " train/valid/test terms\n";
  for (const auto& w : data.split.warnings) log << "warning: " << w << '\n';
}

}  // namespace

void cmd_train(const RunConfig& config, std::ostream& log) {
  config.validate();
  const Dataset data = load_dataset(config);
  report_split(data, log);
  if (data.split.train.empty()) throw DataError("training split is empty; check split.train_end");
  const TrainedModels models = train_models(config, data, data.split.train);
  save_models(config, data.corpus.courses, models);
  log << "train: wrote " << (fs::path(config.paths.model_dir) / base_model_file(config.backend)).string();
  if (models.predictor != PredictorKind::None) {
    log << " and " << (fs::path(config.paths.model_dir) / predictor_model_file(models.predictor)).string();
  }
  log << '\n';
}

void cmd_recommend(const RunConfig& config, const std::string& student, int term, std::ostream& out) {
  config.validate();
  const Dataset data = load_dataset(config);
  const TrainedModels models = load_models(config, data.corpus.courses);
  const auto recommender = make_recommender(config, data, models);

  const auto it = std::lower_bound(data.corpus.students.begin(), data.corpus.students.end(), student,
                                   [](const StudentHistory& s, const std::string& id) { return s.id < id; });
  if (it == data.corpus.students.end() || it->id != student) throw DataError("unknown student '" + student + "'");
  const StudentHistory prefix = prefix_for_term(*it, term);
  const Query query = Query::at(prefix, prefix.terms.size() - 1);
  const Recommendation rec = recommend(*recommender, query, data.corpus.offerings, config.recommend.n);
  if (!rec.diagnostic.empty()) throw DataError(rec.diagnostic);

  out << std::setprecision(12) << "student_id,term,rank,course_id,score,backend\n";
  for (std::size_t r = 0; r < rec.courses.size(); ++r) {
    out << student << ',' << term << ',' << r + 1 << ',' << data.corpus.courses.name(rec.courses[r].course) << ','
        << rec.courses[r].score << ',' << recommender->name() << '\n';
  }
}

EvaluationReport cmd_evaluate(const RunConfig& config, std::ostream& log) {
  config.validate();
  const Dataset data = load_dataset(config);
  report_split(data, log);
  const TrainedModels models = load_models(config, data.corpus.courses);
  const auto recommender = make_recommender(config, data, models);
  const auto& instances = config.eval.split == "valid" ? data.split.valid : data.split.test;

  EvaluateOptions options;
  options.thresholds = {config.eval.gpa_a, config.eval.gpa_b};
  EvaluationReport report = evaluate(*recommender, data.corpus, instances, options);

  const fs::path dir = config.paths.report_dir;
  write_file(dir / "terms.csv", [&](std::ostream& out) { write_terms_csv(report, out); });
  write_file(dir / "summary.json", [&](std::ostream& out) { write_summary_json(report, out); });
  const std::pair<Grouping, const char*> groupings[] = {{Grouping::Major, "groups_major.csv"},
                                                        {Grouping::GpaType, "groups_gpa_type.csv"},
                                                        {Grouping::AcademicLevel, "groups_level.csv"}};
  for (const auto& [grouping, name] : groupings) {
    const auto rows = group_breakdown(report.terms, grouping);
    write_file(dir / name, [&](std::ostream& out) { write_groups_csv(rows, out); });
  }
  if (config.eval.emit_histogram) {
    const auto bins = grade_deviation_histogram(data.corpus.students);
    write_file(dir / "histogram.csv", [&](std::ostream& out) { write_histogram_csv(bins, out); });
  }
  if (config.eval.degree_similarity) {
    const auto rows = degree_similarity_by_major(data.corpus.students, config.eval.lambda);
    write_file(dir / "degree_similarity.csv", [&](std::ostream& out) { write_similarity_csv(rows, out); });
  }
  if (models.graph) {
    write_file(dir / "depgraph_edges.csv",
               [&](std::ostream& out) { write_dependency_csv(*models.graph, data.corpus.courses, out); });
  }

  const auto& o = report.overall;
  log << std::fixed << std::setprecision(4) << "evaluate " << report.backend << ": " << report.terms.size()
      << " terms";
  if (o.recall_good) log << ", Recall(good) " << *o.recall_good;
  if (o.recall_bad) log << ", Recall(bad) " << *o.recall_bad;
  if (o.recall_diff) log << ", Recall(diff) " << *o.recall_diff;
  log << '\n' << std::defaultfloat;
  return report;
}

RunConfig cmd_select(const RunConfig& config, std::ostream& log) {
  config.validate();
  const Dataset data = load_dataset(config);
  report_split(data, log);
  if (data.split.train.empty() || data.split.valid.empty()) {
    throw DataError("select needs nonempty train and validation splits");
  }
  std::vector<GridPoint> grid = selection_grid(config);

  // The grade predictor does not depend on the grid; fit it once.
  TrainedModels shared;
  train_predictor(config, data, data.split.train, shared);

  auto point_config = [&](const GridPoint& p) {
    RunConfig c = config;
    c.d = p.d;
    c.c2v.samples = p.samples;
    c.hybrid.alpha = p.alpha;
    return c;
  };
  auto run = [&](std::size_t i) {
    const RunConfig c = point_config(grid[i]);
    TrainedModels m = train_base(c, data, data.split.train);
    m.predictor = shared.predictor;
    m.knowledge = shared.knowledge;
    m.bias = shared.bias;
    const auto rec = make_recommender(c, data, m);
    grid[i].recall_diff = evaluate(*rec, data.corpus, data.split.valid).overall.recall_diff;
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.threads), grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
          try {
            run(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  const fs::path dir = config.paths.report_dir;
  write_file(dir / "select.csv", [&](std::ostream& out) {
    out << std::setprecision(12) << "d,samples,alpha,recall_diff\n";
    for (const auto& p : grid) {
      out << p.d << ',' << p.samples << ',' << p.alpha << ',';
      if (p.recall_diff) out << *p.recall_diff;
      out << '\n';
    }
  });
  const auto best = best_grid_point(grid);
  if (!best) throw DataError("select: no grid point produced a Recall(diff) on the validation split");
  const RunConfig chosen = point_config(grid[*best]);
  write_file(dir / "best.conf", [&](std::ostream& out) {
    out << "# selected on the validation split, Recall(diff) = " << std::setprecision(12) << *grid[*best].recall_diff
        << '\n';
    for (const char* key : {"backend", "hybrid.predictor", "model.d", "c2v.samples", "hybrid.alpha"}) {
      out << key << " = " << chosen.get(key) << '\n';
    }
  });
  log << "select: best of " << grid.size() << " points: d=" << chosen.d << " samples=" << chosen.c2v.samples
      << " alpha=" << chosen.hybrid.alpha << " Recall(diff)=" << *grid[*best].recall_diff << '\n';
  return chosen;
}

}  // namespace garec
