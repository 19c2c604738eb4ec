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

#include <sstream>

#include "garec/errors.hpp"
#include "garec/model_io.hpp"
#include "garec/synth.hpp"

namespace garec {
namespace {

struct Fixture {
  Corpus corpus;
  std::vector<TrainingInstance> instances;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    SynthConfig config;
    config.majors = 1;
    config.students = 80;
    const SynthCorpus synth = generate(config);
    std::ostringstream t, o;
    write_transcript_csv(synth.records, t);
    write_offerings_csv(synth.offerings, o);
    std::istringstream ti(t.str()), oi(o.str());
    Fixture out{parse_transcripts(ti, oi), {}};
    out.instances = build_instances(out.corpus);
    return out;
  }();
  return f;
}

template <class Model>
std::string bytes_of(const Model& m) {
  std::ostringstream out(std::ios::binary);
  save_model(m, fixture().corpus.courses, out);
  return out.str();
}

TEST(ModelIo, SvdRoundTrip) {
  const auto& f = fixture();
  const SvdEmbedding m = fit_svd(f.instances, Variant::PlusMinus, f.corpus.courses.size(), 5);
  const std::string bytes = bytes_of(m);
  std::istringstream in(bytes);
  const SvdEmbedding back = load_svd(in, f.corpus.courses);
  EXPECT_EQ(back.previous, m.previous);
  EXPECT_EQ(back.subsequent, m.subsequent);
  EXPECT_EQ(back.singular_values, m.singular_values);
  EXPECT_EQ(back.known, m.known);
  EXPECT_EQ(back.variant, Variant::PlusMinus);
  EXPECT_EQ(bytes_of(back), bytes);
}

TEST(ModelIo, Course2vecRoundTrip) {
  const auto& f = fixture();
  TrainConfig config;
  config.dims = 4;
  config.epochs = 2;
  const EmbeddingModel m = train_course2vec(f.instances, f.corpus.courses.size(), config).model;
  std::istringstream in(bytes_of(m));
  const EmbeddingModel back = load_course2vec(in, f.corpus.courses);
  EXPECT_EQ(back.input, m.input);
  EXPECT_EQ(back.output, m.output);
  EXPECT_EQ(back.known, m.known);
  EXPECT_EQ(bytes_of(back), bytes_of(m));
}

TEST(ModelIo, PredictorRoundTrips) {
  const auto& f = fixture();
  KnowledgeConfig kc;
  kc.k = 3;
  kc.epochs = 5;
  const KnowledgeModel k = fit_knowledge(f.corpus.students, f.instances, f.corpus.courses.size(), kc).model;
  std::istringstream kin(bytes_of(k));
  const KnowledgeModel kb = load_knowledge(kin, f.corpus.courses);
  EXPECT_EQ(kb.provided(), k.provided());
  EXPECT_EQ(kb.required(), k.required());
  EXPECT_EQ(kb.bias(), k.bias());
  EXPECT_EQ(kb.known, k.known);

  const auto obs = grade_observations(f.corpus.students, f.instances);
  const BiasBaseline b = fit_bias_baseline(obs, f.corpus.courses.size());
  std::istringstream bin(bytes_of(b));
  const BiasBaseline bb = load_bias(bin, f.corpus.courses);
  EXPECT_EQ(bb.global_mean(), b.global_mean());
  EXPECT_EQ(bb.student_offsets(), b.student_offsets());
  EXPECT_EQ(bb.course_offsets(), b.course_offsets());
  EXPECT_EQ(bytes_of(bb), bytes_of(b));
}

TEST(ModelIo, BaselineRoundTrips) {
  const auto& f = fixture();
  const GroupPopModel g = GroupPopModel::build(f.corpus.students, f.instances, f.corpus.courses.size());
  std::istringstream gin(bytes_of(g));
  const GroupPopModel gb = load_grouppop(gin, f.corpus.courses);
  ASSERT_EQ(gb.groups().size(), g.groups().size());
  EXPECT_EQ(bytes_of(gb), bytes_of(g));

  const DependencyGraph d = build_dependency_graph(f.corpus.students, f.corpus.courses.size(), {0.05, 5});
  std::istringstream din(bytes_of(d));
  const DependencyGraph db = load_dependency(din, f.corpus.courses);
  EXPECT_EQ(db.tested().size(), d.tested().size());
  EXPECT_EQ(db.edges().size(), d.edges().size());
  EXPECT_EQ(bytes_of(db), bytes_of(d));
}

TEST(ModelIo, MismatchesAreDataErrors) {
  const auto& f = fixture();
  const SvdEmbedding m = fit_svd(f.instances, Variant::Plus, f.corpus.courses.size(), 3);
  const std::string bytes = bytes_of(m);

  std::vector<std::string> names = f.corpus.courses.names();
  names.back() += "x";
  const Vocabulary other = Vocabulary::from_names(names);
  std::istringstream wrong_vocab(bytes);
  try {
    load_svd(wrong_vocab, other);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(f.corpus.courses.names().back()), std::string::npos);
  }

  std::istringstream wrong_kind(bytes);
  EXPECT_THROW(load_course2vec(wrong_kind, f.corpus.courses), DataError);

  std::istringstream truncated(bytes.substr(0, bytes.size() - 9));
  EXPECT_THROW(load_svd(truncated, f.corpus.courses), DataError);

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::istringstream magic(bad_magic);
  EXPECT_THROW(read_model_header(magic), DataError);

  std::istringstream header(bytes);
  const ModelHeader h = read_model_header(header);
  EXPECT_EQ(h.kind, ModelKind::Svd);
  EXPECT_EQ(h.courses, f.corpus.courses.names());
}

TEST(ModelIo, MissingFileIsDataError) {
  EXPECT_THROW(read_file("/nonexistent/garec/model.bin", [](std::istream&) {}), DataError);
}

}  // namespace
}  // namespace garec
