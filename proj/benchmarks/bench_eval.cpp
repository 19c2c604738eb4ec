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

#include <benchmark/benchmark.h>

#include <memory>

#include "garec/eval.hpp"
#include "garec/ranker.hpp"
#include "garec/svd_embed.hpp"
#include "garec/synth.hpp"

namespace {

// Full evaluation pass of an SVD(+-) model over the test split.
void BM_EvaluateSvd(benchmark::State& state) {
  garec::SynthConfig sc;
  sc.students = static_cast<int>(state.range(0));
  const garec::SynthCorpus synth = garec::generate(sc);
  const garec::Corpus corpus = garec::Corpus::build(garec::TranscriptFile{synth.records, 0}, synth.offerings);
  const garec::InstanceSplit split = garec::split_by_time(garec::build_instances(corpus), 10, 12);
  auto model = std::make_shared<garec::SvdEmbedding>(
      garec::fit_svd(split.train, garec::Variant::PlusMinus, corpus.courses.size(), 20));
  const garec::SvdRecommender rec(model);
  for (auto _ : state) benchmark::DoNotOptimize(garec::evaluate(rec, corpus, split.test));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(split.test.size()));
}
BENCHMARK(BM_EvaluateSvd)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
