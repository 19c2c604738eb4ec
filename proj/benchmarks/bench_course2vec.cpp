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

#include "garec/corpus.hpp"
#include "garec/course2vec.hpp"
#include "garec/synth.hpp"

namespace {

struct Data {
  garec::Corpus corpus;
  std::vector<garec::TrainingInstance> train;
};

const Data& data() {
  static const Data d = [] {
    garec::SynthConfig sc;
    const garec::SynthCorpus synth = garec::generate(sc);
    Data out;
    out.corpus = garec::Corpus::build(garec::TranscriptFile{synth.records, 0}, synth.offerings);
    out.train = garec::split_by_time(garec::build_instances(out.corpus), 10, 12).train;
    return out;
  }();
  return d;
}

// One training epoch over the default synthetic corpus.
void BM_Course2vecEpoch(benchmark::State& state) {
  const Data& d = data();
  garec::TrainConfig config;
  config.epochs = 1;
  config.dims = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(garec::train_course2vec(d.train, d.corpus.courses.size(), config));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.train.size()));
}
BENCHMARK(BM_Course2vecEpoch)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace
