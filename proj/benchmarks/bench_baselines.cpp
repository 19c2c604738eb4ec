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

#include <random>
#include <vector>

#include "garec/baselines.hpp"
#include "garec/grade.hpp"
#include "garec/synth.hpp"

namespace {

std::vector<double> letters(std::size_t n, std::mt19937_64& gen) {
  std::vector<double> v(n);
  for (auto& x : v) x = garec::kLetterPoints[gen() % 7];
  return v;
}

void BM_MannWhitney(benchmark::State& state, garec::MannWhitneyMethod method) {
  std::mt19937_64 gen(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = letters(n, gen), b = letters(n, gen);
  for (auto _ : state) benchmark::DoNotOptimize(garec::mann_whitney_u(a, b, method));
}
BENCHMARK_CAPTURE(BM_MannWhitney, exact, garec::MannWhitneyMethod::Exact)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK_CAPTURE(BM_MannWhitney, normal, garec::MannWhitneyMethod::Normal)->Arg(8)->Arg(64)->Arg(512);

void BM_DependencyGraph(benchmark::State& state) {
  garec::SynthConfig sc;
  sc.students = static_cast<int>(state.range(0));
  const garec::SynthCorpus synth = garec::generate(sc);
  const garec::Corpus corpus = garec::Corpus::build(garec::TranscriptFile{synth.records, 0}, synth.offerings);
  for (auto _ : state) {
    benchmark::DoNotOptimize(garec::build_dependency_graph(corpus.students, corpus.courses.size()));
  }
}
BENCHMARK(BM_DependencyGraph)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
