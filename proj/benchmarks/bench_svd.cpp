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

#include "garec/svd_embed.hpp"

namespace {

Eigen::MatrixXd sparse_counts(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  // Roughly 5% fill, like a co-occurrence matrix over a few hundred courses.
  for (Eigen::Index k = 0; k < n * n / 20; ++k) m(gen() % n, gen() % n) += 1.0;
  return garec::l1_scale_rows(m);
}

void BM_TruncatedSvd(benchmark::State& state, garec::SvdMethod method) {
  const Eigen::MatrixXd m = sparse_counts(state.range(0), 1);
  garec::SvdOptions options;
  options.method = method;
  for (auto _ : state) {
    benchmark::DoNotOptimize(garec::truncated_svd(m, 20, options));
  }
}
BENCHMARK_CAPTURE(BM_TruncatedSvd, dense, garec::SvdMethod::Dense)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TruncatedSvd, iterative, garec::SvdMethod::Iterative)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace
