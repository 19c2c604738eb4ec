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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "garec/corpus.hpp"

namespace garec::testing {

// Corpus from inline CSV text (header included by the caller).
Corpus corpus_from_csv(const std::string& transcripts);
Corpus corpus_from_csv(const std::string& transcripts, const std::string& offerings);

// Singular values, descending, from a cyclic Jacobi eigen-solver on A^T A in
// long double. Independent of Eigen's decompositions.
std::vector<double> jacobi_singular_values(const Eigen::MatrixXd& a);

// One-sided p = P(U >= u_obs) under the permutation distribution, by listing
// every split of the pooled sample. Ties use midranks.
double brute_force_mann_whitney_p(std::span<const double> first, std::span<const double> second);

// U of `first` by direct pair counting (ties count 1/2).
double pair_count_u(std::span<const double> first, std::span<const double> second);

// Relative error max|a - b| / max(1e-8, max|b|) over matching entries.
double max_relative_error(std::span<const double> a, std::span<const double> b);

}  // namespace garec::testing
