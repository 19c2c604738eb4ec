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
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "garec/corpus.hpp"
#include "garec/ranking.hpp"

namespace garec {

// Previous -> subsequent co-occurrence counts split by the label the
// subsequent course carried. Entries are (previous, subsequent) pairs.
class CooccurrenceMatrix {
 public:
  struct Counts {
    std::int64_t good = 0;
    std::int64_t bad = 0;
  };

  CooccurrenceMatrix(Variant variant, std::size_t courses) : variant_(variant), courses_(courses) {}

  Variant variant() const { return variant_; }
  std::size_t size() const { return courses_; }

  void add(CourseId previous, CourseId subsequent, bool good);

  Counts counts(CourseId previous, CourseId subsequent) const;
  // n+ (plus), n+ - n- (plusminus), n+ + n- (plusplus).
  double value(CourseId previous, CourseId subsequent) const;
  double value(const Counts& c) const;

  Eigen::MatrixXd dense() const;
  const std::map<std::pair<std::int32_t, std::int32_t>, Counts>& entries() const { return entries_; }

 private:
  Variant variant_;
  std::size_t courses_;
  std::map<std::pair<std::int32_t, std::int32_t>, Counts> entries_;
};

// Each (context course, target course) pair counts once per instance, so a
// student contributes at most one event per pair and target term.
CooccurrenceMatrix build_cooccurrence(std::span<const TrainingInstance> train, Variant variant,
                                      std::size_t courses);

// Rows divided by their L1 norm; all-zero rows are left untouched.
Eigen::MatrixXd l1_scale_rows(Eigen::MatrixXd m);

struct SvdEmbedding {
  Variant variant = Variant::Plus;
  Eigen::MatrixXd previous;    // U_d sqrt(S_d)
  Eigen::MatrixXd subsequent;  // V_d sqrt(S_d)
  Eigen::VectorXd singular_values;
  std::vector<std::uint8_t> known;  // course seen in training

  std::size_t dims() const { return static_cast<std::size_t>(singular_values.size()); }
  std::size_t courses() const { return static_cast<std::size_t>(previous.rows()); }
};

enum class SvdMethod : std::uint8_t { Auto, Dense, Iterative };

struct SvdOptions {
  SvdMethod method = SvdMethod::Auto;
  std::size_t dense_limit = 500;  // Auto uses the dense solver up to this size
  double tolerance = 1e-10;
  int max_iterations = 1000;
  std::uint64_t seed = 1;
};

// Top-d singular triplets. The left vectors are oriented so that their
// largest-magnitude entry is nonnegative. `known` is left empty.
SvdEmbedding truncated_svd(const Eigen::MatrixXd& matrix, std::size_t d, const SvdOptions& options = {});

// Builds the co-occurrence matrix for `variant`, L1-scales it and factors it.
SvdEmbedding fit_svd(std::span<const TrainingInstance> train, Variant variant, std::size_t courses, std::size_t d,
                     const SvdOptions& options = {});

// Mean previous-course embedding over the known context courses.
// DataError when no context course is known.
Eigen::VectorXd svd_profile(const SvdEmbedding& model, std::span<const CourseId> context);

std::vector<ScoredCourse> svd_rank(const SvdEmbedding& model, std::span<const CourseId> context,
                                   std::span<const CourseId> candidates);

}  // namespace garec
