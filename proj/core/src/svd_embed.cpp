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

#include "garec/svd_embed.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "garec/errors.hpp"
#include "garec/rng.hpp"

namespace garec {

void CooccurrenceMatrix::add(CourseId previous, CourseId subsequent, bool good) {
  auto& c = entries_[{static_cast<std::int32_t>(previous), static_cast<std::int32_t>(subsequent)}];
  if (good) {
    ++c.good;
  } else {
    ++c.bad;
  }
}

CooccurrenceMatrix::Counts CooccurrenceMatrix::counts(CourseId previous, CourseId subsequent) const {
  auto it = entries_.find({static_cast<std::int32_t>(previous), static_cast<std::int32_t>(subsequent)});
  return it == entries_.end() ? Counts{} : it->second;
}

double CooccurrenceMatrix::value(const Counts& c) const {
  switch (variant_) {
    case Variant::Plus:
      return static_cast<double>(c.good);
    case Variant::PlusMinus:
      return static_cast<double>(c.good - c.bad);
    case Variant::PlusPlus:
      return static_cast<double>(c.good + c.bad);
  }
  return 0.0;
}

double CooccurrenceMatrix::value(CourseId previous, CourseId subsequent) const {
  return value(counts(previous, subsequent));
}

Eigen::MatrixXd CooccurrenceMatrix::dense() const {
  const auto n = static_cast<Eigen::Index>(courses_);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [key, c] : entries_) m(key.first, key.second) = value(c);
  return m;
}

CooccurrenceMatrix build_cooccurrence(std::span<const TrainingInstance> train, Variant variant,
                                      std::size_t courses) {
  CooccurrenceMatrix m(variant, courses);
  std::vector<CourseId> context;
  for (const auto& inst : train) {
    context.assign(inst.context.begin(), inst.context.end());
    std::sort(context.begin(), context.end());
    context.erase(std::unique(context.begin(), context.end()), context.end());
    for (CourseId prev : context) {
      for (CourseId next : inst.good) m.add(prev, next, true);
      for (CourseId next : inst.bad) m.add(prev, next, false);
    }
  }
  return m;
}

Eigen::MatrixXd l1_scale_rows(Eigen::MatrixXd m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).cwiseAbs().sum();
    if (norm > 0.0) m.row(i) /= norm;
  }
  return m;
}

namespace {

void orient_and_pack(const Eigen::MatrixXd& u, const Eigen::VectorXd& sigma, const Eigen::MatrixXd& v,
                     std::size_t d, SvdEmbedding& out) {
  const auto k = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd left = u.leftCols(k);
  Eigen::MatrixXd right = v.leftCols(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::Index arg = 0;
    left.col(j).cwiseAbs().maxCoeff(&arg);
    if (left(arg, j) < 0.0) {
      left.col(j) = -left.col(j);
      right.col(j) = -right.col(j);
    }
  }
  out.singular_values = sigma.head(k).cwiseMax(0.0);
  const Eigen::VectorXd root = out.singular_values.cwiseSqrt();
  out.previous = left * root.asDiagonal();
  out.subsequent = right * root.asDiagonal();
}

void dense_svd(const Eigen::MatrixXd& a, std::size_t d, SvdEmbedding& out) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  orient_and_pack(svd.matrixU(), svd.singularValues(), svd.matrixV(), d, out);
}

// Block subspace iteration on A^T A with a Rayleigh-Ritz step through the
// small SVD of A Q. Stops when every tracked singular value moves by less
// than tolerance * sigma_1 between sweeps.
void iterative_svd(const Eigen::MatrixXd& a, std::size_t d, const SvdOptions& options, SvdEmbedding& out) {
  const Eigen::Index n = a.cols();
  const Eigen::Index block = std::min<Eigen::Index>(n, static_cast<Eigen::Index>(d) + 8);
  Rng rng(options.seed);
  Eigen::MatrixXd q(n, block);
  for (Eigen::Index j = 0; j < block; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) q(i, j) = rng.uniform(-1.0, 1.0);
  }

  Eigen::VectorXd previous = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d), -1.0);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
    q = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);
    const Eigen::MatrixXd b = a * q;
    Eigen::JacobiSVD<Eigen::MatrixXd> small(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sigma = small.singularValues().head(static_cast<Eigen::Index>(d));
    const double scale = std::max(sigma(0), 1e-300);
    const bool converged = (sigma - previous).cwiseAbs().maxCoeff() <= options.tolerance * scale;
    if (converged || block == n) {
      const Eigen::MatrixXd v = q * small.matrixV();
      orient_and_pack(small.matrixU(), small.singularValues(), v, d, out);
      return;
    }
    previous = sigma;
    q = a.transpose() * b;
  }
  throw NumericError("truncated_svd: subspace iteration did not converge in " +
                     std::to_string(options.max_iterations) + " iterations");
}

}  // namespace

SvdEmbedding truncated_svd(const Eigen::MatrixXd& matrix, std::size_t d, const SvdOptions& options) {
  const auto limit = static_cast<std::size_t>(std::min(matrix.rows(), matrix.cols()));
  if (d < 1 || d > limit) {
    throw ConfigError("truncated_svd: d=" + std::to_string(d) + " outside [1, " + std::to_string(limit) + "]");
  }
  if (!matrix.allFinite()) throw NumericError("truncated_svd: matrix has non-finite entries");

  SvdEmbedding out;
  bool dense = options.method == SvdMethod::Dense;
  if (options.method == SvdMethod::Auto) dense = static_cast<std::size_t>(matrix.cols()) <= options.dense_limit;
  if (dense) {
    dense_svd(matrix, d, out);
  } else {
    iterative_svd(matrix, d, options, out);
  }
  return out;
}

SvdEmbedding fit_svd(std::span<const TrainingInstance> train, Variant variant, std::size_t courses, std::size_t d,
                     const SvdOptions& options) {
  if (train.empty()) throw DataError("fit_svd: empty training set");
  const auto counts = build_cooccurrence(train, variant, courses);
  auto model = truncated_svd(l1_scale_rows(counts.dense()), d, options);
  model.variant = variant;
  model.known = known_courses(train, courses);
  return model;
}

Eigen::VectorXd svd_profile(const SvdEmbedding& model, std::span<const CourseId> context) {
  Eigen::VectorXd profile = Eigen::VectorXd::Zero(model.previous.cols());
  std::size_t used = 0;
  for (CourseId c : context) {
    const std::size_t i = index(c);
    if (i >= model.courses() || (!model.known.empty() && !model.known[i])) continue;
    profile += model.previous.row(static_cast<Eigen::Index>(i)).transpose();
    ++used;
  }
  if (used == 0) throw DataError("svd_profile: no context course was seen in training");
  return profile / static_cast<double>(used);
}

std::vector<ScoredCourse> svd_rank(const SvdEmbedding& model, std::span<const CourseId> context,
                                   std::span<const CourseId> candidates) {
  const Eigen::VectorXd profile = svd_profile(model, context);
  std::vector<ScoredCourse> ranked;
  ranked.reserve(candidates.size());
  for (CourseId c : candidates) {
    const std::size_t i = index(c);
    const bool seen = i < model.courses() && (model.known.empty() || model.known[i]);
    const double score = seen ? model.subsequent.row(static_cast<Eigen::Index>(i)).dot(profile) : 0.0;
    ranked.push_back({c, score});
  }
  sort_ranked(ranked);
  return ranked;
}

}  // namespace garec
