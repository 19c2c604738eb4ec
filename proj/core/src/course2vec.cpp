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

#include "garec/course2vec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "garec/errors.hpp"
#include "garec/rng.hpp"

namespace garec {

void TrainConfig::validate() const {
  if (dims < 1) throw ConfigError("course2vec: dims must be >= 1");
  if (samples < 1) throw ConfigError("course2vec: samples must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("course2vec: learning rate must be finite and > 0");
  }
  if (epochs < 1) throw ConfigError("course2vec: epochs must be >= 1");
  if (freq_threshold < 1) throw ConfigError("course2vec: freq_threshold must be >= 1");
  if (!(clip_norm > 0.0)) throw ConfigError("course2vec: clip_norm must be > 0 (infinity disables clipping)");
}

namespace {

double log_sum_exp(std::span<const double> z) {
  const double top = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - top);
  return top + std::log(s);
}

// (course, multiplicity) for a sorted context.
std::vector<std::pair<CourseId, double>> multiplicities(std::span<const CourseId> sorted_context) {
  std::vector<std::pair<CourseId, double>> out;
  for (CourseId c : sorted_context) {
    if (!out.empty() && out.back().first == c) {
      out.back().second += 1.0;
    } else {
      out.emplace_back(c, 1.0);
    }
  }
  return out;
}

struct Relation {
  CourseId course;
  std::int64_t good = 0;
  std::int64_t bad = 0;
  std::int64_t freq = 0;  // count used by this variant
};

std::int64_t variant_freq(Variant variant, std::int64_t good, std::int64_t bad) {
  return variant == Variant::Plus ? good : good + bad;
}

// Instances sharing one sorted context. `targets` are the courses observed
// right after that exact context; `related` are the courses with a known
// relation to any of its courses, summed over those courses, and make up the
// softmax denominator.
struct ContextGroup {
  std::vector<CourseId> context;  // sorted, one entry per take
  std::vector<Relation> targets;
  std::vector<Relation> related;
};

struct Visit {
  std::uint32_t group;
  std::uint32_t target;
};

std::vector<ContextGroup> group_contexts(std::span<const TrainingInstance> train, Variant variant,
                                         std::size_t courses) {
  // Pair counts, deduplicated within an instance.
  std::vector<std::map<CourseId, std::pair<std::int64_t, std::int64_t>>> pairs(courses);
  std::map<std::vector<CourseId>, std::map<CourseId, Relation>> grouped;
  for (const auto& inst : train) {
    if (inst.context.empty()) continue;
    std::vector<CourseId> key(inst.context.begin(), inst.context.end());
    std::sort(key.begin(), key.end());
    auto& targets = grouped[key];
    key.erase(std::unique(key.begin(), key.end()), key.end());
    for (CourseId t : inst.good) {
      auto& r = targets[t];
      r.course = t;
      ++r.good;
      for (CourseId c : key) ++pairs[index(c)][t].first;
    }
    for (CourseId t : inst.bad) {
      auto& r = targets[t];
      r.course = t;
      ++r.bad;
      for (CourseId c : key) ++pairs[index(c)][t].second;
    }
  }

  std::vector<ContextGroup> groups;
  std::vector<Relation> acc(courses);
  std::vector<CourseId> touched;
  for (auto& [key, targets] : grouped) {
    ContextGroup g;
    g.context = key;
    for (auto& [course, r] : targets) {
      r.freq = variant_freq(variant, r.good, r.bad);
      if (r.freq > 0) g.targets.push_back(r);
    }
    if (g.targets.empty()) continue;

    CourseId last{-1};
    for (CourseId c : key) {
      if (c == last) continue;
      last = c;
      for (const auto& [t, counts] : pairs[index(c)]) {
        Relation& r = acc[index(t)];
        if (r.good == 0 && r.bad == 0) touched.push_back(t);
        r.course = t;
        r.good += counts.first;
        r.bad += counts.second;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (CourseId t : touched) {
      Relation& r = acc[index(t)];
      r.freq = variant_freq(variant, r.good, r.bad);
      if (r.freq > 0) g.related.push_back(r);
      r = Relation{};
    }
    touched.clear();
    groups.push_back(std::move(g));
  }
  return groups;
}

bool all_finite(const RowMatrix& m, Eigen::Index row) { return m.row(row).allFinite(); }

}  // namespace

Eigen::VectorXd context_profile(const EmbeddingModel& model, std::span<const CourseId> context) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(model.input.cols());
  std::size_t used = 0;
  for (CourseId c : context) {
    const std::size_t i = index(c);
    if (i >= model.courses() || (!model.known.empty() && !model.known[i])) continue;
    h += model.input.row(static_cast<Eigen::Index>(i)).transpose();
    ++used;
  }
  if (used == 0) throw DataError("context_profile: no context course was seen in training");
  return h / static_cast<double>(used);
}

double softmax_prob(const EmbeddingModel& model, const Eigen::VectorXd& profile, CourseId target) {
  const Eigen::VectorXd logits = model.output * profile;
  const double top = logits.maxCoeff();
  const double denom = (logits.array() - top).exp().sum();
  return std::exp(logits(static_cast<Eigen::Index>(index(target))) - top) / denom;
}

std::vector<ScoredCourse> c2v_rank(const EmbeddingModel& model, std::span<const CourseId> context,
                                   std::span<const CourseId> candidates) {
  const Eigen::VectorXd h = context_profile(model, context);
  std::vector<ScoredCourse> ranked;
  ranked.reserve(candidates.size());
  for (CourseId c : candidates) {
    const std::size_t i = index(c);
    const bool seen = i < model.courses() && (model.known.empty() || model.known[i]);
    const double score = seen ? model.output.row(static_cast<Eigen::Index>(i)).dot(h) : 0.0;
    ranked.push_back({c, score});
  }
  sort_ranked(ranked);
  return ranked;
}

StepGradient step_gradient(const EmbeddingModel& model, std::span<const CourseId> context,
                           std::span<const CourseId> denominator, CourseId target, double sign) {
  std::vector<CourseId> sorted(context.begin(), context.end());
  std::sort(sorted.begin(), sorted.end());
  const auto mult = multiplicities(sorted);
  const double k = static_cast<double>(sorted.size());
  if (sorted.empty()) throw DataError("step_gradient: empty context");

  const Eigen::Index d = model.input.cols();
  Eigen::VectorXd h = Eigen::VectorXd::Zero(d);
  for (const auto& [c, m] : mult) h += m * model.input.row(static_cast<Eigen::Index>(index(c))).transpose();
  h /= k;

  std::vector<double> z(denominator.size());
  std::size_t target_slot = denominator.size();
  for (std::size_t j = 0; j < denominator.size(); ++j) {
    z[j] = model.output.row(static_cast<Eigen::Index>(index(denominator[j]))).dot(h);
    if (denominator[j] == target) target_slot = j;
  }
  if (target_slot == denominator.size()) throw Error("step_gradient: target missing from denominator");
  const double lse = log_sum_exp(z);

  StepGradient g;
  g.objective = sign * (z[target_slot] - lse);
  g.probabilities.resize(z.size());
  Eigen::VectorXd grad_h = Eigen::VectorXd::Zero(d);
  for (std::size_t j = 0; j < denominator.size(); ++j) {
    g.probabilities[j] = std::exp(z[j] - lse);
    const double e = sign * ((j == target_slot ? 1.0 : 0.0) - g.probabilities[j]);
    g.output.emplace_back(denominator[j], e * h);
    grad_h += e * model.output.row(static_cast<Eigen::Index>(index(denominator[j]))).transpose();
  }
  for (const auto& [c, m] : mult) g.input.emplace_back(c, (m / k) * grad_h);
  return g;
}

double full_objective(const EmbeddingModel& model, std::span<const TrainingInstance> train) {
  std::vector<CourseId> vocab;
  for (std::size_t i = 0; i < model.courses(); ++i) {
    if (model.known.empty() || model.known[i]) vocab.push_back(course_at(i));
  }
  double total = 0.0;
  for (const auto& inst : train) {
    if (inst.context.empty()) continue;
    const Eigen::VectorXd h = context_profile(model, inst.context);
    std::vector<double> z(vocab.size());
    for (std::size_t j = 0; j < vocab.size(); ++j) {
      z[j] = model.output.row(static_cast<Eigen::Index>(index(vocab[j]))).dot(h);
    }
    const double lse = log_sum_exp(z);
    auto logp = [&](CourseId c) { return model.output.row(static_cast<Eigen::Index>(index(c))).dot(h) - lse; };
    for (CourseId c : inst.good) total += logp(c);
    for (CourseId c : inst.bad) {
      if (model.variant == Variant::PlusMinus) total -= logp(c);
      if (model.variant == Variant::PlusPlus) total += logp(c);
    }
  }
  return total;
}

TrainResult train_course2vec(std::span<const TrainingInstance> train, std::size_t courses, const TrainConfig& config,
                             const EpochObserver& observer) {
  config.validate();
  if (train.empty()) throw DataError("course2vec: empty training set");

  TrainResult result;
  EmbeddingModel& model = result.model;
  model.variant = config.variant;
  model.known = known_courses(train, courses);
  const auto d = static_cast<Eigen::Index>(config.dims);
  const auto n = static_cast<Eigen::Index>(courses);

  Rng rng(config.seed);
  model.input.resize(n, d);
  const double bound = 0.5 / static_cast<double>(config.dims);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) model.input(i, j) = rng.uniform(-bound, bound);
  }
  model.output = RowMatrix::Zero(n, d);

  const auto groups = group_contexts(train, config.variant, courses);
  std::vector<Visit> visits;
  for (std::uint32_t gi = 0; gi < groups.size(); ++gi) {
    for (std::uint32_t ri = 0; ri < groups[gi].targets.size(); ++ri) {
      for (std::int64_t f = 0; f < groups[gi].targets[ri].freq; ++f) visits.push_back({gi, ri});
    }
  }
  if (visits.empty()) throw DataError("course2vec: no usable (context, target) pairs in training set");

  std::vector<CourseId> known_list;
  for (std::size_t i = 0; i < courses; ++i) {
    if (model.known[i]) known_list.push_back(course_at(i));
  }

  const double total_steps = static_cast<double>(visits.size()) * config.epochs;
  double step_count = 0.0;
  std::vector<CourseId> denominator;
  std::vector<std::uint8_t> blocked(courses, 0);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(visits);
    double objective_sum = 0.0;
    double lr = config.learning_rate;
    for (std::size_t step = 0; step < visits.size(); ++step) {
      const ContextGroup& group = groups[visits[step].group];
      const Relation& rel = group.targets[visits[step].target];

      double sign = 1.0;
      if (config.variant == Variant::PlusMinus) {
        if (rel.good > 0 && rel.bad > 0) {
          sign = rng.uniform() * static_cast<double>(rel.good + rel.bad) < static_cast<double>(rel.good) ? 1.0 : -1.0;
        } else {
          sign = rel.good > 0 ? 1.0 : -1.0;
        }
      }

      denominator.clear();
      denominator.push_back(rel.course);
      if (config.full_denominator) {
        for (CourseId c : known_list) {
          if (c != rel.course) denominator.push_back(c);
        }
      } else {
        for (const Relation& other : group.related) {
          if (other.course == rel.course) continue;
          if (other.freq >= config.freq_threshold ||
              rng.uniform() * config.freq_threshold < static_cast<double>(other.freq)) {
            denominator.push_back(other.course);
          }
        }
        if (denominator.size() - 1 < config.samples) {
          for (CourseId c : group.context) blocked[index(c)] = 1;
          for (const Relation& other : group.related) blocked[index(other.course)] = 1;
          std::size_t attempts = 0;
          const std::size_t max_attempts = 20 * config.samples + 20;
          while (denominator.size() - 1 < config.samples && attempts++ < max_attempts) {
            const CourseId c = known_list[rng.below(known_list.size())];
            if (blocked[index(c)]) continue;
            blocked[index(c)] = 1;
            denominator.push_back(c);
          }
          for (CourseId c : group.context) blocked[index(c)] = 0;
          for (const Relation& other : group.related) blocked[index(other.course)] = 0;
          for (CourseId c : denominator) blocked[index(c)] = 0;
        }
      }

      const StepGradient g = step_gradient(model, group.context, denominator, rel.course, sign);
      objective_sum += g.objective;

      double norm2 = 0.0;
      for (const auto& [c, v] : g.input) norm2 += v.squaredNorm();
      for (const auto& [c, v] : g.output) norm2 += v.squaredNorm();
      const double norm = std::sqrt(norm2);
      const double clip = norm > config.clip_norm ? config.clip_norm / norm : 1.0;

      lr = config.learning_rate * std::max(1e-4, 1.0 - step_count / total_steps);
      step_count += 1.0;
      for (const auto& [c, v] : g.output) {
        const auto row = static_cast<Eigen::Index>(index(c));
        model.output.row(row) += (lr * clip) * v.transpose();
        if (!all_finite(model.output, row)) {
          throw NumericError("course2vec: non-finite parameter at epoch " + std::to_string(epoch) + ", step " +
                             std::to_string(step));
        }
      }
      for (const auto& [c, v] : g.input) {
        const auto row = static_cast<Eigen::Index>(index(c));
        model.input.row(row) += (lr * clip) * v.transpose();
        if (!all_finite(model.input, row)) {
          throw NumericError("course2vec: non-finite parameter at epoch " + std::to_string(epoch) + ", step " +
                             std::to_string(step));
        }
      }
    }
    EpochRecord rec{epoch, objective_sum / static_cast<double>(visits.size()), lr};
    result.log.push_back(rec);
    if (observer) observer(rec, model);
  }
  return result;
}

}  // namespace garec
