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

#include "garec/gradepred.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "garec/errors.hpp"
#include "garec/rng.hpp"

namespace garec {

std::vector<PriorGrade> prior_grades(const StudentHistory& student, std::size_t position) {
  std::vector<PriorGrade> out;
  for (std::size_t p = 0; p < position && p < student.terms.size(); ++p) {
    for (const auto& e : student.terms[p].courses) out.emplace_back(e.course, e.grade.points());
  }
  return out;
}

namespace {

std::vector<PriorGrade> weighted_priors(const StudentHistory& student, std::size_t position, bool centered) {
  auto priors = prior_grades(student, position);
  if (centered && !priors.empty()) {
    const double mean = student.prior_mean.at(position).value_or(0.0);
    for (auto& [c, g] : priors) g -= mean;
  }
  return priors;
}

bool is_known(const std::vector<std::uint8_t>& known, std::size_t courses, CourseId c) {
  const std::size_t i = index(c);
  return i < courses && (known.empty() || known[i]);
}

}  // namespace

KnowledgeModel::KnowledgeModel(Matrix provided, Matrix required, double bias, bool centered)
    : provided_(std::move(provided)), required_(std::move(required)), bias_(bias), centered_(centered) {
  if (provided_.rows() != required_.rows() || provided_.cols() != required_.cols()) {
    throw ConfigError("KnowledgeModel: provided/required shape mismatch");
  }
}

Eigen::VectorXd KnowledgeModel::knowledge_state(std::span<const PriorGrade> priors) const {
  if (priors.empty()) throw DataError("knowledge_state: no prior courses");
  Eigen::VectorXd state = Eigen::VectorXd::Zero(provided_.cols());
  for (const auto& [c, w] : priors) {
    if (!is_known(known, courses(), c)) continue;
    state += w * provided_.row(static_cast<Eigen::Index>(index(c))).transpose();
  }
  return state;
}

GradePrediction KnowledgeModel::predict_from_state(const Eigen::VectorXd& state, CourseId course) const {
  if (!is_known(known, courses(), course)) return {bias_, true};
  return {state.dot(required_.row(static_cast<Eigen::Index>(index(course)))) + bias_, false};
}

GradePrediction KnowledgeModel::predict(const StudentHistory& student, std::size_t position, CourseId course) const {
  const auto priors = weighted_priors(student, position, centered_);
  if (priors.empty()) return {bias_, true};
  return predict_from_state(knowledge_state(priors), course);
}

void KnowledgeConfig::validate() const {
  if (k < 1) throw ConfigError("knowledge model: k must be >= 1");
  if (epochs < 1) throw ConfigError("knowledge model: epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("knowledge model: learning rate must be finite and > 0");
  }
  if (!(l2 >= 0.0)) throw ConfigError("knowledge model: l2 must be >= 0");
}

KnowledgeData build_knowledge_data(std::span<const StudentHistory> students,
                                   std::span<const TrainingInstance> instances, bool centered_grades) {
  KnowledgeData data;
  for (const auto& inst : instances) {
    const StudentHistory& s = students[inst.student];
    auto priors = weighted_priors(s, inst.position, centered_grades);
    if (priors.empty()) continue;
    const auto prior_index = static_cast<std::uint32_t>(data.priors.size());
    data.priors.push_back({std::move(priors)});
    for (const auto& e : s.terms[inst.position].courses) {
      data.targets.push_back({prior_index, e.course, e.grade.points()});
    }
  }
  return data;
}

namespace {

std::vector<Eigen::VectorXd> all_states(const KnowledgeModel& model, const KnowledgeData& data) {
  std::vector<Eigen::VectorXd> states;
  states.reserve(data.priors.size());
  for (const auto& p : data.priors) states.push_back(model.knowledge_state(p.courses));
  return states;
}

}  // namespace

double knowledge_loss(const KnowledgeModel& model, const KnowledgeData& data, double l2) {
  const auto states = all_states(model, data);
  double sse = 0.0;
  for (const auto& t : data.targets) {
    const double r = model.predict_from_state(states[t.prior], t.course).value - t.grade;
    sse += r * r;
  }
  const double n = std::max<double>(1.0, static_cast<double>(data.targets.size()));
  return sse / n + l2 * (model.provided().squaredNorm() + model.required().squaredNorm());
}

KnowledgeGradient knowledge_gradient(const KnowledgeModel& model, const KnowledgeData& data, double l2) {
  const auto states = all_states(model, data);
  const Eigen::Index k = static_cast<Eigen::Index>(model.dims());
  KnowledgeGradient g;
  g.provided = 2.0 * l2 * model.provided();
  g.required = 2.0 * l2 * model.required();
  std::vector<Eigen::VectorXd> state_grad(states.size(), Eigen::VectorXd::Zero(k));
  const double n = std::max<double>(1.0, static_cast<double>(data.targets.size()));

  for (const auto& t : data.targets) {
    const auto pred = model.predict_from_state(states[t.prior], t.course);
    const double r = 2.0 * (pred.value - t.grade) / n;
    g.bias += r;
    if (pred.fallback) continue;
    const auto row = static_cast<Eigen::Index>(index(t.course));
    g.required.row(row) += r * states[t.prior].transpose();
    state_grad[t.prior] += r * model.required().row(row).transpose();
  }
  for (std::size_t p = 0; p < data.priors.size(); ++p) {
    for (const auto& [c, w] : data.priors[p].courses) {
      const std::size_t i = index(c);
      if (i >= model.courses() || (!model.known.empty() && !model.known[i])) continue;
      g.provided.row(static_cast<Eigen::Index>(i)) += w * state_grad[p].transpose();
    }
  }
  return g;
}

KnowledgeFit fit_knowledge(std::span<const StudentHistory> students, std::span<const TrainingInstance> train,
                           std::size_t courses, const KnowledgeConfig& config) {
  config.validate();
  const KnowledgeData data = build_knowledge_data(students, train, config.centered_grades);
  if (data.targets.empty()) throw DataError("fit_knowledge: no training grades");

  const auto n = static_cast<Eigen::Index>(courses);
  const auto k = static_cast<Eigen::Index>(config.k);
  Rng rng(config.seed);
  const double scale = 0.1 / std::sqrt(static_cast<double>(config.k));
  KnowledgeModel::Matrix provided(n, k), required(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) provided(i, j) = rng.uniform(-scale, scale);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) required(i, j) = rng.uniform(-scale, scale);
  }
  double mean = 0.0;
  for (const auto& t : data.targets) mean += t.grade;
  mean /= static_cast<double>(data.targets.size());

  KnowledgeFit fit;
  fit.model = KnowledgeModel(std::move(provided), std::move(required), mean, config.centered_grades);
  fit.model.known = known_courses(train, courses);
  KnowledgeModel& model = fit.model;

  // Adam on the full batch; raw grade-weighted sums make the curvature vary
  // by orders of magnitude across parameters.
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  KnowledgeModel::Matrix mp = KnowledgeModel::Matrix::Zero(n, k), vp = mp, mr = mp, vr = mp;
  double mb = 0.0, vb = 0.0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const KnowledgeGradient g = knowledge_gradient(model, data, config.l2);
    const double c1 = 1.0 - std::pow(beta1, epoch);
    const double c2 = 1.0 - std::pow(beta2, epoch);
    mp = beta1 * mp + (1.0 - beta1) * g.provided;
    vp = beta2 * vp + (1.0 - beta2) * g.provided.cwiseProduct(g.provided);
    mr = beta1 * mr + (1.0 - beta1) * g.required;
    vr = beta2 * vr + (1.0 - beta2) * g.required.cwiseProduct(g.required);
    mb = beta1 * mb + (1.0 - beta1) * g.bias;
    vb = beta2 * vb + (1.0 - beta2) * g.bias * g.bias;
    model.provided().array() -=
        config.learning_rate * (mp.array() / c1) / ((vp.array() / c2).sqrt() + eps);
    model.required().array() -=
        config.learning_rate * (mr.array() / c1) / ((vr.array() / c2).sqrt() + eps);
    model.bias() -= config.learning_rate * (mb / c1) / (std::sqrt(vb / c2) + eps);
    if (!model.provided().allFinite() || !model.required().allFinite() || !std::isfinite(model.bias())) {
      throw NumericError("fit_knowledge: non-finite parameter at epoch " + std::to_string(epoch));
    }
  }

  const auto states = all_states(model, data);
  double sse = 0.0;
  for (const auto& t : data.targets) {
    const double r = model.predict_from_state(states[t.prior], t.course).value - t.grade;
    sse += r * r;
  }
  fit.train_rmse = std::sqrt(sse / static_cast<double>(data.targets.size()));
  return fit;
}

std::vector<GradeObservation> grade_observations(std::span<const StudentHistory> students,
                                                 std::span<const TrainingInstance> instances) {
  std::vector<GradeObservation> out;
  for (const auto& inst : instances) {
    const StudentHistory& s = students[inst.student];
    for (const auto& e : s.terms[inst.position].courses) out.push_back({s.id, e.course, e.grade.points()});
  }
  return out;
}

BiasBaseline::BiasBaseline(double global_mean, std::unordered_map<std::string, double> student_offsets,
                           std::vector<double> course_offsets, double lo, double hi)
    : global_mean_(global_mean),
      student_offsets_(std::move(student_offsets)),
      course_offsets_(std::move(course_offsets)),
      lo_(lo),
      hi_(hi) {}

double BiasBaseline::predict_pair(std::string_view student, CourseId course) const {
  double value = global_mean_;
  if (auto it = student_offsets_.find(std::string(student)); it != student_offsets_.end()) value += it->second;
  if (index(course) < course_offsets_.size()) value += course_offsets_[index(course)];
  return std::clamp(value, lo_, hi_);
}

GradePrediction BiasBaseline::predict(const StudentHistory& student, std::size_t, CourseId course) const {
  return {predict_pair(student.id, course), false};
}

BiasBaseline fit_bias_baseline(std::span<const GradeObservation> train, std::size_t courses, double shrinkage) {
  if (train.empty()) return BiasBaseline(0.0, {}, std::vector<double>(courses, 0.0), -1.0, 5.0);
  double mean = 0.0, lo = train.front().grade, hi = train.front().grade;
  for (const auto& o : train) {
    mean += o.grade;
    lo = std::min(lo, o.grade);
    hi = std::max(hi, o.grade);
  }
  mean /= static_cast<double>(train.size());

  std::map<std::string, std::pair<double, double>> per_student;  // residual sum, count
  for (const auto& o : train) {
    auto& [sum, n] = per_student[o.student];
    sum += o.grade - mean;
    n += 1.0;
  }
  std::unordered_map<std::string, double> student_offsets;
  for (const auto& [id, sn] : per_student) student_offsets[id] = sn.first / (sn.second + shrinkage);

  std::vector<double> sums(courses, 0.0), counts(courses, 0.0);
  for (const auto& o : train) {
    const std::size_t c = index(o.course);
    if (c >= courses) continue;
    sums[c] += o.grade - mean - student_offsets[o.student];
    counts[c] += 1.0;
  }
  std::vector<double> course_offsets(courses, 0.0);
  for (std::size_t c = 0; c < courses; ++c) course_offsets[c] = sums[c] / (counts[c] + shrinkage);

  return BiasBaseline(mean, std::move(student_offsets), std::move(course_offsets), lo - 1.0, hi + 1.0);
}

}  // namespace garec
