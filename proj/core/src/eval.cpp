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

#include "garec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include <nlohmann/json.hpp>

#include "garec/errors.hpp"

namespace garec {

GpaType gpa_type(double final_gpa, const GpaThresholds& thresholds) {
  if (final_gpa >= thresholds.a - kGradeTolerance) return GpaType::A;
  if (final_gpa >= thresholds.b - kGradeTolerance) return GpaType::B;
  return GpaType::C;
}

std::string_view gpa_type_name(GpaType t) {
  switch (t) {
    case GpaType::A:
      return "A";
    case GpaType::B:
      return "B";
    case GpaType::C:
      return "C";
  }
  return "?";
}

namespace {

bool contains(std::span<const CourseId> list, CourseId c) { return std::find(list.begin(), list.end(), c) != list.end(); }

}  // namespace

TermEvaluation recall_metrics(std::span<const CourseId> actual_good, std::span<const CourseId> actual_bad,
                              std::span<const CourseId> recommended) {
  TermEvaluation t;
  t.actual_good = actual_good.size();
  t.actual_bad = actual_bad.size();
  t.taken = t.actual_good + t.actual_bad;
  t.recommended = recommended.size();
  if (recommended.size() > t.taken) {
    throw Error("recall_metrics: list of " + std::to_string(recommended.size()) + " exceeds the term load of " +
                std::to_string(t.taken));
  }
  for (CourseId c : actual_good) t.hit_good += contains(recommended, c) ? 1 : 0;
  for (CourseId c : actual_bad) t.hit_bad += contains(recommended, c) ? 1 : 0;
  if (t.actual_good > 0) t.recall_good = static_cast<double>(t.hit_good) / static_cast<double>(t.actual_good);
  if (t.actual_bad > 0) t.recall_bad = static_cast<double>(t.hit_bad) / static_cast<double>(t.actual_bad);
  if (t.recall_good && t.recall_bad) t.recall_diff = *t.recall_good - *t.recall_bad;
  return t;
}

GpaImpact gpa_impact(std::span<const std::pair<CourseId, double>> actual_good,
                     std::span<const std::pair<CourseId, double>> actual_bad, std::span<const CourseId> recommended,
                     double prior_gpa) {
  GpaImpact out;
  if (!(prior_gpa > 0.0)) return out;
  double good_sum = 0.0, bad_sum = 0.0;
  std::size_t good_n = 0, bad_n = 0;
  for (const auto& [c, g] : actual_good) {
    if (contains(recommended, c)) {
      good_sum += g;
      ++good_n;
    }
  }
  for (const auto& [c, g] : actual_bad) {
    if (contains(recommended, c)) {
      bad_sum += g;
      ++bad_n;
    }
  }
  if (good_n > 0) out.increase = (good_sum / static_cast<double>(good_n) - prior_gpa) / prior_gpa * 100.0;
  if (bad_n > 0) out.decrease = (prior_gpa - bad_sum / static_cast<double>(bad_n)) / prior_gpa * 100.0;
  return out;
}

Coverage term_coverage(std::span<const TermEvaluation> terms) {
  Coverage c;
  for (const auto& t : terms) {
    if (t.hit_good > 0) ++c.good_terms;
    if (t.hit_bad > 0) ++c.bad_terms;
  }
  return c;
}

MetricSummary summarize(std::span<const TermEvaluation> terms) {
  MetricSummary s;
  s.terms = terms.size();
  double good = 0.0, bad = 0.0, inc = 0.0, dec = 0.0;
  for (const auto& t : terms) {
    if (t.recall_good) {
      good += *t.recall_good;
      ++s.good_terms;
    }
    if (t.recall_bad) {
      bad += *t.recall_bad;
      ++s.bad_terms;
    }
    if (t.gpa_increase) {
      inc += *t.gpa_increase;
      ++s.gpa_increase_terms;
    }
    if (t.gpa_decrease) {
      dec += *t.gpa_decrease;
      ++s.gpa_decrease_terms;
    }
  }
  if (s.good_terms > 0) s.recall_good = good / static_cast<double>(s.good_terms);
  if (s.bad_terms > 0) s.recall_bad = bad / static_cast<double>(s.bad_terms);
  if (s.recall_good && s.recall_bad) s.recall_diff = *s.recall_good - *s.recall_bad;
  if (s.gpa_increase_terms > 0) s.gpa_increase = inc / static_cast<double>(s.gpa_increase_terms);
  if (s.gpa_decrease_terms > 0) s.gpa_decrease = dec / static_cast<double>(s.gpa_decrease_terms);
  s.coverage = term_coverage(terms);
  return s;
}

std::vector<GroupRow> group_breakdown(std::span<const TermEvaluation> terms, Grouping grouping) {
  std::map<std::string, std::vector<TermEvaluation>> groups;
  for (const auto& t : terms) {
    std::string key;
    switch (grouping) {
      case Grouping::Major:
        key = t.major;
        break;
      case Grouping::GpaType:
        key = std::string(gpa_type_name(t.type));
        break;
      case Grouping::AcademicLevel:
        key = std::string(kAcademicLevelNames[static_cast<std::size_t>(t.level)]);
        break;
    }
    groups[key].push_back(t);
  }
  std::vector<GroupRow> rows;
  for (const auto& [key, members] : groups) {
    MetricSummary s = summarize(members);
    if (s.good_terms == 0 && s.bad_terms == 0) continue;
    rows.push_back({key, std::move(s)});
  }
  return rows;
}

EvaluationReport evaluate(const Recommender& backend, const Corpus& corpus,
                          std::span<const TrainingInstance> instances, const EvaluateOptions& options) {
  EvaluationReport report;
  report.backend = backend.name();
  for (const auto& inst : instances) {
    const StudentHistory& s = corpus.students.at(inst.student);
    if (s.courses_before(inst.position) < kMinPriorCourses) {
      ++report.skipped_short_history;
      continue;
    }
    const Query query = Query::at(s, inst.position);
    Recommendation rec;
    try {
      rec = recommend(backend, query, corpus.offerings, inst.target_count());
    } catch (const DataError&) {
      ++report.skipped_no_profile;
      continue;
    }
    if (rec.courses.empty()) {
      ++report.skipped_no_candidates;
      continue;
    }
    std::vector<CourseId> list;
    for (const auto& r : rec.courses) list.push_back(r.course);

    TermEvaluation t = recall_metrics(inst.good, inst.bad, list);
    t.student = s.id;
    t.term = inst.term;
    t.major = s.major;
    t.level = query.level;
    t.type = gpa_type(s.final_gpa(), options.thresholds);

    std::vector<std::pair<CourseId, double>> good, bad;
    for (const auto& e : s.terms[inst.position].courses) {
      if (std::find(inst.good.begin(), inst.good.end(), e.course) != inst.good.end()) {
        good.emplace_back(e.course, e.grade.points());
      } else {
        bad.emplace_back(e.course, e.grade.points());
      }
    }
    const GpaImpact impact = gpa_impact(good, bad, list, inst.prior_mean);
    t.gpa_increase = impact.increase;
    t.gpa_decrease = impact.decrease;
    report.terms.push_back(std::move(t));
  }
  report.overall = summarize(report.terms);
  return report;
}

DegreePlan degree_plan(const StudentHistory& student) {
  DegreePlan plan;
  for (std::size_t p = 0; p < student.terms.size(); ++p) {
    for (const auto& e : student.terms[p].courses) plan.emplace(e.course, static_cast<int>(p) + 1);
  }
  return plan;
}

std::optional<double> degree_similarity(const DegreePlan& a, const DegreePlan& b, double lambda) {
  std::vector<std::pair<int, int>> common;  // (term in a, term in b)
  for (const auto& [course, term] : a) {
    if (auto it = b.find(course); it != b.end()) common.emplace_back(term, it->second);
  }
  if (common.size() < 2) return std::nullopt;
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t x = 0; x < common.size(); ++x) {
    for (std::size_t y = x + 1; y < common.size(); ++y) {
      const long dt1 = common[x].first - common[y].first;
      const long dt2 = common[x].second - common[y].second;
      if (dt1 == 0 && dt2 == 0) {
        total += 1.0;
      } else if (dt1 * dt2 >= 1) {
        total += std::exp(-lambda * static_cast<double>(std::labs(dt1 - dt2)));
      }
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

std::vector<HistogramBin> grade_deviation_histogram(std::span<const StudentHistory> students) {
  constexpr int kHalfRange = 12;  // +-4 grade points
  std::vector<HistogramBin> bins;
  for (int k = -kHalfRange; k <= kHalfRange; ++k) {
    bins.push_back({(k - 0.5) / 3.0, (k + 0.5) / 3.0, 0});
  }
  for (const auto& s : students) {
    for (std::size_t p = 0; p < s.terms.size(); ++p) {
      if (!s.prior_mean[p]) continue;
      for (const auto& e : s.terms[p].courses) {
        const double dev = e.grade.points() - *s.prior_mean[p];
        long k = std::lround(dev * 3.0);
        k = std::clamp<long>(k, -kHalfRange, kHalfRange);
        ++bins[static_cast<std::size_t>(k + kHalfRange)].count;
      }
    }
  }
  return bins;
}

namespace {

void put(std::ostream& out, const std::optional<double>& v) {
  if (v) out << *v;
}

nlohmann::json to_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

nlohmann::json to_json(const MetricSummary& s) {
  return {
      {"terms", s.terms},
      {"good_terms", s.good_terms},
      {"bad_terms", s.bad_terms},
      {"recall_good", to_json(s.recall_good)},
      {"recall_bad", to_json(s.recall_bad)},
      {"recall_diff", to_json(s.recall_diff)},
      {"gpa_increase_terms", s.gpa_increase_terms},
      {"gpa_increase_pct", to_json(s.gpa_increase)},
      {"gpa_decrease_terms", s.gpa_decrease_terms},
      {"gpa_decrease_pct", to_json(s.gpa_decrease)},
      {"coverage_good_terms", s.coverage.good_terms},
      {"coverage_bad_terms", s.coverage.bad_terms},
  };
}

}  // namespace

void write_terms_csv(const EvaluationReport& report, std::ostream& out) {
  out << std::setprecision(12);
  out << "student_id,term,major,level,gpa_type,taken,actual_good,actual_bad,recommended,hit_good,hit_bad,"
         "recall_good,recall_bad,recall_diff,gpa_increase_pct,gpa_decrease_pct\n";
  for (const auto& t : report.terms) {
    out << t.student << ',' << t.term << ',' << t.major << ','
        << kAcademicLevelNames[static_cast<std::size_t>(t.level)] << ',' << gpa_type_name(t.type) << ',' << t.taken
        << ',' << t.actual_good << ',' << t.actual_bad << ',' << t.recommended << ',' << t.hit_good << ','
        << t.hit_bad << ',';
    put(out, t.recall_good);
    out << ',';
    put(out, t.recall_bad);
    out << ',';
    put(out, t.recall_diff);
    out << ',';
    put(out, t.gpa_increase);
    out << ',';
    put(out, t.gpa_decrease);
    out << '\n';
  }
}

void write_groups_csv(std::span<const GroupRow> rows, std::ostream& out) {
  out << std::setprecision(12);
  out << "group,terms,good_terms,bad_terms,recall_good,recall_bad,recall_diff,gpa_increase_pct,gpa_decrease_pct,"
         "coverage_good_terms,coverage_bad_terms\n";
  for (const auto& r : rows) {
    const auto& s = r.summary;
    out << r.group << ',' << s.terms << ',' << s.good_terms << ',' << s.bad_terms << ',';
    put(out, s.recall_good);
    out << ',';
    put(out, s.recall_bad);
    out << ',';
    put(out, s.recall_diff);
    out << ',';
    put(out, s.gpa_increase);
    out << ',';
    put(out, s.gpa_decrease);
    out << ',' << s.coverage.good_terms << ',' << s.coverage.bad_terms << '\n';
  }
}

void write_histogram_csv(std::span<const HistogramBin> bins, std::ostream& out) {
  std::size_t total = 0;
  for (const auto& b : bins) total += b.count;
  out << std::setprecision(12);
  out << "bin_lo,bin_hi,count,fraction\n";
  for (const auto& b : bins) {
    out << b.lo << ',' << b.hi << ',' << b.count << ','
        << (total > 0 ? static_cast<double>(b.count) / static_cast<double>(total) : 0.0) << '\n';
  }
}

void write_summary_json(const EvaluationReport& report, std::ostream& out) {
  nlohmann::ordered_json j;
  j["backend"] = report.backend;
  j["overall"] = to_json(report.overall);
  j["skipped"] = {{"short_history", report.skipped_short_history},
                  {"no_profile", report.skipped_no_profile},
                  {"no_candidates", report.skipped_no_candidates}};
  for (auto [grouping, key] : {std::pair{Grouping::Major, "by_major"}, std::pair{Grouping::GpaType, "by_gpa_type"},
                               std::pair{Grouping::AcademicLevel, "by_level"}}) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::object();
    for (const auto& r : group_breakdown(report.terms, grouping)) rows[r.group] = to_json(r.summary);
    j[key] = rows;
  }
  out << j.dump(2) << '\n';
}

}  // namespace garec
