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

#include "garec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "garec/errors.hpp"
#include "garec/rng.hpp"

namespace garec {

void SynthConfig::validate() const {
  if (majors < 1) throw ConfigError("synth.majors must be >= 1");
  if (students < 1) throw ConfigError("synth.students must be >= 1");
  if (terms_per_student < 1) throw ConfigError("synth.terms must be >= 1");
  if (min_load < 1 || max_load < min_load) throw ConfigError("synth.min_load/max_load must satisfy 1 <= min <= max");
  if (start_spread < 1) throw ConfigError("synth.start_spread must be >= 1");
  if (courses_per_major < terms_per_student * max_load) {
    throw ConfigError("synth: " + std::to_string(courses_per_major) + " courses per major cannot fill " +
                      std::to_string(terms_per_student) + " terms of " + std::to_string(max_load) + " courses");
  }
  if (!(dag_density >= 0.0 && dag_density <= 1.0)) throw ConfigError("synth.dag_density must be in [0,1]");
  if (!(delta >= 0.0)) throw ConfigError("synth.delta must be >= 0");
  if (!(sigma >= 0.0)) throw ConfigError("synth.sigma must be >= 0");
  if (!(ability_spread >= 0.0)) throw ConfigError("synth.ability_spread must be >= 0");
  if (!(exploration >= 0.0 && exploration <= 1.0)) throw ConfigError("synth.exploration must be in [0,1]");
  if (!(offering_sparsity >= 0.0 && offering_sparsity < 1.0)) {
    throw ConfigError("synth.offering_sparsity must be in [0,1)");
  }
  if (!(ready_boost > 0.0) || !(slot_decay >= 0.0)) throw ConfigError("synth: choice weights must be positive");
}

std::string synth_course_name(int major, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "m%dc%03d", major, index);
  return buf;
}

namespace {

struct Course {
  int major = 0;
  double slot = 0.0;
  std::vector<int> prereqs;  // global course indices
};

}  // namespace

SynthCorpus generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const int per = config.courses_per_major;
  const int n_courses = config.majors * per;
  const int horizon = config.start_spread + config.terms_per_student - 1;

  std::vector<Course> courses(static_cast<std::size_t>(n_courses));
  std::vector<std::string> names(courses.size());
  SynthCorpus out;
  for (int m = 0; m < config.majors; ++m) {
    for (int j = 0; j < per; ++j) {
      const auto g = static_cast<std::size_t>(m * per + j);
      courses[g].major = m;
      courses[g].slot = static_cast<double>(j) * config.terms_per_student / per;
      names[g] = synth_course_name(m, j);
    }
    for (int j = 0; j < per; ++j) {
      for (int i = 0; i < j; ++i) {
        if (rng.bernoulli(config.dag_density)) {
          courses[static_cast<std::size_t>(m * per + j)].prereqs.push_back(m * per + i);
          out.edges.emplace_back(synth_course_name(m, i), synth_course_name(m, j));
        }
      }
    }
  }

  std::vector<std::vector<std::uint8_t>> offered(static_cast<std::size_t>(horizon + 1),
                                                 std::vector<std::uint8_t>(courses.size(), 1));
  for (int t = 1; t <= horizon; ++t) {
    for (std::size_t c = 0; c < courses.size(); ++c) {
      if (config.offering_sparsity > 0.0 && rng.bernoulli(config.offering_sparsity)) {
        offered[static_cast<std::size_t>(t)][c] = 0;
      } else {
        out.offerings.push_back({names[c], t});
      }
    }
  }

  const int digits = static_cast<int>(std::to_string(config.students).size());
  for (int s = 0; s < config.students; ++s) {
    char id[32];
    std::snprintf(id, sizeof id, "s%0*d", digits, s);
    const int major = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.majors)));
    const double ability = std::clamp(rng.normal(config.ability_mean, config.ability_spread), 1.0, 4.0);
    const int start = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(config.start_spread)));
    std::vector<int> taken_at(courses.size(), -1);  // position of the take, -1 if not taken

    for (int p = 0; p < config.terms_per_student; ++p) {
      const int term = start + p;
      std::vector<int> pool;
      for (int j = 0; j < per; ++j) {
        const int c = major * per + j;
        if (taken_at[static_cast<std::size_t>(c)] < 0 && offered[static_cast<std::size_t>(term)][static_cast<std::size_t>(c)]) {
          pool.push_back(c);
        }
      }
      auto ready = [&](int c) {
        for (int q : courses[static_cast<std::size_t>(c)].prereqs) {
          const int at = taken_at[static_cast<std::size_t>(q)];
          if (at < 0 || at >= p) return false;
        }
        return true;
      };
      const int load = config.min_load + static_cast<int>(rng.below(static_cast<std::uint64_t>(config.max_load - config.min_load + 1)));
      std::vector<int> chosen;
      while (static_cast<int>(chosen.size()) < load && !pool.empty()) {
        std::size_t pick = 0;
        if (rng.bernoulli(config.exploration)) {
          pick = static_cast<std::size_t>(rng.below(pool.size()));
        } else {
          std::vector<double> w(pool.size());
          double total = 0.0;
          for (std::size_t k = 0; k < pool.size(); ++k) {
            const auto& c = courses[static_cast<std::size_t>(pool[k])];
            w[k] = std::exp(-config.slot_decay * std::abs(c.slot - p)) * (ready(pool[k]) ? config.ready_boost : 1.0);
            total += w[k];
          }
          double r = rng.uniform() * total;
          pick = pool.size() - 1;
          for (std::size_t k = 0; k < pool.size(); ++k) {
            r -= w[k];
            if (r < 0.0) {
              pick = k;
              break;
            }
          }
        }
        chosen.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
      }
      std::sort(chosen.begin(), chosen.end());
      for (int c : chosen) {
        double g = ability;
        if (!courses[static_cast<std::size_t>(c)].prereqs.empty()) g += ready(c) ? config.prep_bonus : -config.delta;
        if (config.sigma > 0.0) g += rng.normal(0.0, config.sigma);
        out.records.push_back({id, names[static_cast<std::size_t>(c)], term, quantize_points(std::clamp(g, 0.0, 4.0)),
                               "major" + std::to_string(major), kDefaultCredits});
      }
      for (int c : chosen) taken_at[static_cast<std::size_t>(c)] = p;
    }
  }
  return out;
}

void write_transcript_csv(std::span<const EnrollmentRecord> records, std::ostream& out) {
  out << "student_id,course_id,term,grade_letter,major,credits\n";
  for (const auto& r : records) {
    out << r.student << ',' << r.course << ',' << r.term << ',' << r.grade.name() << ',' << r.major << ','
        << r.credits << '\n';
  }
}

void write_offerings_csv(std::span<const OfferingRecord> offerings, std::ostream& out) {
  out << "course_id,term\n";
  for (const auto& o : offerings) out << o.course << ',' << o.term << '\n';
}

void write_edges_csv(std::span<const std::pair<std::string, std::string>> edges, std::ostream& out) {
  out << "src,dst\n";
  for (const auto& [a, b] : edges) out << a << ',' << b << '\n';
}

}  // namespace garec
