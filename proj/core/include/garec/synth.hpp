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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "garec/corpus.hpp"

namespace garec {

struct SynthConfig {
  std::uint64_t seed = 1;
  int majors = 5;
  int courses_per_major = 40;
  int students = 1000;
  int terms_per_student = 8;
  int min_load = 3;
  int max_load = 5;
  // Students start in a uniformly drawn term in [1, start_spread].
  int start_spread = 8;

  // Probability of an edge between two courses of the same major, from the
  // earlier-indexed course to the later one.
  double dag_density = 0.04;
  double delta = 1.0;       // grade penalty when any prerequisite is unmet
  double prep_bonus = 0.0;  // grade bonus when a course with prerequisites is ready
  double sigma = 0.4;
  double ability_mean = 3.2;
  double ability_spread = 0.5;

  // Course choice: weight exp(-slot_decay * |slot - position|), multiplied by
  // ready_boost for courses whose prerequisites are all done, and replaced by
  // a uniform draw with probability exploration.
  double slot_decay = 0.5;
  double ready_boost = 1.5;
  double exploration = 0.1;
  // Probability that a (course, term) offering is withheld.
  double offering_sparsity = 0.0;

  void validate() const;
};

struct SynthCorpus {
  std::vector<EnrollmentRecord> records;
  std::vector<OfferingRecord> offerings;
  std::vector<std::pair<std::string, std::string>> edges;  // (prerequisite, course)
};

SynthCorpus generate(const SynthConfig& config);

// Course ids produced by the generator: "m<major>c<index>".
std::string synth_course_name(int major, int index);

void write_transcript_csv(std::span<const EnrollmentRecord> records, std::ostream& out);
void write_offerings_csv(std::span<const OfferingRecord> offerings, std::ostream& out);
void write_edges_csv(std::span<const std::pair<std::string, std::string>> edges, std::ostream& out);

}  // namespace garec
