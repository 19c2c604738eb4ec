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

#include "garec/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <set>

#include "garec/errors.hpp"

namespace garec {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool blank(std::string_view line) { return trim(line).empty(); }

// Header name -> column index, with the required names checked.
class Header {
 public:
  Header(std::string_view line, std::initializer_list<std::string_view> required) {
    const auto fields = split_row(line);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      std::string name(fields[i]);
      // Tolerate a UTF-8 byte order mark on the first column.
      if (i == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0) name.erase(0, 3);
      columns_[name] = i;
    }
    for (auto name : required) {
      if (!columns_.contains(std::string(name))) {
        throw ParseError(1, "missing required column '" + std::string(name) + "'");
      }
    }
    width_ = fields.size();
  }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = columns_.find(std::string(name));
    if (it == columns_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t width() const { return width_; }

 private:
  std::map<std::string, std::size_t> columns_;
  std::size_t width_ = 0;
};

double parse_double(std::string_view text, std::size_t line, std::string_view what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, "invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

int parse_term_field(std::string_view text, std::size_t line) {
  try {
    return parse_term(text);
  } catch (const DataError& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace

Vocabulary Vocabulary::from_names(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  Vocabulary v;
  v.names_ = std::move(names);
  v.lookup_.reserve(v.names_.size());
  for (std::size_t i = 0; i < v.names_.size(); ++i) v.lookup_.emplace(v.names_[i], static_cast<std::int32_t>(i));
  return v;
}

std::optional<CourseId> Vocabulary::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return static_cast<CourseId>(it->second);
}

CourseId Vocabulary::at(std::string_view name) const {
  if (auto c = find(name)) return *c;
  throw DataError("unknown course '" + std::string(name) + "'");
}

int parse_term(std::string_view text) {
  text = trim(text);
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc() && ptr == text.data() + text.size()) return value;

  const std::size_t space = text.find(' ');
  if (space != std::string_view::npos) {
    const std::string_view season = text.substr(0, space);
    const std::string_view year_text = trim(text.substr(space + 1));
    int year = 0;
    auto [yp, yec] = std::from_chars(year_text.data(), year_text.data() + year_text.size(), year);
    if (yec == std::errc() && yp == year_text.data() + year_text.size()) {
      if (season == "Spring") return year * 3;
      if (season == "Summer") return year * 3 + 1;
      if (season == "Fall") return year * 3 + 2;
    }
  }
  throw DataError("unrecognized term '" + std::string(text) + "'");
}

TranscriptFile read_transcript_csv(std::istream& in) {
  TranscriptFile out;
  std::string line;
  std::size_t line_no = 0;
  std::optional<Header> header;
  std::optional<std::size_t> c_student, c_course, c_term, c_grade, c_major, c_credits;

  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (!header) {
      header.emplace(line, std::initializer_list<std::string_view>{"student_id", "course_id", "term", "grade_letter"});
      c_student = header->find("student_id");
      c_course = header->find("course_id");
      c_term = header->find("term");
      c_grade = header->find("grade_letter");
      c_major = header->find("major");
      c_credits = header->find("credits");
      continue;
    }
    const auto fields = split_row(line);
    if (fields.size() != header->width()) {
      throw ParseError(line_no, "expected " + std::to_string(header->width()) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    const std::string_view letter = fields[*c_grade];
    if (is_pass_fail_marker(letter)) {
      ++out.dropped_pass_fail;
      continue;
    }
    const auto grade = parse_letter(letter);
    if (!grade) throw ParseError(line_no, "unknown grade letter '" + std::string(letter) + "'");

    EnrollmentRecord r;
    r.student = std::string(fields[*c_student]);
    r.course = std::string(fields[*c_course]);
    if (r.student.empty() || r.course.empty()) throw ParseError(line_no, "empty student or course id");
    r.term = parse_term_field(fields[*c_term], line_no);
    r.grade = *grade;
    if (c_major) r.major = std::string(fields[*c_major]);
    if (c_credits && !fields[*c_credits].empty()) {
      r.credits = parse_double(fields[*c_credits], line_no, "credits");
      if (!(r.credits >= 0.0)) throw ParseError(line_no, "negative credits");
    }
    out.records.push_back(std::move(r));
  }
  if (!header) throw ParseError(line_no, "missing header row");
  return out;
}

std::vector<OfferingRecord> read_offerings_csv(std::istream& in) {
  std::vector<OfferingRecord> out;
  std::string line;
  std::size_t line_no = 0;
  std::optional<Header> header;
  std::optional<std::size_t> c_course, c_term;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (!header) {
      header.emplace(line, std::initializer_list<std::string_view>{"course_id", "term"});
      c_course = header->find("course_id");
      c_term = header->find("term");
      continue;
    }
    const auto fields = split_row(line);
    if (fields.size() != header->width()) throw ParseError(line_no, "wrong field count");
    if (fields[*c_course].empty()) throw ParseError(line_no, "empty course id");
    out.push_back({std::string(fields[*c_course]), parse_term_field(fields[*c_term], line_no)});
  }
  if (!header) throw ParseError(line_no, "missing header row");
  return out;
}

std::size_t StudentHistory::courses_before(std::size_t position) const {
  std::size_t n = 0;
  for (std::size_t p = 0; p < position && p < terms.size(); ++p) n += terms[p].courses.size();
  return n;
}

double StudentHistory::final_gpa() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& t : terms) {
    for (const auto& e : t.courses) {
      sum += e.grade.points();
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

std::optional<std::size_t> StudentHistory::position_of(int term) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), term,
                             [](const TermRecord& t, int value) { return t.term < value; });
  if (it == terms.end() || it->term != term) return std::nullopt;
  return static_cast<std::size_t>(it - terms.begin());
}

void Offerings::add(int term, CourseId course) { by_term_[term].push_back(course); }

void Offerings::finalize() {
  for (auto& [term, courses] : by_term_) {
    std::sort(courses.begin(), courses.end());
    courses.erase(std::unique(courses.begin(), courses.end()), courses.end());
  }
}

bool Offerings::offered(int term, CourseId course) const {
  const auto courses = at(term);
  return std::binary_search(courses.begin(), courses.end(), course);
}

std::span<const CourseId> Offerings::at(int term) const {
  auto it = by_term_.find(term);
  if (it == by_term_.end()) return {};
  return it->second;
}

Corpus Corpus::build(const TranscriptFile& transcripts, const std::optional<std::vector<OfferingRecord>>& offerings) {
  std::vector<std::string> names;
  names.reserve(transcripts.records.size());
  for (const auto& r : transcripts.records) names.push_back(r.course);
  if (offerings) {
    for (const auto& o : *offerings) names.push_back(o.course);
  }

  Corpus corpus;
  corpus.courses = Vocabulary::from_names(std::move(names));
  corpus.dropped_pass_fail = transcripts.dropped_pass_fail;

  std::map<std::string, std::size_t> student_index;
  for (const auto& r : transcripts.records) student_index.emplace(r.student, 0);
  corpus.students.resize(student_index.size());
  {
    std::size_t i = 0;
    for (auto& [id, idx] : student_index) {
      idx = i;
      corpus.students[i].id = id;
      ++i;
    }
  }

  // Group rows per (student, term), then order terms.
  std::vector<std::map<int, TermRecord>> grouped(corpus.students.size());
  for (const auto& r : transcripts.records) {
    const std::size_t s = student_index.at(r.student);
    auto& history = corpus.students[s];
    if (history.major.empty()) history.major = r.major;
    auto& term = grouped[s][r.term];
    term.term = r.term;
    term.courses.push_back({corpus.courses.at(r.course), r.grade, r.credits});
  }

  for (std::size_t s = 0; s < corpus.students.size(); ++s) {
    auto& history = corpus.students[s];
    for (auto& [t, record] : grouped[s]) {
      std::stable_sort(record.courses.begin(), record.courses.end(),
                       [](const Enrollment& a, const Enrollment& b) { return a.course < b.course; });
      for (std::size_t i = 1; i < record.courses.size(); ++i) {
        if (record.courses[i].course == record.courses[i - 1].course) {
          throw DataError("student '" + history.id + "' has course '" +
                          corpus.courses.name(record.courses[i].course) + "' twice in term " + std::to_string(t));
        }
      }
      history.terms.push_back(std::move(record));
    }

    history.prior_mean.assign(history.terms.size(), std::nullopt);
    history.prior_credits.assign(history.terms.size(), 0.0);
    double sum = 0.0, credits = 0.0;
    std::size_t n = 0;
    for (std::size_t p = 0; p < history.terms.size(); ++p) {
      if (n > 0) history.prior_mean[p] = sum / static_cast<double>(n);
      history.prior_credits[p] = credits;
      for (const auto& e : history.terms[p].courses) {
        sum += e.grade.points();
        credits += e.credits;
        ++n;
      }
    }
  }

  if (offerings) {
    for (const auto& o : *offerings) corpus.offerings.add(o.term, corpus.courses.at(o.course));
  } else {
    for (const auto& history : corpus.students) {
      for (const auto& term : history.terms) {
        for (const auto& e : term.courses) corpus.offerings.add(term.term, e.course);
      }
    }
  }
  corpus.offerings.finalize();
  return corpus;
}

Corpus parse_transcripts(std::istream& transcripts) { return Corpus::build(read_transcript_csv(transcripts)); }

Corpus parse_transcripts(std::istream& transcripts, std::istream& offerings) {
  return Corpus::build(read_transcript_csv(transcripts), read_offerings_csv(offerings));
}

std::vector<TrainingInstance> label_good_bad(const StudentHistory& history, std::size_t student_index) {
  std::vector<TrainingInstance> out;
  if (history.terms.size() < 2) return out;
  std::vector<CourseId> context;
  for (std::size_t p = 0; p < history.terms.size(); ++p) {
    if (p > 0 && history.prior_mean[p]) {
      TrainingInstance inst;
      inst.student = student_index;
      inst.position = p;
      inst.term = history.terms[p].term;
      inst.prior_mean = *history.prior_mean[p];
      inst.context = context;
      for (const auto& e : history.terms[p].courses) {
        if (e.grade.points() >= inst.prior_mean - kGradeTolerance) {
          inst.good.push_back(e.course);
        } else {
          inst.bad.push_back(e.course);
        }
      }
      out.push_back(std::move(inst));
    }
    for (const auto& e : history.terms[p].courses) {
      if (e.grade.counts_as_context()) context.push_back(e.course);
    }
    std::sort(context.begin(), context.end());
  }
  return out;
}

std::vector<TrainingInstance> build_instances(const Corpus& corpus) {
  std::vector<TrainingInstance> out;
  for (std::size_t s = 0; s < corpus.students.size(); ++s) {
    auto inst = label_good_bad(corpus.students[s], s);
    out.insert(out.end(), std::make_move_iterator(inst.begin()), std::make_move_iterator(inst.end()));
  }
  return out;
}

InstanceSplit split_by_time(std::span<const TrainingInstance> instances, int train_end, int valid_end) {
  if (!(train_end < valid_end)) {
    throw ConfigError("split boundaries must satisfy train_end < valid_end (got " + std::to_string(train_end) +
                      ", " + std::to_string(valid_end) + ")");
  }
  InstanceSplit split;
  for (const auto& inst : instances) {
    if (inst.term <= train_end) {
      split.train.push_back(inst);
    } else if (inst.term <= valid_end) {
      split.valid.push_back(inst);
    } else {
      split.test.push_back(inst);
    }
  }
  if (split.train.empty()) split.warnings.push_back("train partition is empty");
  if (split.valid.empty()) split.warnings.push_back("validation partition is empty");
  if (split.test.empty()) split.warnings.push_back("test partition is empty");
  return split;
}

bool excluded_by_history(const StudentHistory& history, std::size_t position, CourseId course) {
  const double mean = history.prior_mean.at(position).value_or(0.0);
  for (std::size_t p = 0; p < position; ++p) {
    for (const auto& e : history.terms[p].courses) {
      if (e.course != course) continue;
      const double g = e.grade.points();
      if (g >= kCPlusPoints || g >= mean - 1.0 - kGradeTolerance) return true;
    }
  }
  return false;
}

std::vector<CourseId> eligible_candidates(const StudentHistory& history, std::size_t position,
                                          const Offerings& offerings) {
  std::vector<CourseId> out;
  const int term = history.terms.at(position).term;
  for (CourseId c : offerings.at(term)) {
    if (!excluded_by_history(history, position, c)) out.push_back(c);
  }
  return out;
}

std::vector<std::uint8_t> known_courses(std::span<const TrainingInstance> train, std::size_t courses) {
  std::vector<std::uint8_t> known(courses, 0);
  for (const auto& inst : train) {
    for (CourseId c : inst.context) known[index(c)] = 1;
    for (CourseId c : inst.good) known[index(c)] = 1;
    for (CourseId c : inst.bad) known[index(c)] = 1;
  }
  return known;
}

AcademicLevel academic_level(double credits) {
  if (credits <= 30.0) return AcademicLevel::Freshman;
  if (credits <= 60.0) return AcademicLevel::Sophomore;
  if (credits <= 90.0) return AcademicLevel::Junior;
  return AcademicLevel::Senior;
}

std::vector<StudentHistory> truncate_histories(std::span<const StudentHistory> students, int last_term) {
  std::vector<StudentHistory> out;
  for (const auto& s : students) {
    StudentHistory h;
    h.id = s.id;
    h.major = s.major;
    for (std::size_t p = 0; p < s.terms.size() && s.terms[p].term <= last_term; ++p) {
      h.terms.push_back(s.terms[p]);
      h.prior_mean.push_back(s.prior_mean[p]);
      h.prior_credits.push_back(s.prior_credits[p]);
    }
    if (!h.terms.empty()) out.push_back(std::move(h));
  }
  return out;
}

}  // namespace garec
