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

#include "garec/model_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "garec/errors.hpp"

namespace garec {

namespace {

constexpr std::array<char, 8> kMagic = {'G', 'A', 'R', 'E', 'C', 'M', 'D', 'L'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void i64(std::int64_t v) { le(static_cast<std::uint64_t>(v), 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void bytes(const std::vector<std::uint8_t>& v) {
    u64(v.size());
    for (std::uint8_t b : v) u8(b);
  }
  template <class M>
  void matrix(const M& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) f64(m(i, j));
    }
  }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::uint8_t u8() {
    const int c = in_.get();
    if (c == std::char_traits<char>::eof()) throw DataError("model file is truncated");
    return static_cast<std::uint8_t>(c);
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(le(8)); }
  double f64() { return std::bit_cast<double>(le(8)); }
  std::string str() {
    const std::uint32_t n = u32();
    std::string s(n, '\0');
    in_.read(s.data(), n);
    if (static_cast<std::uint32_t>(in_.gcount()) != n) throw DataError("model file is truncated");
    return s;
  }
  std::vector<std::uint8_t> bytes(std::size_t expected) {
    const std::uint64_t n = u64();
    if (n != expected) throw DataError("model file: unexpected mask length");
    std::vector<std::uint8_t> v(n);
    for (auto& b : v) b = u8();
    return v;
  }
  template <class M>
  M matrix(std::uint64_t rows) {
    const std::uint64_t r = u64();
    const std::uint64_t c = u64();
    if (r != rows || c > (1u << 20)) throw DataError("model file: matrix shape does not match the course table");
    M m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = f64();
    }
    return m;
  }

 private:
  std::uint64_t le(int n) {
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  std::istream& in_;
};

void write_header(Writer& w, ModelKind kind, Variant variant, const Vocabulary& courses) {
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u8(kModelFormatVersion);
  w.u8(static_cast<std::uint8_t>(kind));
  w.u8(static_cast<std::uint8_t>(variant));
  w.u64(courses.size());
  for (const auto& name : courses.names()) w.str(name);
}

ModelHeader read_header(Reader& r) {
  for (char c : kMagic) {
    if (r.u8() != static_cast<std::uint8_t>(c)) throw DataError("not a model file (bad magic)");
  }
  const std::uint8_t version = r.u8();
  if (version != kModelFormatVersion) {
    throw DataError("unsupported model format version " + std::to_string(version));
  }
  ModelHeader h;
  const std::uint8_t kind = r.u8();
  if (kind < 1 || kind > 6) throw DataError("unknown model kind tag " + std::to_string(kind));
  h.kind = static_cast<ModelKind>(kind);
  const std::uint8_t variant = r.u8();
  if (variant > 2) throw DataError("unknown variant tag " + std::to_string(variant));
  h.variant = static_cast<Variant>(variant);
  const std::uint64_t n = r.u64();
  if (n > (1u << 24)) throw DataError("model file: implausible course count");
  h.courses.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) h.courses.push_back(r.str());
  return h;
}

ModelHeader expect(Reader& r, ModelKind kind, const Vocabulary& courses) {
  ModelHeader h = read_header(r);
  if (h.kind != kind) {
    throw DataError("model file holds a " + std::string(model_kind_name(h.kind)) + " model, expected " +
                    std::string(model_kind_name(kind)));
  }
  if (h.courses != courses.names()) {
    std::string detail = std::to_string(h.courses.size()) + " courses in model, " + std::to_string(courses.size()) +
                         " in corpus";
    const std::size_t n = std::min(h.courses.size(), courses.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (h.courses[i] != courses.names()[i]) {
        detail += "; first difference at '" + h.courses[i] + "' vs '" + courses.names()[i] + "'";
        break;
      }
    }
    throw DataError("model vocabulary does not match corpus (" + detail + ")");
  }
  return h;
}

}  // namespace

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Svd:
      return "svd";
    case ModelKind::Course2vec:
      return "c2v";
    case ModelKind::Knowledge:
      return "knowledge";
    case ModelKind::Bias:
      return "bias";
    case ModelKind::GroupPop:
      return "grppop";
    case ModelKind::Dependency:
      return "depgraph";
  }
  return "?";
}

ModelHeader read_model_header(std::istream& in) {
  Reader r(in);
  return read_header(r);
}

void save_model(const SvdEmbedding& model, const Vocabulary& courses, std::ostream& out) {
  Writer w(out);
  write_header(w, ModelKind::Svd, model.variant, courses);
  w.bytes(model.known);
  w.u64(static_cast<std::uint64_t>(model.singular_values.size()));
  for (Eigen::Index i = 0; i < model.singular_values.size(); ++i) w.f64(model.singular_values(i));
  w.matrix(model.previous);
  w.matrix(model.subsequent);
}

SvdEmbedding load_svd(std::istream& in, const Vocabulary& courses) {
  Reader r(in);
  const ModelHeader h = expect(r, ModelKind::Svd, courses);
  SvdEmbedding m;
  m.variant = h.variant;
  m.known = r.bytes(courses.size());
  const std::uint64_t d = r.u64();
  if (d > courses.size()) throw DataError("model file: rank exceeds course count");
  m.singular_values.resize(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.singular_values.size(); ++i) m.singular_values(i) = r.f64();
  m.previous = r.matrix<Eigen::MatrixXd>(courses.size());
  m.subsequent = r.matrix<Eigen::MatrixXd>(courses.size());
  if (static_cast<std::uint64_t>(m.previous.cols()) != d || static_cast<std::uint64_t>(m.subsequent.cols()) != d) {
    throw DataError("model file: embedding width does not match rank");
  }
  return m;
}

void save_model(const EmbeddingModel& model, const Vocabulary& courses, std::ostream& out) {
  Writer w(out);
  write_header(w, ModelKind::Course2vec, model.variant, courses);
  w.bytes(model.known);
  w.matrix(model.input);
  w.matrix(model.output);
}

EmbeddingModel load_course2vec(std::istream& in, const Vocabulary& courses) {
  Reader r(in);
  const ModelHeader h = expect(r, ModelKind::Course2vec, courses);
  EmbeddingModel m;
  m.variant = h.variant;
  m.known = r.bytes(courses.size());
  m.input = r.matrix<RowMatrix>(courses.size());
  m.output = r.matrix<RowMatrix>(courses.size());
  if (m.input.cols() != m.output.cols()) throw DataError("model file: embedding widths differ");
  return m;
}

void save_model(const KnowledgeModel& model, const Vocabulary& courses, std::ostream& out) {
  Writer w(out);
  write_header(w, ModelKind::Knowledge, Variant::Plus, courses);
  w.u8(model.centered() ? 1 : 0);
  w.f64(model.bias());
  w.u8(model.known.empty() ? 0 : 1);
  if (!model.known.empty()) w.bytes(model.known);
  w.matrix(model.provided());
  w.matrix(model.required());
}

KnowledgeModel load_knowledge(std::istream& in, const Vocabulary& courses) {
  Reader r(in);
  expect(r, ModelKind::Knowledge, courses);
  const bool centered = r.u8() != 0;
  const double bias = r.f64();
  std::vector<std::uint8_t> known;
  if (r.u8() != 0) known = r.bytes(courses.size());
  auto provided = r.matrix<KnowledgeModel::Matrix>(courses.size());
  auto required = r.matrix<KnowledgeModel::Matrix>(courses.size());
  if (provided.cols() != required.cols()) throw DataError("model file: knowledge widths differ");
  KnowledgeModel m(std::move(provided), std::move(required), bias, centered);
  m.known = std::move(known);
  return m;
}

void save_model(const BiasBaseline& model, const Vocabulary& courses, std::ostream& out) {
  Writer w(out);
  write_header(w, ModelKind::Bias, Variant::Plus, courses);
  w.f64(model.global_mean());
  w.f64(model.lower());
  w.f64(model.upper());
  w.u64(model.course_offsets().size());
  for (double v : model.course_offsets()) w.f64(v);
  std::vector<std::pair<std::string, double>> students(model.student_offsets().begin(),
                                                       model.student_offsets().end());
  std::sort(students.begin(), students.end());
  w.u64(students.size());
  for (const auto& [id, v] : students) {
    w.str(id);
    w.f64(v);
  }
}

BiasBaseline load_bias(std::istream& in, const Vocabulary& courses) {
  Reader r(in);
  expect(r, ModelKind::Bias, courses);
  const double mean = r.f64();
  const double lo = r.f64();
  const double hi = r.f64();
  const std::uint64_t n = r.u64();
  if (n != courses.size()) throw DataError("model file: course offsets do not match the course table");
  std::vector<double> offsets(n);
  for (double& v : offsets) v = r.f64();
  std::unordered_map<std::string, double> students;
  const std::uint64_t m = r.u64();
  for (std::uint64_t i = 0; i < m; ++i) {
    std::string id = r.str();
    students.emplace(std::move(id), r.f64());
  }
  return BiasBaseline(mean, std::move(students), std::move(offsets), lo, hi);
}

void save_model(const GroupPopModel& model, const Vocabulary& courses, std::ostream& out) {
  Writer w(out);
  write_header(w, ModelKind::GroupPop, Variant::Plus, courses);
  w.u64(model.groups().size());
  for (const auto& [key, counts] : model.groups()) {
    w.str(key.first);
    w.u8(static_cast<std::uint8_t>(key.second));
    for (const auto& c : counts) {
      w.i64(c.good);
      w.i64(c.bad);
    }
  }
}

GroupPopModel load_grouppop(std::istream& in, const Vocabulary& courses) {
  Reader r(in);
  expect(r, ModelKind::GroupPop, courses);
  GroupPopModel m(courses.size());
  const std::uint64_t groups = r.u64();
  for (std::uint64_t g = 0; g < groups; ++g) {
    const std::string major = r.str();
    const std::uint8_t level = r.u8();
    if (level > 3) throw DataError("model file: bad academic level tag");
    for (std::size_t c = 0; c < courses.size(); ++c) {
      GroupPopModel::Counts counts;
      counts.good = r.i64();
      counts.bad = r.i64();
      m.set(major, static_cast<AcademicLevel>(level), course_at(c), counts);
    }
  }
  return m;
}

void save_model(const DependencyGraph& graph, const Vocabulary& courses, std::ostream& out) {
  Writer w(out);
  write_header(w, ModelKind::Dependency, Variant::Plus, courses);
  w.u64(graph.tested().size());
  for (const auto& e : graph.tested()) {
    w.u32(static_cast<std::uint32_t>(index(e.from)));
    w.u32(static_cast<std::uint32_t>(index(e.to)));
    w.f64(e.u);
    w.f64(e.p_value);
    w.u8(e.significant ? 1 : 0);
  }
}

DependencyGraph load_dependency(std::istream& in, const Vocabulary& courses) {
  Reader r(in);
  expect(r, ModelKind::Dependency, courses);
  const std::uint64_t n = r.u64();
  std::vector<DependencyEdge> tested;
  for (std::uint64_t i = 0; i < n; ++i) {
    DependencyEdge e;
    const std::uint32_t from = r.u32();
    const std::uint32_t to = r.u32();
    if (from >= courses.size() || to >= courses.size()) throw DataError("model file: edge endpoint out of range");
    e.from = course_at(from);
    e.to = course_at(to);
    e.u = r.f64();
    e.p_value = r.f64();
    e.significant = r.u8() != 0;
    tested.push_back(e);
  }
  return DependencyGraph(courses.size(), std::move(tested));
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body, bool binary) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  body(out);
  out.flush();
  if (!out) throw DataError("failed writing " + path.string());
}

void read_file(const std::filesystem::path& path, const std::function<void(std::istream&)>& body, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw DataError("cannot open " + path.string());
  body(in);
}

}  // namespace garec
