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
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "garec/baselines.hpp"
#include "garec/corpus.hpp"
#include "garec/course2vec.hpp"
#include "garec/gradepred.hpp"
#include "garec/svd_embed.hpp"

namespace garec {

// Binary model files: an 8-byte magic, a format version, a kind tag, the
// variant, the course-id table and a kind-specific payload. Integers and
// doubles are stored little-endian.
enum class ModelKind : std::uint8_t {
  Svd = 1,
  Course2vec = 2,
  Knowledge = 3,
  Bias = 4,
  GroupPop = 5,
  Dependency = 6,
};

inline constexpr std::uint8_t kModelFormatVersion = 1;

std::string_view model_kind_name(ModelKind kind);

struct ModelHeader {
  ModelKind kind = ModelKind::Svd;
  Variant variant = Variant::Plus;
  std::vector<std::string> courses;
};

// Reads only the header. DataError on a bad magic, version or kind.
ModelHeader read_model_header(std::istream& in);

void save_model(const SvdEmbedding& model, const Vocabulary& courses, std::ostream& out);
void save_model(const EmbeddingModel& model, const Vocabulary& courses, std::ostream& out);
void save_model(const KnowledgeModel& model, const Vocabulary& courses, std::ostream& out);
void save_model(const BiasBaseline& model, const Vocabulary& courses, std::ostream& out);
void save_model(const GroupPopModel& model, const Vocabulary& courses, std::ostream& out);
void save_model(const DependencyGraph& graph, const Vocabulary& courses, std::ostream& out);

// Each loader checks the kind tag and that the stored course table equals
// `courses`; any mismatch or truncation is a DataError.
SvdEmbedding load_svd(std::istream& in, const Vocabulary& courses);
EmbeddingModel load_course2vec(std::istream& in, const Vocabulary& courses);
KnowledgeModel load_knowledge(std::istream& in, const Vocabulary& courses);
BiasBaseline load_bias(std::istream& in, const Vocabulary& courses);
GroupPopModel load_grouppop(std::istream& in, const Vocabulary& courses);
DependencyGraph load_dependency(std::istream& in, const Vocabulary& courses);

// File helpers; DataError when the file cannot be opened.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body,
                bool binary = false);
void read_file(const std::filesystem::path& path, const std::function<void(std::istream&)>& body,
               bool binary = false);

}  // namespace garec
