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

#include "garec/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "garec/errors.hpp"

namespace garec {

std::string BackendSpec::name() const {
  switch (family) {
    case BackendFamily::Svd:
      return "svd-" + std::string(variant_name(variant));
    case BackendFamily::Course2vec:
      return "c2v-" + std::string(variant_name(variant));
    case BackendFamily::GroupPop:
      return "grppop-" + std::string(variant_name(variant));
    case BackendFamily::Dependency:
      return "depgraph";
  }
  return "?";
}

BackendSpec parse_backend(std::string_view text) {
  if (text == "depgraph") return {BackendFamily::Dependency, Variant::Plus};
  const auto dash = text.find('-');
  if (dash != std::string_view::npos) {
    const auto family = text.substr(0, dash);
    const auto variant = parse_variant(text.substr(dash + 1));
    if (variant) {
      if (family == "svd") return {BackendFamily::Svd, *variant};
      if (family == "c2v") return {BackendFamily::Course2vec, *variant};
      if (family == "grppop") return {BackendFamily::GroupPop, *variant};
    }
  }
  throw ConfigError("unknown backend '" + std::string(text) +
                    "' (expected svd-<variant>, c2v-<variant>, grppop-<variant> or depgraph)");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " +
                    std::string(expected) + ")");
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const std::string v = trim(value);
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    bad_value(key, value, std::is_floating_point_v<T> ? "a number" : "an integer");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, value, "true or false");
}

template <class T>
std::vector<T> parse_list(std::string_view key, std::string_view value) {
  std::vector<T> out;
  std::string_view rest = value;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_number<T>(key, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <class T>
std::string fmt_list(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

struct Field {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view key, std::string_view value)> set;
};

template <class T>
Field number(std::string key, T RunConfig::*member) {
  return {key, [member](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return fmt(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          },
          [member](RunConfig& c, std::string_view k, std::string_view v) { c.*member = parse_number<T>(k, v); }};
}

// Fields nested one level down: number(key, &RunConfig::c2v, &C2v::epochs).
template <class S, class T>
Field number(std::string key, S RunConfig::*section, T S::*member) {
  return {key, [section, member](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return fmt(c.*section.*member);
            } else {
              return std::to_string(c.*section.*member);
            }
          },
          [section, member](RunConfig& c, std::string_view k, std::string_view v) {
            c.*section.*member = parse_number<T>(k, v);
          }};
}

template <class S>
Field flag(std::string key, S RunConfig::*section, bool S::*member) {
  return {key, [section, member](const RunConfig& c) { return std::string(c.*section.*member ? "true" : "false"); },
          [section, member](RunConfig& c, std::string_view k, std::string_view v) {
            c.*section.*member = parse_bool(k, v);
          }};
}

template <class S>
Field text(std::string key, S RunConfig::*section, std::string S::*member) {
  return {key, [section, member](const RunConfig& c) { return c.*section.*member; },
          [section, member](RunConfig& c, std::string_view, std::string_view v) { c.*section.*member = trim(v); }};
}

const std::vector<Field>& fields() {
  using RC = RunConfig;
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(text("paths.corpus", &RC::paths, &RC::Paths::corpus));
    f.push_back(text("paths.offerings", &RC::paths, &RC::Paths::offerings));
    f.push_back(text("paths.dag", &RC::paths, &RC::Paths::dag));
    f.push_back(text("paths.model_dir", &RC::paths, &RC::Paths::model_dir));
    f.push_back(text("paths.report_dir", &RC::paths, &RC::Paths::report_dir));
    f.push_back(number("split.train_end", &RC::split, &RC::Split::train_end));
    f.push_back(number("split.valid_end", &RC::split, &RC::Split::valid_end));
    f.push_back(number("seed", &RC::seed));
    f.push_back(number("threads", &RC::threads));
    f.push_back({"backend", [](const RC& c) { return c.backend.name(); },
                 [](RC& c, std::string_view, std::string_view v) { c.backend = parse_backend(trim(v)); }});
    f.push_back({"hybrid.predictor",
                 [](const RC& c) {
                   switch (c.hybrid.predictor) {
                     case PredictorKind::None:
                       return std::string("none");
                     case PredictorKind::Knowledge:
                       return std::string("knowledge");
                     case PredictorKind::Bias:
                       return std::string("bias");
                   }
                   return std::string("none");
                 },
                 [](RC& c, std::string_view k, std::string_view v) {
                   const std::string t = trim(v);
                   if (t == "none") {
                     c.hybrid.predictor = PredictorKind::None;
                   } else if (t == "knowledge") {
                     c.hybrid.predictor = PredictorKind::Knowledge;
                   } else if (t == "bias") {
                     c.hybrid.predictor = PredictorKind::Bias;
                   } else {
                     bad_value(k, v, "none, knowledge or bias");
                   }
                 }});
    f.push_back(number("hybrid.alpha", &RC::hybrid, &RC::Hybrid::alpha));
    f.push_back({"hybrid.population",
                 [](const RC& c) {
                   return std::string(c.hybrid.population == StandardizeOver::Candidates ? "candidates"
                                                                                         : "offerings");
                 },
                 [](RC& c, std::string_view k, std::string_view v) {
                   const std::string t = trim(v);
                   if (t == "candidates") {
                     c.hybrid.population = StandardizeOver::Candidates;
                   } else if (t == "offerings") {
                     c.hybrid.population = StandardizeOver::TermOfferings;
                   } else {
                     bad_value(k, v, "candidates or offerings");
                   }
                 }});
    f.push_back(number("model.d", &RC::d));
    f.push_back({"svd.method",
                 [](const RC& c) {
                   switch (c.svd_method) {
                     case SvdMethod::Auto:
                       return std::string("auto");
                     case SvdMethod::Dense:
                       return std::string("dense");
                     case SvdMethod::Iterative:
                       return std::string("iterative");
                   }
                   return std::string("auto");
                 },
                 [](RC& c, std::string_view k, std::string_view v) {
                   const std::string t = trim(v);
                   if (t == "auto") {
                     c.svd_method = SvdMethod::Auto;
                   } else if (t == "dense") {
                     c.svd_method = SvdMethod::Dense;
                   } else if (t == "iterative") {
                     c.svd_method = SvdMethod::Iterative;
                   } else {
                     bad_value(k, v, "auto, dense or iterative");
                   }
                 }});
    f.push_back(number("c2v.samples", &RC::c2v, &RC::C2v::samples));
    f.push_back(number("c2v.freq_threshold", &RC::c2v, &RC::C2v::freq_threshold));
    f.push_back(number("c2v.epochs", &RC::c2v, &RC::C2v::epochs));
    f.push_back(number("c2v.lr", &RC::c2v, &RC::C2v::learning_rate));
    f.push_back(flag("c2v.full_denominator", &RC::c2v, &RC::C2v::full_denominator));
    f.push_back(number("knowledge.k", &RC::knowledge, &RC::Knowledge::k));
    f.push_back(number("knowledge.epochs", &RC::knowledge, &RC::Knowledge::epochs));
    f.push_back(number("knowledge.lr", &RC::knowledge, &RC::Knowledge::learning_rate));
    f.push_back(number("knowledge.l2", &RC::knowledge, &RC::Knowledge::l2));
    f.push_back(flag("knowledge.centered", &RC::knowledge, &RC::Knowledge::centered));
    f.push_back(number("bias.shrinkage", &RC::bias_shrinkage));
    f.push_back(number("depgraph.alpha", &RC::depgraph, &RC::Depgraph::alpha));
    f.push_back(number("depgraph.min_n", &RC::depgraph, &RC::Depgraph::min_n));
    f.push_back(text("eval.split", &RC::eval, &RC::Eval::split));
    f.push_back(number("eval.lambda", &RC::eval, &RC::Eval::lambda));
    f.push_back(number("eval.gpa_a", &RC::eval, &RC::Eval::gpa_a));
    f.push_back(number("eval.gpa_b", &RC::eval, &RC::Eval::gpa_b));
    f.push_back(flag("eval.emit_histogram", &RC::eval, &RC::Eval::emit_histogram));
    f.push_back(flag("eval.degree_similarity", &RC::eval, &RC::Eval::degree_similarity));
    f.push_back(number("recommend.n", &RC::recommend, &RC::Recommend::n));
    f.push_back({"select.d", [](const RC& c) { return fmt_list(c.select.d); },
                 [](RC& c, std::string_view k, std::string_view v) { c.select.d = parse_list<std::size_t>(k, v); }});
    f.push_back({"select.samples", [](const RC& c) { return fmt_list(c.select.samples); },
                 [](RC& c, std::string_view k, std::string_view v) {
                   c.select.samples = parse_list<std::size_t>(k, v);
                 }});
    f.push_back({"select.alpha", [](const RC& c) { return fmt_list(c.select.alpha); },
                 [](RC& c, std::string_view k, std::string_view v) { c.select.alpha = parse_list<double>(k, v); }});
    f.push_back(number("synth.majors", &RC::synth, &SynthConfig::majors));
    f.push_back(number("synth.courses_per_major", &RC::synth, &SynthConfig::courses_per_major));
    f.push_back(number("synth.students", &RC::synth, &SynthConfig::students));
    f.push_back(number("synth.terms", &RC::synth, &SynthConfig::terms_per_student));
    f.push_back(number("synth.min_load", &RC::synth, &SynthConfig::min_load));
    f.push_back(number("synth.max_load", &RC::synth, &SynthConfig::max_load));
    f.push_back(number("synth.start_spread", &RC::synth, &SynthConfig::start_spread));
    f.push_back(number("synth.dag_density", &RC::synth, &SynthConfig::dag_density));
    f.push_back(number("synth.delta", &RC::synth, &SynthConfig::delta));
    f.push_back(number("synth.prep_bonus", &RC::synth, &SynthConfig::prep_bonus));
    f.push_back(number("synth.sigma", &RC::synth, &SynthConfig::sigma));
    f.push_back(number("synth.ability_mean", &RC::synth, &SynthConfig::ability_mean));
    f.push_back(number("synth.ability_spread", &RC::synth, &SynthConfig::ability_spread));
    f.push_back(number("synth.slot_decay", &RC::synth, &SynthConfig::slot_decay));
    f.push_back(number("synth.ready_boost", &RC::synth, &SynthConfig::ready_boost));
    f.push_back(number("synth.exploration", &RC::synth, &SynthConfig::exploration));
    f.push_back(number("synth.offering_sparsity", &RC::synth, &SynthConfig::offering_sparsity));
    return f;
  }();
  return table;
}

const Field& field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) { field(key).set(*this, key, value); }

std::string RunConfig::get(std::string_view key) const { return field(key).get(*this); }

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.key);
    return out;
  }();
  return names;
}

void RunConfig::validate() const {
  if (split.train_end >= split.valid_end) throw ConfigError("split.train_end must be < split.valid_end");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (d < 1) throw ConfigError("model.d must be >= 1");
  if (hybrid.predictor != PredictorKind::None) hybrid_config().validate();
  c2v_config().validate();
  if (knowledge.k < 1 || knowledge.epochs < 1 || !(knowledge.learning_rate > 0.0) || !(knowledge.l2 >= 0.0)) {
    throw ConfigError("knowledge.*: k, epochs and lr must be positive and l2 nonnegative");
  }
  if (!(bias_shrinkage >= 0.0)) throw ConfigError("bias.shrinkage must be >= 0");
  if (!(depgraph.alpha > 0.0 && depgraph.alpha < 1.0)) throw ConfigError("depgraph.alpha must be in (0,1)");
  if (eval.split != "test" && eval.split != "valid") throw ConfigError("eval.split must be test or valid");
  if (!(eval.lambda >= 0.0)) throw ConfigError("eval.lambda must be >= 0");
  if (!(eval.gpa_b <= eval.gpa_a)) throw ConfigError("eval.gpa_b must be <= eval.gpa_a");
  if (recommend.n < 1) throw ConfigError("recommend.n must be >= 1");
  if (select.d.empty() || select.samples.empty() || select.alpha.empty()) {
    throw ConfigError("select.* grids must be nonempty");
  }
  for (auto v : select.d) {
    if (v < 1) throw ConfigError("select.d values must be >= 1");
  }
  for (auto v : select.samples) {
    if (v < 1) throw ConfigError("select.samples values must be >= 1");
  }
  for (auto v : select.alpha) {
    if (!(v > 0.0 && v < 1.0)) throw ConfigError("select.alpha values must be in (0,1)");
  }
}

TrainConfig RunConfig::c2v_config() const {
  TrainConfig t;
  t.variant = backend.variant;
  t.dims = d;
  t.samples = c2v.samples;
  t.freq_threshold = c2v.freq_threshold;
  t.epochs = c2v.epochs;
  t.learning_rate = c2v.learning_rate;
  t.seed = seed;
  t.full_denominator = c2v.full_denominator;
  return t;
}

KnowledgeConfig RunConfig::knowledge_config() const {
  KnowledgeConfig k;
  k.k = knowledge.k;
  k.epochs = knowledge.epochs;
  k.learning_rate = knowledge.learning_rate;
  k.l2 = knowledge.l2;
  k.seed = seed;
  k.centered_grades = knowledge.centered;
  return k;
}

SvdOptions RunConfig::svd_options() const {
  SvdOptions o;
  o.method = svd_method;
  o.seed = seed;
  return o;
}

HybridConfig RunConfig::hybrid_config() const {
  HybridConfig h;
  h.alpha = hybrid.alpha;
  h.population = hybrid.population;
  return h;
}

void apply_config(RunConfig& config, std::istream& in) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    }
    try {
      config.set(trim(std::string_view(body).substr(0, eq)), std::string_view(body).substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(number) + ": " + e.what());
    }
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  RunConfig c;
  apply_config(c, in);
  return c;
}

void dump_config(const RunConfig& config, std::ostream& out) {
  std::string section = "paths";
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string s = dot == std::string::npos ? std::string() : f.key.substr(0, dot);
    if (s != section) {
      out << '\n';
      section = s;
    }
    out << f.key << " = " << f.get(config) << '\n';
  }
}

}  // namespace garec
