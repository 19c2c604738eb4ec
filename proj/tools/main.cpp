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

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#ifdef GAREC_CLI11_SINGLE_HEADER
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "garec/config.hpp"
#include "garec/errors.hpp"
#include "garec/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grade-aware course recommendation: synthetic data, training, recommendation and evaluation"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool emit_histogram = false;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "Config file (key = value lines)")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Seed for generation and training");
  app.add_option("--threads", threads, "Worker threads for select")->check(CLI::PositiveNumber);
  app.add_flag("--emit-histogram", emit_histogram, "Also write the grade-deviation histogram (evaluate)");
  app.add_option("--set", overrides, "Override a config key, as key=value (repeatable)");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus, offerings and planted prerequisite DAG");
  auto* train = app.add_subcommand("train", "Train the configured backend (and grade predictor) on the train split");
  auto* recommend = app.add_subcommand("recommend", "Rank candidate courses for one student and term");
  std::string student;
  std::string term_text;
  std::optional<std::size_t> top_n;
  recommend->add_option("--student", student, "Student id")->required();
  recommend->add_option("--term", term_text, "Target term (integer or e.g. \"Fall 2014\")")->required();
  recommend->add_option("--n", top_n, "List length")->check(CLI::PositiveNumber);
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate trained models and write report files");
  auto* select = app.add_subcommand("select", "Grid-search d, samples and alpha on the validation split");
  auto* config_cmd = app.add_subcommand("config", "Show the effective configuration");
  bool dump = false;
  config_cmd->add_flag("--dump", dump, "Print every key with its value");
  for (auto* sub : {synth, train, recommend, evaluate, select, config_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    garec::RunConfig config = config_path.empty() ? garec::RunConfig{} : garec::load_config(config_path);
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw garec::ConfigError("--set expects key=value, got '" + o + "'");
      config.set(o.substr(0, eq), o.substr(eq + 1));
    }
    if (seed) config.seed = *seed;
    if (threads) config.threads = *threads;
    if (emit_histogram) config.eval.emit_histogram = true;
    if (top_n) config.recommend.n = *top_n;
    config.validate();

    if (synth->parsed()) {
      garec::cmd_synth(config, std::cerr);
    } else if (train->parsed()) {
      garec::cmd_train(config, std::cerr);
    } else if (recommend->parsed()) {
      int term = 0;
      try {
        term = garec::parse_term(term_text);
      } catch (const garec::Error& e) {
        throw garec::ConfigError(std::string("--term: ") + e.what());
      }
      garec::cmd_recommend(config, student, term, std::cout);
    } else if (evaluate->parsed()) {
      garec::cmd_evaluate(config, std::cerr);
    } else if (select->parsed()) {
      garec::cmd_select(config, std::cerr);
    } else if (config_cmd->parsed()) {
      garec::dump_config(config, std::cout);
    }
    return kExitOk;
  } catch (const garec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const garec::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const garec::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
}
