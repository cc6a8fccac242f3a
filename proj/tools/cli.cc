// Copyright 2026 The Detox Authors.
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

#include "cli.h"

#include <charconv>
#include <csignal>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "detox/classifier.h"
#include "detox/corpus_io.h"
#include "detox/errors.h"
#include "detox/evaluator.h"
#include "detox/language.h"
#include "detox/rewriter.h"
#include "detox/service.h"

namespace detox {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string lang;
  std::string data;
  std::string lexicon;
  std::string model;
  std::string out;
  int k = 5;
  uint64_t seed = 42;
  std::optional<double> threshold;
  std::optional<double> stopword_df;
  std::string stopword_balance;
  std::string grid;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string feedback_log = "feedback.jsonl";
  std::string static_dir;
  bool strict_lookup = false;
  bool holdout = false;
  bool serial = false;
  std::string text;
  std::string input;
};

std::vector<double> ParseDoubleList(const std::string& list, const char* flag) {
  std::vector<double> values;
  std::stringstream stream(list);
  std::string item;
  while (std::getline(stream, item, ',')) {
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw ConfigError(std::string("cannot parse ") + flag + " value '" +
                        item + "'");
    }
    values.push_back(value);
  }
  if (values.empty()) throw ConfigError(std::string(flag) + " is empty");
  return values;
}

// ISO-8601 form of SOURCE_DATE_EPOCH, or the Unix epoch, so that repeated
// runs produce identical model files.
std::string ReproducibleTimestamp() {
  std::time_t seconds = 0;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    seconds = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

TrainConfig BuildTrainConfig(const Options& options, Language language) {
  TrainConfig config = DefaultTrainConfig(language);
  config.seed = options.seed;
  if (options.threshold) config.threshold = *options.threshold;
  if (options.stopword_df) {
    config.stopwords.min_df_fraction = *options.stopword_df;
  }
  if (!options.stopword_balance.empty()) {
    auto band = ParseDoubleList(options.stopword_balance, "--stopword-balance");
    if (band.size() != 2) {
      throw ConfigError("--stopword-balance expects LOW,HIGH");
    }
    config.stopwords.balance_low = band[0];
    config.stopwords.balance_high = band[1];
  }
  if (!options.grid.empty()) {
    config.l2_strength_grid = ParseDoubleList(options.grid, "--grid");
  }
  config.trained_at = ReproducibleTimestamp();
  config.Validate();
  return config;
}

std::string FormatDouble(double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

std::string_view LabelTag(Label label) {
  return label == Label::kToxic ? "TOXIC" : "NON-TOXIC";
}

struct Rewriting {
  TrainedModel model;
  CorpusIndex corpus;
  Lexicon lexicon;
};

Rewriting LoadRewriting(const Options& options, Language language) {
  Rewriting r;
  r.model = LoadModel(options.model);
  if (r.model.language != language) {
    throw ConfigError("model " + options.model + " is for language '" +
                      std::string(LanguageCode(r.model.language)) + "'");
  }
  if (options.threshold) {
    if (!(*options.threshold > 0.0 && *options.threshold < 1.0)) {
      throw ConfigError("threshold must lie strictly between 0 and 1");
    }
    r.model.threshold = *options.threshold;
  }
  LookupMode mode =
      options.strict_lookup ? LookupMode::kStrict : LookupMode::kNormalized;
  if (!options.data.empty()) {
    r.corpus =
        CorpusIndex::Build(LoadParallelCorpus(options.data, language), mode);
  } else {
    r.corpus = CorpusIndex::Build({}, mode);
  }
  r.lexicon.language = language;
  if (!options.lexicon.empty()) {
    r.lexicon = LoadLexicon(options.lexicon, language);
  }
  return r;
}

int RunTrain(const Options& options, std::ostream& out) {
  Language language = LanguageFromCode(options.lang);
  TrainConfig config = BuildTrainConfig(options, language);
  auto pairs = LoadParallelCorpus(options.data, language);
  auto examples = DeriveLabeledSet(pairs);
  TrainedModel model = TrainPipeline(examples, config);
  SaveModel(model, options.out);
  out << "wrote " << options.out << ": " << model.vocabulary.size()
      << " terms, " << model.stopwords.size() << " stopwords, l2 "
      << model.training.l2_strength << ", "
      << (model.training.converged ? "converged" : "not converged") << " after "
      << model.training.iterations << " iterations\n";
  return 0;
}

int RunEval(const Options& options, std::ostream& out) {
  Language language = LanguageFromCode(options.lang);
  TrainConfig config = BuildTrainConfig(options, language);
  auto pairs = LoadParallelCorpus(options.data, language);
  EvalOptions eval_options;
  eval_options.parallel = !options.serial;
  EvalReport report =
      options.holdout
          ? EvaluateHoldout(pairs, config, options.seed, eval_options)
          : EvaluateKFold(pairs, config, options.k, options.seed, eval_options);
  out << RenderReportTable(report);
  if (!options.out.empty()) {
    WriteFileAtomic(options.out, ReportToJson(report).dump(1, '\t') + "\n");
  }
  return 0;
}

int RunDetox(const Options& options, std::ostream& out) {
  Language language = LanguageFromCode(options.lang);
  Rewriting r = LoadRewriting(options, language);
  DetoxResult result = Detoxify(options.text, r.model, r.corpus, r.lexicon);
  out << '[' << LabelTag(result.label) << "] " << result.output_text << '\n';
  return 0;
}

int RunBatch(const Options& options, std::ostream& out) {
  Language language = LanguageFromCode(options.lang);
  Rewriting r = LoadRewriting(options, language);
  std::string content = ReadTextFile(options.input);

  std::vector<std::string_view> lines;
  std::string_view rest = content;
  while (!rest.empty()) {
    size_t end = rest.find('\n');
    std::string_view line = rest.substr(0, end);
    if (line.ends_with('\r')) line.remove_suffix(1);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    rest.remove_prefix(end + 1);
  }
  if (lines.empty() ||
      lines.front().substr(0, lines.front().find('\t')) != "input") {
    throw ParseError("batch input must start with the header 'input'", 1);
  }

  std::ostringstream table;
  table << "input\tlabel\tprobability\tmethod\toutput\n";
  for (size_t i = 1; i < lines.size(); ++i) {
    std::string_view text = lines[i].substr(0, lines[i].find('\t'));
    DetoxResult result = Detoxify(text, r.model, r.corpus, r.lexicon);
    table << text << '\t' << LabelTag(result.label) << '\t'
          << FormatDouble(result.probability) << '\t'
          << DetoxMethodName(result.method) << '\t' << result.output_text
          << '\n';
  }
  if (options.out.empty()) {
    out << table.str();
  } else {
    WriteFileAtomic(options.out, table.str());
  }
  return 0;
}

HttpServer* g_server = nullptr;

void HandleSignal(int) {
  if (g_server) g_server->Stop();
}

int RunServe(const Options& options, std::ostream& out, std::ostream& err) {
  ServiceConfig config;
  config.models_dir = options.model;
  if (!options.data.empty()) config.corpus_dir = fs::path(options.data);
  if (!options.lexicon.empty()) config.lexicon_dir = fs::path(options.lexicon);
  config.feedback_log = options.feedback_log;
  config.lookup =
      options.strict_lookup ? LookupMode::kStrict : LookupMode::kNormalized;
  DetoxService service(config);
  for (const std::string& error : service.snapshot()->errors) {
    err << "warning: " << error << '\n';
  }

  std::optional<fs::path> static_dir;
  if (!options.static_dir.empty()) static_dir = fs::path(options.static_dir);
  HttpServer server(service, static_dir);
  int port = server.Bind(options.host, options.port);
  if (port < 0) {
    err << "error: cannot bind " << options.host << ':' << options.port << '\n';
    return 1;
  }
  out << "listening on http://" << options.host << ':' << port << std::endl;
  g_server = &server;
  std::signal(SIGINT, HandleSignal);
  std::signal(SIGTERM, HandleSignal);
  server.Listen();
  g_server = nullptr;
  return 0;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  Options options;
  CLI::App app{"Toxicity detection and detoxification for isiXhosa and Yoruba"};
  app.require_subcommand(1);

  auto add_lang = [&](CLI::App* cmd) {
    cmd->add_option("--lang", options.lang, "Language code (xh or yo)")
        ->required();
  };
  auto add_training = [&](CLI::App* cmd) {
    cmd->add_option("--seed", options.seed, "Random seed");
    cmd->add_option("--threshold", options.threshold,
                    "Decision threshold (default 0.45 xh, 0.50 yo)");
    cmd->add_option("--stopword-df", options.stopword_df,
                    "Minimum stopword document-frequency fraction");
    cmd->add_option("--stopword-balance", options.stopword_balance,
                    "Stopword toxic-share band LOW,HIGH");
    cmd->add_option("--grid", options.grid, "Comma-separated L2 strengths");
  };
  auto add_rewriting = [&](CLI::App* cmd) {
    cmd->add_option("--model", options.model, "Model file (.detoxmodel)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--data", options.data, "Parallel corpus TSV for lookup")
        ->check(CLI::ExistingFile);
    cmd->add_option("--lexicon", options.lexicon, "Lexicon TSV")
        ->check(CLI::ExistingFile);
    cmd->add_option("--threshold", options.threshold,
                    "Override the model's threshold");
    cmd->add_flag("--strict-lookup", options.strict_lookup,
                  "Match corpus sentences byte-exactly");
  };

  CLI::App* train = app.add_subcommand("train", "Train a model");
  add_lang(train);
  train->add_option("--data", options.data, "Parallel corpus TSV")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--out", options.out, "Output .detoxmodel path")
      ->required();
  add_training(train);

  CLI::App* eval = app.add_subcommand("eval", "Stratified K-fold evaluation");
  add_lang(eval);
  eval->add_option("--data", options.data, "Parallel corpus TSV")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--out", options.out, "Report JSON path");
  eval->add_option("--k", options.k, "Number of folds")
      ->check(CLI::Range(2, 1000));
  eval->add_flag("--holdout", options.holdout,
                 "Single stratified 80/20 split instead of K folds");
  eval->add_flag("--serial", options.serial, "Evaluate folds sequentially");
  add_training(eval);

  CLI::App* detox = app.add_subcommand("detox", "Detoxify one sentence");
  add_lang(detox);
  add_rewriting(detox);
  detox->add_option("text", options.text, "Sentence to process")->required();

  CLI::App* batch = app.add_subcommand("batch", "Detoxify a TSV of sentences");
  add_lang(batch);
  add_rewriting(batch);
  batch->add_option("input", options.input, "Input TSV with header 'input'")
      ->required()
      ->check(CLI::ExistingFile);
  batch->add_option("--out", options.out, "Output TSV (default stdout)");

  CLI::App* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve
      ->add_option("--model", options.model,
                   "Directory of <lang>.detoxmodel files")
      ->required();
  serve->add_option("--data", options.data, "Directory of <lang>.tsv corpora");
  serve->add_option("--lexicon", options.lexicon,
                    "Directory of <lang>.tsv lexicons");
  serve->add_option("--port", options.port, "Port (0 picks a free port)");
  serve->add_option("--host", options.host, "Bind address");
  serve->add_option("--feedback-log", options.feedback_log,
                    "Append-only feedback log");
  serve->add_option("--static", options.static_dir, "Directory served under /");
  serve->add_flag("--strict-lookup", options.strict_lookup,
                  "Match corpus sentences byte-exactly");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*train) return RunTrain(options, out);
    if (*eval) return RunEval(options, out);
    if (*detox) return RunDetox(options, out);
    if (*batch) return RunBatch(options, out);
    if (*serve) return RunServe(options, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace detox
