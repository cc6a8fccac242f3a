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

#include "detox/corpus_io.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "detox/errors.h"
#include "detox/normalizer.h"
#include "json.hpp"

namespace detox {
namespace {

using nlohmann::json;

std::string_view TrimAscii(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  size_t begin = s.find_first_not_of(kSpace);
  if (begin == std::string_view::npos) return {};
  size_t end = s.find_last_not_of(kSpace);
  return s.substr(begin, end - begin + 1);
}

struct Line {
  size_t number;
  std::string_view text;
};

// Splits on LF, drops a trailing CR and a leading byte-order mark.
std::vector<Line> SplitLines(std::string_view content) {
  if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);
  std::vector<Line> lines;
  size_t number = 1;
  while (!content.empty()) {
    size_t end = content.find('\n');
    std::string_view line = content.substr(0, end);
    if (line.ends_with('\r')) line.remove_suffix(1);
    lines.push_back({number++, line});
    if (end == std::string_view::npos) break;
    content.remove_prefix(end + 1);
  }
  return lines;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    size_t tab = line.find('\t');
    fields.push_back(line.substr(0, tab));
    if (tab == std::string_view::npos) break;
    line.remove_prefix(tab + 1);
  }
  return fields;
}

// Data rows of a two-column TSV after checking the header.
std::vector<std::pair<size_t, std::pair<std::string_view, std::string_view>>>
ReadTwoColumnRows(std::string_view content, std::string_view header) {
  std::vector<Line> lines = SplitLines(content);
  std::vector<std::pair<size_t, std::pair<std::string_view, std::string_view>>>
      rows;
  if (lines.empty()) return rows;
  if (lines.front().text != header) {
    throw ParseError("expected header '" + std::string(header) + "'", 1);
  }
  for (size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.text.empty()) continue;
    std::vector<std::string_view> fields = SplitTabs(line.text);
    if (fields.size() != 2) {
      throw ParseError("expected 2 tab-separated columns, found " +
                           std::to_string(fields.size()),
                       line.number);
    }
    rows.push_back({line.number, {TrimAscii(fields[0]), TrimAscii(fields[1])}});
  }
  return rows;
}

const json& Field(const json& object, const char* key) {
  if (!object.is_object() || !object.contains(key)) {
    throw FormatVersionError(std::string("model document lacks field '") + key +
                             "'");
  }
  return object.at(key);
}

template <typename T>
T FieldAs(const json& object, const char* key) {
  try {
    return Field(object, key).get<T>();
  } catch (const json::exception& e) {
    throw FormatVersionError(std::string("model field '") + key +
                             "' has the wrong type: " + e.what());
  }
}

}  // namespace

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());
  if (!IsValidUtf8(content)) {
    throw EncodingError(path.string() + " is not valid UTF-8");
  }
  return content;
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view content) {
  std::filesystem::path temp = path;
  temp += ".tmp-" + std::to_string(::getpid());
  int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw IoError("cannot create " + temp.string() + ": " +
                  std::strerror(errno));
  }
  const char* data = content.data();
  size_t remaining = content.size();
  while (remaining > 0) {
    ssize_t written = ::write(fd, data, remaining);
    if (written < 0) {
      if (errno == EINTR) continue;
      int err = errno;
      ::close(fd);
      ::unlink(temp.c_str());
      throw IoError("write to " + temp.string() +
                    " failed: " + std::strerror(err));
    }
    data += written;
    remaining -= static_cast<size_t>(written);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    ::unlink(temp.c_str());
    throw IoError("cannot flush " + temp.string());
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    ::unlink(temp.c_str());
    throw IoError("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::vector<ParallelPair> ParseParallelCorpus(std::string_view content,
                                              Language language) {
  std::vector<ParallelPair> pairs;
  std::unordered_map<std::string_view, size_t> first_seen;
  for (const auto& [line, row] : ReadTwoColumnRows(content, kCorpusHeader)) {
    const auto& [toxic, detox] = row;
    if (toxic.empty() || detox.empty()) {
      throw ParseError("empty sentence", line);
    }
    if (toxic == detox) {
      throw ParseError("toxic and detoxified sides are identical", line);
    }
    auto [it, inserted] = first_seen.emplace(toxic, line);
    if (!inserted) {
      throw DuplicateKeyError("line " + std::to_string(line) +
                              ": toxic sentence already given on line " +
                              std::to_string(it->second));
    }
    pairs.push_back({std::string(toxic), std::string(detox), language});
  }
  if (pairs.empty()) throw EmptyCorpusError("corpus has no data rows");
  return pairs;
}

std::vector<ParallelPair> LoadParallelCorpus(const std::filesystem::path& path,
                                             Language language) {
  try {
    return ParseParallelCorpus(ReadTextFile(path), language);
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  } catch (const DuplicateKeyError& e) {
    throw DuplicateKeyError(path.string() + ": " + e.what());
  } catch (const EmptyCorpusError& e) {
    throw EmptyCorpusError(path.string() + ": " + e.what());
  }
}

std::vector<LabeledExample> DeriveLabeledSet(
    std::span<const ParallelPair> pairs) {
  if (pairs.empty()) {
    throw InvalidArgumentError("cannot derive a labeled set from no pairs");
  }
  std::vector<LabeledExample> examples;
  examples.reserve(pairs.size() * 2);
  for (const ParallelPair& pair : pairs) {
    examples.push_back({pair.toxic_text, Label::kToxic, pair.language});
    examples.push_back({pair.detox_text, Label::kNonToxic, pair.language});
  }
  return examples;
}

Lexicon ParseLexicon(std::string_view content, Language language) {
  Lexicon lexicon{language, {}};
  std::map<std::string, size_t> key_line;
  auto rows = ReadTwoColumnRows(content, kLexiconHeader);
  for (const auto& [line, row] : rows) {
    const auto& [raw_key, replacement] = row;
    NormalizedSentence key = Normalize(raw_key);
    if (key.tokens.empty() || replacement.empty()) {
      throw ParseError("empty lexicon key or replacement", line);
    }
    if (key.tokens.size() > 2) {
      throw ParseError("lexicon keys may span at most two words", line);
    }
    if (Normalize(replacement).text == key.text) {
      throw ParseError("'" + key.text + "' maps to itself", line);
    }
    auto [it, inserted] = key_line.emplace(key.text, line);
    if (!inserted) {
      throw ParseError("key '" + key.text + "' already defined on line " +
                           std::to_string(it->second),
                       line);
    }
    lexicon.entries.emplace(key.text, std::string(replacement));
  }
  // Substituted text must not contain a key, so a replacement may neither
  // hold one nor complete a two-word key together with a neighbour.
  std::set<std::string> first_words;
  std::set<std::string> second_words;
  for (const auto& [key, replacement] : lexicon.entries) {
    size_t space = key.find(' ');
    if (space == std::string::npos) continue;
    first_words.insert(key.substr(0, space));
    second_words.insert(key.substr(space + 1));
  }
  for (const auto& [key, replacement] : lexicon.entries) {
    const size_t line = key_line[key];
    std::vector<std::string> words = Normalize(replacement).tokens;
    if (words.empty()) {
      throw ParseError("replacement for '" + key + "' has no words", line);
    }
    for (size_t i = 0; i < words.size(); ++i) {
      bool hit = lexicon.entries.contains(words[i]) ||
                 (i + 1 < words.size() &&
                  lexicon.entries.contains(words[i] + " " + words[i + 1]));
      if (hit) {
        throw ParseError("replacement for '" + key + "' contains a lexicon key",
                         line);
      }
    }
    if (second_words.contains(words.front()) ||
        first_words.contains(words.back())) {
      throw ParseError("replacement for '" + key +
                           "' can form a two-word key with adjacent text",
                       line);
    }
  }
  return lexicon;
}

Lexicon LoadLexicon(const std::filesystem::path& path, Language language) {
  try {
    return ParseLexicon(ReadTextFile(path), language);
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  }
}

std::string SerializeModel(const TrainedModel& model) {
  json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelFormatVersion;
  doc["language"] = LanguageCode(model.language);
  doc["idf"] = "ln";
  doc["ngram_range"] = {1, 2};
  doc["vocabulary"] = {{"corpus_size", model.vocabulary.corpus_size()},
                       {"terms", model.vocabulary.terms()},
                       {"doc_freq", model.vocabulary.doc_freq()}};
  doc["weights"] = model.weights;
  doc["bias"] = model.bias;
  doc["threshold"] = model.threshold;
  doc["stopwords"] = model.stopwords;
  doc["trained_at"] = model.trained_at;
  doc["config_fingerprint"] = model.config_fingerprint;
  doc["training"] = {{"l2_strength", model.training.l2_strength},
                     {"iterations", model.training.iterations},
                     {"converged", model.training.converged},
                     {"warnings", model.training.warnings}};
  return doc.dump(1, '\t') + "\n";
}

TrainedModel DeserializeModel(std::string_view document) {
  json doc = json::parse(document, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw FormatVersionError("model document is not a JSON object");
  }
  if (FieldAs<std::string>(doc, "format") != kModelFormat) {
    throw FormatVersionError("not a detoxmodel document");
  }
  int version = FieldAs<int>(doc, "version");
  if (version != kModelFormatVersion) {
    throw FormatVersionError("unsupported model format version " +
                             std::to_string(version) + " (expected " +
                             std::to_string(kModelFormatVersion) + ")");
  }
  if (FieldAs<std::string>(doc, "idf") != "ln" ||
      FieldAs<std::vector<int>>(doc, "ngram_range") != std::vector<int>{1, 2}) {
    throw FormatVersionError("unsupported feature settings");
  }

  TrainedModel model;
  auto language = ParseLanguage(FieldAs<std::string>(doc, "language"));
  if (!language) throw IntegrityError("model has an unknown language code");
  model.language = *language;

  const json& vocab = Field(doc, "vocabulary");
  model.vocabulary =
      Vocabulary(FieldAs<std::vector<std::string>>(vocab, "terms"),
                 FieldAs<std::vector<int>>(vocab, "doc_freq"),
                 FieldAs<int>(vocab, "corpus_size"));
  model.weights = FieldAs<std::vector<double>>(doc, "weights");
  if (model.weights.size() != model.vocabulary.size()) {
    throw IntegrityError("model has " + std::to_string(model.weights.size()) +
                         " weights for a vocabulary of " +
                         std::to_string(model.vocabulary.size()) + " terms");
  }
  for (double w : model.weights) {
    if (!std::isfinite(w)) throw IntegrityError("non-finite model weight");
  }
  model.bias = FieldAs<double>(doc, "bias");
  model.threshold = FieldAs<double>(doc, "threshold");
  if (!std::isfinite(model.bias)) throw IntegrityError("non-finite bias");
  if (!(model.threshold > 0.0 && model.threshold < 1.0)) {
    throw IntegrityError("threshold must lie strictly between 0 and 1");
  }
  model.stopwords = FieldAs<std::set<std::string>>(doc, "stopwords");
  for (const std::string& stopword : model.stopwords) {
    if (model.vocabulary.Find(stopword)) {
      throw IntegrityError("stopword '" + stopword + "' is a vocabulary term");
    }
  }
  model.trained_at = FieldAs<std::string>(doc, "trained_at");
  model.config_fingerprint = FieldAs<std::string>(doc, "config_fingerprint");
  const json& training = Field(doc, "training");
  model.training.l2_strength = FieldAs<double>(training, "l2_strength");
  model.training.iterations = FieldAs<int>(training, "iterations");
  model.training.converged = FieldAs<bool>(training, "converged");
  model.training.warnings =
      FieldAs<std::vector<std::string>>(training, "warnings");
  return model;
}

void SaveModel(const TrainedModel& model, const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeModel(model));
}

TrainedModel LoadModel(const std::filesystem::path& path) {
  try {
    return DeserializeModel(ReadTextFile(path));
  } catch (const FormatVersionError& e) {
    throw FormatVersionError(path.string() + ": " + e.what());
  } catch (const IntegrityError& e) {
    throw IntegrityError(path.string() + ": " + e.what());
  }
}

}  // namespace detox
