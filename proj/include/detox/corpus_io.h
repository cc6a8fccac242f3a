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

#ifndef DETOX_CORPUS_IO_H_
#define DETOX_CORPUS_IO_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detox/model.h"
#include "detox/types.h"

namespace detox {

inline constexpr std::string_view kCorpusHeader = "toxic\tdetox";
inline constexpr std::string_view kLexiconHeader = "toxic_token\treplacement";
inline constexpr std::string_view kModelFormat = "detoxmodel";
inline constexpr int kModelFormatVersion = 1;
inline constexpr std::string_view kModelExtension = ".detoxmodel";

// Reads a whole file and rejects content that is not valid UTF-8.
std::string ReadTextFile(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames it over `path`.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view content);

// Parallel corpus TSV with header "toxic\tdetox". Rows are returned in file
// order, both sides trimmed.
//
// Throws ParseError (with line number) for a missing header, a wrong column
// count, an empty side, or identical sides; DuplicateKeyError when two rows
// share a toxic side; EmptyCorpusError when there are no data rows.
std::vector<ParallelPair> ParseParallelCorpus(std::string_view content,
                                              Language language);
std::vector<ParallelPair> LoadParallelCorpus(const std::filesystem::path& path,
                                             Language language);

// Each toxic side labeled 1, each detoxified side labeled 0, interleaved
// pair by pair. Throws InvalidArgumentError on empty input.
std::vector<LabeledExample> DeriveLabeledSet(
    std::span<const ParallelPair> pairs);

// Lexicon TSV with header "toxic_token\treplacement". Keys are normalized on
// load; keys of more than two words, empty fields, self-mappings, keys that
// collide after normalization, and replacements that contain a key are
// rejected with ParseError.
Lexicon ParseLexicon(std::string_view content, Language language);
Lexicon LoadLexicon(const std::filesystem::path& path, Language language);

// Canonical JSON document: sorted keys, shortest round-trip doubles, so
// serialize(deserialize(s)) == s byte for byte.
std::string SerializeModel(const TrainedModel& model);
// Throws FormatVersionError on unknown format/version and IntegrityError
// when the document is internally inconsistent.
TrainedModel DeserializeModel(std::string_view document);

void SaveModel(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel LoadModel(const std::filesystem::path& path);

}  // namespace detox

#endif  // DETOX_CORPUS_IO_H_
