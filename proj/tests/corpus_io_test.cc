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

#include <gtest/gtest.h>

#include <fstream>

#include "detox/classifier.h"
#include "detox/errors.h"
#include "json.hpp"
#include "test_support.h"

namespace detox {
namespace {

using testing::CorpusTsv;
using testing::SyntheticCorpus;
using testing::TempDir;
using testing::WriteFile;

TEST(CorpusTest, LoadsSeedPair) {
  auto xh = testing::SeedPairs(Language::kXhosa);
  ASSERT_EQ(xh.size(), 5u);
  EXPECT_EQ(xh[0].toxic_text, "Ndiza kukwenzakalisa.");
  EXPECT_EQ(xh[0].detox_text, "Ndiziva ndonzakele ngamazwi / izenzo zakho.");
  auto yo = testing::SeedPairs(Language::kYoruba);
  ASSERT_EQ(yo.size(), 5u);
  EXPECT_EQ(yo[4].toxic_text, "O useless gan");
  EXPECT_EQ(yo[4].language, Language::kYoruba);
}

TEST(CorpusTest, StripsBomCarriageReturnsAndBlankLines) {
  std::string content = "\xEF\xBB\xBFtoxic\tdetox\r\n a \t b \r\n\r\nc\td\n";
  auto pairs = ParseParallelCorpus(content, Language::kXhosa);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0], (ParallelPair{"a", "b", Language::kXhosa}));
  EXPECT_EQ(pairs[1], (ParallelPair{"c", "d", Language::kXhosa}));
}

TEST(CorpusTest, EmptyFileIsRejected) {
  TempDir dir;
  WriteFile(dir / "empty.tsv", "");
  EXPECT_THROW(LoadParallelCorpus(dir / "empty.tsv", Language::kXhosa),
               EmptyCorpusError);
  WriteFile(dir / "header.tsv", "toxic\tdetox\n");
  EXPECT_THROW(LoadParallelCorpus(dir / "header.tsv", Language::kXhosa),
               EmptyCorpusError);
}

TEST(CorpusTest, DuplicateToxicSideNamesBothLines) {
  std::string content = "toxic\tdetox\nx\ty\nz\tw\nx\tq\n";
  try {
    ParseParallelCorpus(content, Language::kYoruba);
    FAIL() << "expected DuplicateKeyError";
  } catch (const DuplicateKeyError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(CorpusTest, WrongColumnCountReportsLine) {
  TempDir dir;
  WriteFile(dir / "bad.tsv", "toxic\tdetox\na\tb\nc\td\te\n");
  try {
    LoadParallelCorpus(dir / "bad.tsv", Language::kXhosa);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("bad.tsv"), std::string::npos);
  }
  EXPECT_THROW(ParseParallelCorpus("toxic\tdetox\nonlyone\n", Language::kXhosa),
               ParseError);
}

TEST(CorpusTest, MissingHeaderIsRejected) {
  try {
    ParseParallelCorpus("a\tb\n", Language::kXhosa);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(CorpusTest, IdenticalOrEmptySidesAreRejected) {
  EXPECT_THROW(
      ParseParallelCorpus("toxic\tdetox\nsame\tsame\n", Language::kXhosa),
      ParseError);
  EXPECT_THROW(
      ParseParallelCorpus("toxic\tdetox\n \tsomething\n", Language::kXhosa),
      ParseError);
}

TEST(CorpusTest, MissingFileIsAnIoError) {
  EXPECT_THROW(LoadParallelCorpus("/nonexistent/xh.tsv", Language::kXhosa),
               IoError);
}

TEST(CorpusTest, NonUtf8FileIsRejected) {
  TempDir dir;
  {
    std::ofstream out(dir / "latin1.tsv", std::ios::binary);
    out << "toxic\tdetox\nna\xEFve\tok\n";
  }
  EXPECT_THROW(LoadParallelCorpus(dir / "latin1.tsv", Language::kXhosa),
               EncodingError);
}

TEST(LabeledSetTest, TwoExamplesPerPair) {
  for (size_t n : {1u, 10u, 178u}) {
    auto pairs = SyntheticCorpus(Language::kYoruba, n, n);
    auto examples = DeriveLabeledSet(pairs);
    ASSERT_EQ(examples.size(), 2 * n);
    size_t toxic = 0;
    for (size_t i = 0; i < examples.size(); ++i) {
      const ParallelPair& p = pairs[i / 2];
      if (i % 2 == 0) {
        EXPECT_EQ(examples[i].text, p.toxic_text);
        EXPECT_EQ(examples[i].label, Label::kToxic);
        ++toxic;
      } else {
        EXPECT_EQ(examples[i].text, p.detox_text);
        EXPECT_EQ(examples[i].label, Label::kNonToxic);
      }
      EXPECT_EQ(examples[i].language, Language::kYoruba);
    }
    EXPECT_EQ(toxic, n);
  }
  EXPECT_THROW(DeriveLabeledSet({}), InvalidArgumentError);
}

TEST(LexiconTest, NormalizesKeysAndKeepsReplacementsVerbatim) {
  Lexicon lex = ParseLexicon(
      "toxic_token\treplacement\nYinyoka\tumntu\nỌmọ Àlè\tènìyàn\n",
      Language::kYoruba);
  EXPECT_EQ(lex.language, Language::kYoruba);
  ASSERT_EQ(lex.entries.size(), 2u);
  EXPECT_EQ(lex.entries.at("yinyoka"), "umntu");
  EXPECT_EQ(lex.entries.at("omo ale"), "ènìyàn");
}

TEST(LexiconTest, RejectsInvalidEntries) {
  auto parse = [](const std::string& body) {
    return ParseLexicon("toxic_token\treplacement\n" + body, Language::kXhosa);
  };
  EXPECT_THROW(parse("a b c\tx\n"), ParseError);          // three words
  EXPECT_THROW(parse("...\tx\n"), ParseError);            // empty key
  EXPECT_THROW(parse("Wena\twena\n"), ParseError);        // self-map
  EXPECT_THROW(parse("wena\tx\nWENA\ty\n"), ParseError);  // collision
  EXPECT_THROW(parse("a\tb\nb\tc\n"), ParseError);        // chained
  EXPECT_THROW(parse("a\tx\n"
                     "c\tq a\n"),
               ParseError);
  EXPECT_THROW(ParseLexicon("toxic\tdetox\na\tb\n", Language::kXhosa),
               ParseError);
  EXPECT_THROW(parse("x\t...\n"), ParseError);  // no words
  // "q omo" followed by "ale" would spell the key "omo ale".
  EXPECT_THROW(parse("omo ale\tperson\nx\tq omo\n"), ParseError);
  EXPECT_THROW(parse("omo ale\tperson\nx\tale q\n"), ParseError);
  EXPECT_NO_THROW(parse("omo ale\tperson\nx\tomo q\n"));
  EXPECT_NO_THROW(parse(""));
}

TrainedModel SmallModel() {
  auto pairs = SyntheticCorpus(Language::kXhosa, 30, 5);
  TrainConfig config = DefaultTrainConfig(Language::kXhosa);
  config.l2_strength_grid = {0.1};
  return TrainPipeline(DeriveLabeledSet(pairs), config);
}

TEST(ModelFileTest, RoundTripPreservesPredictionsAndBytes) {
  TrainedModel model = SmallModel();
  TempDir dir;
  auto path = dir / "xh.detoxmodel";
  SaveModel(model, path);
  TrainedModel loaded = LoadModel(path);

  EXPECT_EQ(loaded.language, model.language);
  EXPECT_EQ(loaded.vocabulary.terms(), model.vocabulary.terms());
  EXPECT_EQ(loaded.vocabulary.doc_freq(), model.vocabulary.doc_freq());
  EXPECT_EQ(loaded.weights, model.weights);
  EXPECT_EQ(loaded.bias, model.bias);
  EXPECT_EQ(loaded.threshold, model.threshold);
  EXPECT_EQ(loaded.stopwords, model.stopwords);
  EXPECT_EQ(loaded.training, model.training);

  for (const auto& p : SyntheticCorpus(Language::kXhosa, 40, 99)) {
    for (const std::string& text : {p.toxic_text, p.detox_text}) {
      Prediction a = Predict(model, text);
      Prediction b = Predict(loaded, text);
      EXPECT_EQ(a.probability, b.probability) << text;
      EXPECT_EQ(a.label, b.label);
    }
  }
  EXPECT_EQ(SerializeModel(loaded), ReadTextFile(path));
}

TEST(ModelFileTest, RejectsWrongFormatOrVersion) {
  TrainedModel model = testing::ConstantModel(Language::kXhosa, true);
  nlohmann::json doc = nlohmann::json::parse(SerializeModel(model));

  auto with = [&](const char* key, nlohmann::json value) {
    nlohmann::json copy = doc;
    copy[key] = std::move(value);
    return copy.dump();
  };
  EXPECT_THROW(DeserializeModel(with("version", 2)), FormatVersionError);
  EXPECT_THROW(DeserializeModel(with("format", "other")), FormatVersionError);
  EXPECT_THROW(DeserializeModel(with("idf", "log10")), FormatVersionError);
  EXPECT_THROW(DeserializeModel("not json"), FormatVersionError);
  nlohmann::json missing = doc;
  missing.erase("weights");
  EXPECT_THROW(DeserializeModel(missing.dump()), FormatVersionError);
}

TEST(ModelFileTest, RejectsInconsistentContents) {
  TrainedModel model = testing::ConstantModel(Language::kYoruba, false);
  nlohmann::json doc = nlohmann::json::parse(SerializeModel(model));
  auto with = [&](const char* key, nlohmann::json value) {
    nlohmann::json copy = doc;
    copy[key] = std::move(value);
    return copy.dump();
  };
  EXPECT_THROW(DeserializeModel(with("weights", {1.0, 2.0})), IntegrityError);
  EXPECT_THROW(DeserializeModel(with("threshold", 1.0)), IntegrityError);
  EXPECT_THROW(DeserializeModel(with("threshold", 0.0)), IntegrityError);
  EXPECT_THROW(DeserializeModel(with("language", "fr")), IntegrityError);
  EXPECT_THROW(DeserializeModel(with("stopwords", {"placeholder"})),
               IntegrityError);
  nlohmann::json bad_df = doc;
  bad_df["vocabulary"]["doc_freq"] = {3};
  EXPECT_THROW(DeserializeModel(bad_df.dump()), IntegrityError);
}

TEST(ModelFileTest, SaveReplacesExistingFileAtomically) {
  TempDir dir;
  auto path = dir / "m.detoxmodel";
  WriteFile(path, "old");
  SaveModel(testing::ConstantModel(Language::kXhosa, true), path);
  EXPECT_NO_THROW(LoadModel(path));
  size_t files = 0;
  for ([[maybe_unused]] const auto& entry :
       std::filesystem::directory_iterator(dir.path())) {
    ++files;
  }
  EXPECT_EQ(files, 1u);
}

}  // namespace
}  // namespace detox
