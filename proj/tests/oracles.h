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

// Reference implementations used to check the library against values
// computed a different way.

#ifndef DETOX_TESTS_ORACLES_H_
#define DETOX_TESTS_ORACLES_H_

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "detox/evaluator.h"

namespace detox::testing {

// Term -> tf-idf weight for every document, computed by direct counting
// over whitespace tokens. A bigram is kept only when neither word is a
// stopword.
inline std::vector<std::map<std::string, double>> OracleTfidf(
    const std::vector<std::vector<std::string>>& docs,
    const std::set<std::string>& stopwords) {
  std::vector<std::vector<std::string>> terms(docs.size());
  for (size_t d = 0; d < docs.size(); ++d) {
    const auto& t = docs[d];
    for (size_t i = 0; i < t.size(); ++i) {
      if (stopwords.count(t[i]) == 0) terms[d].push_back(t[i]);
    }
    for (size_t i = 0; i + 1 < t.size(); ++i) {
      if (stopwords.count(t[i]) == 0 && stopwords.count(t[i + 1]) == 0) {
        terms[d].push_back(t[i] + " " + t[i + 1]);
      }
    }
  }
  const double n = static_cast<double>(docs.size());
  std::vector<std::map<std::string, double>> out(docs.size());
  for (size_t d = 0; d < docs.size(); ++d) {
    for (const std::string& term : terms[d]) {
      if (out[d].count(term)) continue;
      double tf = 0;
      for (const std::string& u : terms[d]) tf += (u == term) ? 1 : 0;
      double df = 0;
      for (const auto& other : terms) {
        for (const std::string& u : other) {
          if (u == term) {
            df += 1;
            break;
          }
        }
      }
      out[d][term] = tf * std::log(n / df);
    }
  }
  return out;
}

// Normalized forms of the seed-pair sentences, computed with Python's
// unicodedata: NFD, drop Mn, punctuation to space, lower(), collapse.
inline const std::map<std::string, std::string>& SeedPairsNormalized() {
  static const std::map<std::string, std::string> kForms = {
      {"Ndiza kukwenzakalisa.", "ndiza kukwenzakalisa"},
      {"Ndiziva ndonzakele ngamazwi / izenzo zakho.",
       "ndiziva ndonzakele ngamazwi izenzo zakho"},
      {"Ndiza kukufundisa isifundo.", "ndiza kukufundisa isifundo"},
      {"Ndifuna ufunde kule meko.", "ndifuna ufunde kule meko"},
      {"Uya kuzisola owakhe waqalisa oku.", "uya kuzisola owakhe waqalisa oku"},
      {"Ndinqwenela ukuba sifumane isisombululo esinoxolo ngakumbi.",
       "ndinqwenela ukuba sifumane isisombululo esinoxolo ngakumbi"},
      {"Ungumntu ongenangqondo.", "ungumntu ongenangqondo"},
      {"Ingcinga yakho ayichanekanga, kodwa ndiyayivuma.",
       "ingcinga yakho ayichanekanga kodwa ndiyayivuma"},
      {"Ungumgangatho weparasite.", "ungumgangatho weparasite"},
      {"Izenzo zakho ziyingozi kwabanye.", "izenzo zakho ziyingozi kwabanye"},
      {"O jẹ́ aláìmọ̀kan", "o je alaimokan"},
      {"O lè gba ìmọ̀ síi pẹ̀lú ìtọ́sọ́nà.", "o le gba imo sii pelu itosona"},
      {"Máa fọ́ ojú ẹ", "maa fo oju e"},
      {"Mo bínú gan-an sí ohun tí o ṣe", "mo binu gan an si ohun ti o se"},
      {"Kò sí ìrètí fún ọ.", "ko si ireti fun o"},
      {"Ìrètí wà fún ọ bí o bá ṣiṣẹ́ takuntakun",
       "ireti wa fun o bi o ba sise takuntakun"},
      {"Èmi yóò fọ́ ojú ẹ.", "emi yoo fo oju e"},
      {"Mi ò nìfẹ̀ sí ìwà tí ò ń hù sìmi rárá.",
       "mi o nife si iwa ti o n hu simi rara"},
      {"O useless gan", "o useless gan"},
      {"Ìṣe rẹ lè ní ipa rere pẹ̀lú àtúnṣe",
       "ise re le ni ipa rere pelu atunse"},
  };
  return kForms;
}

// Probability that a random positive outranks a random negative, ties
// counting one half.
inline double PairwiseAuc(const std::vector<ScoredLabel>& scores) {
  double wins = 0;
  double pairs = 0;
  for (const ScoredLabel& p : scores) {
    if (p.label != Label::kToxic) continue;
    for (const ScoredLabel& q : scores) {
      if (q.label != Label::kNonToxic) continue;
      pairs += 1;
      if (p.probability > q.probability) {
        wins += 1;
      } else if (p.probability == q.probability) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

// Central differences of f over (weights..., bias).
inline std::vector<double> NumericalGradient(
    const std::function<double(const std::vector<double>&, double)>& f,
    std::vector<double> weights, double bias, double h) {
  std::vector<double> grad;
  for (size_t i = 0; i < weights.size(); ++i) {
    double saved = weights[i];
    weights[i] = saved + h;
    double up = f(weights, bias);
    weights[i] = saved - h;
    double down = f(weights, bias);
    weights[i] = saved;
    grad.push_back((up - down) / (2 * h));
  }
  grad.push_back((f(weights, bias + h) - f(weights, bias - h)) / (2 * h));
  return grad;
}

// ||a - b|| / (||a|| + ||b||), 0 when both vanish.
inline double RelativeError(const std::vector<double>& a,
                            const std::vector<double>& b) {
  double diff = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  double denom = std::sqrt(na) + std::sqrt(nb);
  return denom == 0 ? 0 : std::sqrt(diff) / denom;
}

}  // namespace detox::testing

#endif  // DETOX_TESTS_ORACLES_H_
