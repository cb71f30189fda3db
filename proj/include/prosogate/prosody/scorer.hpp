#pragma once

// From syllable records to per-gap boundary scores.

#include <string>
#include <vector>

#include "../corpus/turn.hpp"
#include "features.hpp"
#include "mlp.hpp"

namespace prosogate::prosody {

/// Index (into turn.syllables) of each word's last word-final syllable.
inline std::vector<std::size_t> word_final_syllables(const corpus::TurnRecord& turn) {
  if (!turn.syllables) throw InputFormatError("turn " + turn.id + ": no syllable records");
  std::vector<long> last(turn.words.size(), -1);
  const auto& syl = *turn.syllables;
  for (std::size_t i = 0; i < syl.size(); ++i)
    if (syl[i].features.word_final) last[syl[i].word] = static_cast<long>(i);
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < last.size(); ++w) {
    if (last[w] < 0)
      throw InputFormatError("turn " + turn.id + ": word " + std::to_string(w) + " (" + turn.words[w] +
                             ") has no word-final syllable");
    out.push_back(static_cast<std::size_t>(last[w]));
  }
  return out;
}

inline std::vector<SyllableRecord> syllable_sequence(const corpus::TurnRecord& turn) {
  std::vector<SyllableRecord> out;
  if (turn.syllables)
    for (const auto& s : *turn.syllables) out.push_back(s.features);
  return out;
}

/// Feature vectors of every word-final syllable, one per gap.
inline std::vector<FeatureVector> gap_vectors(const corpus::TurnRecord& turn, const FeatureLayout& layout) {
  auto finals = word_final_syllables(turn);
  auto seq = syllable_sequence(turn);
  std::vector<FeatureVector> out;
  for (auto i : finals) out.push_back(extract_features(seq, i, layout));
  return out;
}

/// Labelled vectors for training or evaluation; turn-final gaps optionally dropped.
inline std::vector<LabelledVector> labelled_vectors(const corpus::TurnRecord& turn, const FeatureLayout& layout,
                                                    bool exclude_turn_final) {
  if (!turn.s3_labels) throw InputFormatError("turn " + turn.id + ": no s3_labels");
  auto vs = gap_vectors(turn, layout);
  std::vector<LabelledVector> out;
  for (std::size_t g = 0; g < vs.size(); ++g) {
    if (exclude_turn_final && g + 1 == vs.size()) continue;
    out.push_back({std::move(vs[g]), (*turn.s3_labels)[g]});
  }
  return out;
}

/// Writes the S3+ posterior of each word's final syllable into turn.gap_scores.
inline std::vector<double> score_turn(const MlpClassifier& clf, corpus::TurnRecord& turn) {
  std::vector<double> scores;
  for (const auto& v : gap_vectors(turn, clf.layout)) scores.push_back(corpus::round_score(clf.classify(v).plus));
  turn.gap_scores = scores;
  return scores;
}

}  // namespace prosogate::prosody
