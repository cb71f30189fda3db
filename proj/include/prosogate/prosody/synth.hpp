#pragma once

// Synthetic turns over the demo vocabulary with syllable measurements,
// S3 labels, gold trace gaps and calibrated gap scores.
//
// Boundary cues sit on the last syllable before a gap (lengthening, pause,
// final F0 fall, falling regression slopes, lower energy) and on the first
// syllable after it (F0 reset). Cue size is label strength (S3+ 1, S3? 0.5,
// S3- 0) times the separation parameter; separation 0 makes the classes
// indistinguishable.
//
// Syllable count per word (1-3) and accent placement are random, so word
// shape carries no label information.
//
// Calibrated scores are sigmoid(z) with z ~ N(2, 1.5) at S3+ gaps, N(-2, 2)
// at S3? gaps and N(-7, 2) at S3- gaps; gold trace gaps never score below 0.01.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "../corpus/turn.hpp"
#include "../error.hpp"
#include "random.hpp"
#include "syllable.hpp"

namespace prosogate::prosody {

struct SynthParams {
  std::size_t turns = 104;
  double separation = 1.0;
  std::size_t max_words = 0;  // 0: no limit
  bool v2_only = false;       // only verb-second clauses with one gold gap
  bool gold_traces = true;    // false: omit gold trace annotation
  std::size_t regression_length = kDefaultRegressionLength;
};

namespace synth_detail {

struct Pattern {
  std::vector<std::string> slots;  // slot names or literal words
  std::vector<std::string> s3;  // "~": drawn per turn
  bool v2;  // gold trace at the turn-final gap
};

inline const std::vector<Pattern>& patterns() {
  static const std::vector<Pattern> p{
      {{"ADV", "VT", "SUBJ", "OBJ2"}, {"~", "S3-", "S3-", "S3-", "S3+"}, true},
      {{"SUBJ", "VT", "OBJ2"}, {"S3-", "S3-", "S3-", "S3+"}, true},
      {{"SUBJ", "VT", "ihn"}, {"S3-", "S3-", "S3+"}, true},
      {{"ADV", "VT", "SUBJ", "ihn"}, {"~", "S3-", "S3-", "S3+"}, true},
      {{"SUBJ", "VT", "ADV", "OBJ2"}, {"S3-", "S3-", "~", "S3-", "S3+"}, true},
      {{"VT", "SUBJ", "OBJ2"}, {"S3-", "S3-", "S3-", "S3+"}, true},
      {{"SUBJ", "MODAL", "OBJ2", "VINF"}, {"S3-", "S3-", "S3-", "S3-", "S3+"}, true},
      {{"SUBJ", "MODAL", "nicht", "töten"}, {"S3-", "S3-", "S3-", "S3+"}, true},
      {{"TEMP", "MONTH", "bin", "SUBJ", "in", "urlaub"}, {"S3-", "~", "S3-", "S3-", "S3-", "S3+"}, true},
      {{"TEMP", "MONTH", "habe", "SUBJ", "noch", "zeit"}, {"S3-", "~", "S3-", "S3-", "S3-", "S3+"}, true},
      {{"SUBJ", "glaube", "SUBJ", "MODAL", "nicht", "töten"}, {"S3-", "S3+", "S3-", "S3-", "S3-", "S3+"}, true},
      {{"SUBJ", "dachte", "SUBJ", "VT", "OBJ2"}, {"S3-", "S3+", "S3-", "S3-", "S3-", "S3+"}, true},
      {{"SUBJ", "glaube", "daß", "SUBJ", "nicht", "töten", "MODAL"},
       {"S3-", "S3+", "S3-", "S3-", "S3-", "S3-", "S3+"}, true},
      {{"SUBJ", "dachte", "daß", "SUBJ", "ADV", "OBJ2", "VT"},
       {"S3-", "S3+", "S3-", "S3-", "~", "S3-", "S3-", "S3+"}, true},
      {{"daß", "SUBJ", "OBJ2", "VT"}, {"S3-", "S3-", "S3-", "S3-", "S3+"}, false},
      {{"im", "MONTH"}, {"S3-", "S3+"}, false},
  };
  return p;
}

inline const std::vector<std::string>& choices(const std::string& slot) {
  static const std::map<std::string, std::vector<std::string>> table{
      {"ADV", {"gestern", "heute", "dann"}},
      {"VT", {"reparierte", "kaufte", "sah"}},
      {"SUBJ", {"er", "ich", "du", "wir"}},
      {"MODAL", {"sollst", "willst"}},
      {"VINF", {"reparieren", "kaufen"}},
      {"TEMP", {"anfang", "ende", "im"}},
      {"MONTH", {"april", "mai"}},
  };
  static const std::vector<std::string> none;
  auto it = table.find(slot);
  return it == table.end() ? none : it->second;
}

inline const std::vector<std::vector<std::string>>& objects() {
  static const std::vector<std::vector<std::string>> o{
      {"den", "wagen"}, {"das", "auto"}, {"das", "buch"}};
  return o;
}

inline double strength(const std::string& s3) {
  if (s3 == "S3+") return 1.0;
  if (s3 == "S3?") return 0.5;
  return 0.0;
}

inline double r6(double x) { return corpus::round_score(x); }

}  // namespace synth_detail

inline corpus::Corpus synth_corpus(std::uint64_t seed, const SynthParams& params) {
  using namespace synth_detail;
  if (params.turns == 0) throw InvalidArgument("synthetic corpus needs at least one turn");
  if (params.separation < 0) throw InvalidArgument("separation must be >= 0");
  if (params.regression_length == 0) throw InvalidArgument("regression length must be positive");
  std::vector<const Pattern*> usable;
  for (const auto& p : patterns()) {
    if (params.v2_only && !p.v2) continue;
    if (params.max_words && p.s3.size() > params.max_words) continue;
    usable.push_back(&p);
  }
  if (usable.empty()) throw InvalidArgument("no sentence pattern satisfies the word limit");

  Rng rng(seed);
  corpus::Corpus c;
  c.provenance = {{"generator", "prosogate synth"},
                  {"seed", seed},
                  {"turns", params.turns},
                  {"separation", params.separation},
                  {"v2_only", params.v2_only}};
  for (std::size_t t = 0; t < params.turns; ++t) {
    const Pattern& p = *usable[rng.index(usable.size())];
    corpus::TurnRecord turn;
    char id[32];
    std::snprintf(id, sizeof id, "syn-%04zu", t + 1);
    turn.id = id;
    for (const auto& slot : p.slots) {
      if (slot == "OBJ2") {
        const auto& o = objects()[rng.index(objects().size())];
        turn.words.insert(turn.words.end(), o.begin(), o.end());
        continue;
      }
      const auto& opts = choices(slot);
      turn.words.push_back(opts.empty() ? slot : opts[rng.index(opts.size())]);
    }
    if (turn.words.size() != p.s3.size()) throw std::logic_error("synth pattern label count mismatch");
    const std::size_t n = turn.words.size();
    std::vector<std::string> labels = p.s3;
    for (auto& l : labels)
      if (l == "~") {
        const double u = rng.uniform();
        l = u < 0.4 ? "S3+" : u < 0.7 ? "S3?" : "S3-";
      }
    turn.s3_labels = labels;
    if (params.gold_traces) turn.gold_traces = p.v2 ? std::vector<int>{static_cast<int>(n)} : std::vector<int>{};

    // calibrated gap scores
    std::vector<double> scores;
    for (std::size_t g = 0; g < n; ++g) {
      const auto& lab = labels[g];
      double z = lab == "S3+" ? rng.normal(2, 1.5) : lab == "S3?" ? rng.normal(-2, 2) : rng.normal(-7, 2);
      double s = r6(1.0 / (1.0 + std::exp(-z)));
      if (p.v2 && g + 1 == n) s = std::max(s, 0.01);
      scores.push_back(s);
    }
    turn.gap_scores = scores;

    // syllables
    std::vector<corpus::Syllable> syl;
    std::vector<double> pause_after(n, 0.0);
    for (std::size_t w = 0; w < n; ++w) {
      const double s = strength(labels[w]) * params.separation;
      const double p_pause = std::clamp(0.05 + 0.55 * s, 0.0, 0.95);
      if (rng.bernoulli(p_pause)) pause_after[w] = r6(rng.uniform(0.05, 0.5));
    }
    for (std::size_t w = 0; w < n; ++w) {
      const int k = 1 + static_cast<int>(rng.index(3));
      const double s = strength(labels[w]) * params.separation;
      const double s_prev = w > 0 ? strength(labels[w - 1]) * params.separation : 0.0;
      for (int j = 0; j < k; ++j) {
        SyllableRecord r;
        const bool final = j + 1 == k;
        r.accent = rng.bernoulli(0.4);
        r.word_final = final;
        r.duration = rng.normal(1.0, 0.25) + (r.accent ? 0.15 : 0.0) + (final ? 0.6 * s : 0.0);
        r.f0_mean = rng.normal(0, 2);
        r.f0_min = r.f0_mean - std::abs(rng.normal(1.5, 0.5));
        r.f0_max = r.f0_mean + std::abs(rng.normal(1.5, 0.5)) + (r.accent ? 1.0 : 0.0);
        r.f0_onset = r.f0_mean + rng.normal(0, 1) + (j == 0 ? 1.5 * s_prev : 0.0);
        r.f0_offset = r.f0_mean + rng.normal(0, 1) - (final ? 2.0 * s : 0.0);
        r.f0_min_pos = rng.uniform(-0.1, 0.1);
        r.f0_max_pos = rng.uniform(-0.1, 0.1);
        r.f0_onset_pos = rng.uniform(-0.12, -0.05);
        r.f0_offset_pos = rng.uniform(0.05, 0.12) + (final ? 0.04 * s : 0.0);
        r.energy_max = rng.normal(0, 1) + (r.accent ? 0.5 : 0.0);
        r.energy_max_pos = rng.uniform(-0.1, 0.1);
        r.energy_mean = r.energy_max - std::abs(rng.normal(1, 0.3)) - (final ? 0.5 * s : 0.0);
        r.pause_before = w > 0 ? pause_after[w - 1] : 0.0;
        r.pause_after = pause_after[w];
        r.f0_regression.resize(params.regression_length);
        r.energy_regression.resize(params.regression_length);
        for (std::size_t q = 0; q < params.regression_length; ++q) {
          const bool left = q < params.regression_length / 2;
          r.f0_regression[q] = rng.normal(0, 1) - (final && left ? 1.0 * s : 0.0);
          r.energy_regression[q] = rng.normal(0, 1) - (final && left ? 0.8 * s : 0.0);
        }
        for (double* x : {&r.duration, &r.f0_mean, &r.f0_min, &r.f0_max, &r.f0_onset, &r.f0_offset, &r.f0_min_pos,
                          &r.f0_max_pos, &r.f0_onset_pos, &r.f0_offset_pos, &r.energy_max, &r.energy_max_pos,
                          &r.energy_mean})
          *x = r6(*x);
        for (auto& x : r.f0_regression) x = r6(x);
        for (auto& x : r.energy_regression) x = r6(x);
        syl.push_back({static_cast<int>(w), std::move(r)});
      }
    }
    turn.syllables = std::move(syl);
    corpus::validate(turn);
    c.turns.push_back(std::move(turn));
  }
  return c;
}

}  // namespace prosogate::prosody
