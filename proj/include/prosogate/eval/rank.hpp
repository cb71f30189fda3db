#pragma once

// Rank of the gold trace gap among all gaps of a sentence by score.

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "../corpus/turn.hpp"
#include "../error.hpp"

namespace prosogate::eval {

struct RankItem {
  std::string id;
  std::vector<double> scores;  // one per gap, gap g at index g-1
  int gold = 0;                // 1-based
};

/// Buckets for ranks 1..7 plus one for ranks above 7.
struct RankHistogram {
  static constexpr std::size_t kBuckets = 8;
  std::array<std::size_t, kBuckets> counts{};
  std::size_t total = 0;

  static std::size_t bucket_of(std::size_t rank) { return std::min(rank, kBuckets) - 1; }
  static std::string bucket_label(std::size_t b) { return b + 1 < kBuckets ? std::to_string(b + 1) : ">7"; }
  bool operator==(const RankHistogram&) const = default;
};

/// Descending score, ties to the lower gap.
inline std::size_t gold_rank(const RankItem& s) {
  if (s.gold < 1 || static_cast<std::size_t>(s.gold) > s.scores.size())
    throw InvalidArgument("sentence " + s.id + ": no gold trace gap within 1.." + std::to_string(s.scores.size()));
  std::vector<int> order(s.scores.size());
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return s.scores[a - 1] > s.scores[b - 1]; });
  return static_cast<std::size_t>(std::find(order.begin(), order.end(), s.gold) - order.begin()) + 1;
}

inline RankHistogram rank_experiment(const std::vector<RankItem>& sentences) {
  RankHistogram h;
  for (const auto& s : sentences) {
    h.counts[RankHistogram::bucket_of(gold_rank(s))]++;
    ++h.total;
  }
  return h;
}

/// Sentences from a scored corpus. Turns without exactly one gold gap raise
/// an error unless skip is set, in which case they are counted in *skipped.
inline std::vector<RankItem> rank_items(const corpus::Corpus& c, bool skip = false, std::size_t* skipped = nullptr) {
  std::vector<RankItem> out;
  for (const auto& t : c.turns) {
    if (!t.gap_scores) throw InputFormatError("turn " + t.id + ": field gap_scores: needed for ranking");
    if (!t.gold_traces || t.gold_traces->size() != 1) {
      if (!skip) throw InvalidArgument("turn " + t.id + ": ranking needs exactly one gold trace gap");
      if (skipped) ++*skipped;
      continue;
    }
    out.push_back({t.id, *t.gap_scores, t.gold_traces->front()});
  }
  return out;
}

inline nlohmann::json to_json(const RankHistogram& h) {
  nlohmann::json buckets = nlohmann::json::array();
  for (std::size_t b = 0; b < RankHistogram::kBuckets; ++b)
    buckets.push_back({{"rank", RankHistogram::bucket_label(b)}, {"count", h.counts[b]}});
  return {{"buckets", buckets}, {"total", h.total}};
}

}  // namespace prosogate::eval
