#pragma once

// Trace-position confusion counts and recall / precision / error.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "../error.hpp"

namespace prosogate::eval {

using json = nlohmann::json;

/// reject counts positions that are neither gold nor proposed.
struct ConfusionCounts {
  std::size_t correct = 0, false_alarm = 0, miss = 0, reject = 0;

  std::size_t gold() const { return correct + miss; }
  std::size_t proposed() const { return correct + false_alarm; }
  std::size_t total() const { return correct + false_alarm + miss + reject; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    correct += o.correct;
    false_alarm += o.false_alarm;
    miss += o.miss;
    reject += o.reject;
    return *this;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

/// Gap sets of one turn (1-based gap indices).
struct TurnGaps {
  std::string id;
  std::set<int> gold;
  std::set<int> proposed;
  std::set<int> universe;
};

/// Gaps 1..n, or 1..n-1 when the turn-final gap is excluded.
inline std::set<int> gap_universe(std::size_t words, bool exclude_turn_final = false) {
  std::set<int> u;
  const int last = static_cast<int>(words) - (exclude_turn_final ? 1 : 0);
  for (int g = 1; g <= last; ++g) u.insert(g);
  return u;
}

inline ConfusionCounts score_turn_gaps(const TurnGaps& t) {
  for (const auto* s : {&t.gold, &t.proposed})
    for (int g : *s)
      if (!t.universe.count(g))
        throw InvalidArgument("turn " + t.id + ": gap " + std::to_string(g) + " outside the evaluated positions");
  ConfusionCounts c;
  for (int g : t.universe) {
    const bool gold = t.gold.count(g), prop = t.proposed.count(g);
    if (gold && prop)
      ++c.correct;
    else if (prop)
      ++c.false_alarm;
    else if (gold)
      ++c.miss;
    else
      ++c.reject;
  }
  return c;
}

inline ConfusionCounts score_trace_hypotheses(const std::vector<TurnGaps>& turns) {
  ConfusionCounts c;
  for (const auto& t : turns) c += score_turn_gaps(t);
  return c;
}

/// Fractions in [0,1]. Empty denominators: recall 1 without gold positions,
/// precision 1 with nothing proposed, error 0 over an empty universe.
struct MetricReport {
  double recall = 1, precision = 1, error = 0;
};

inline MetricReport metrics(const ConfusionCounts& c) {
  MetricReport m;
  if (c.gold()) m.recall = static_cast<double>(c.correct) / static_cast<double>(c.gold());
  if (c.proposed()) m.precision = static_cast<double>(c.correct) / static_cast<double>(c.proposed());
  if (c.total()) m.error = static_cast<double>(c.miss + c.false_alarm) / static_cast<double>(c.total());
  return m;
}

/// Half-up rounding to a fixed number of decimals; the tiny offset absorbs
/// binary representation error in values like 0.45 * 100.
inline double round_half_up(double x, int decimals) {
  const double f = std::pow(10.0, decimals);
  return std::floor(x * f + 0.5 + 1e-9) / f;
}

/// Percentage of a fraction at one decimal.
inline double percent(double fraction, int decimals = 1) { return round_half_up(fraction * 100.0, decimals); }

inline json to_json(const ConfusionCounts& c) {
  return {{"correct", c.correct}, {"false_alarm", c.false_alarm}, {"miss", c.miss}, {"reject", c.reject}};
}

inline json to_json(const MetricReport& m) {
  return {{"recall", m.recall},
          {"precision", m.precision},
          {"error", m.error},
          {"recall_pct", percent(m.recall)},
          {"precision_pct", percent(m.precision)},
          {"error_pct", percent(m.error)}};
}

}  // namespace prosogate::eval
