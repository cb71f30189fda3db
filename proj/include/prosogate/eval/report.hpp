#pragma once

// Aligned text tables for the evaluation reports.

#include <cstdio>
#include <string>

#include "bench.hpp"
#include "crosstab.hpp"
#include "metrics.hpp"
#include "rank.hpp"

namespace prosogate::eval {

namespace detail {

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

}  // namespace detail

inline std::string format_confusion(const ConfusionCounts& c) {
  using detail::fmt;
  std::string s;
  s += fmt("%-18s %-22s %-22s\n", "", "trace position", "no trace position");
  s += fmt("%-18s %-22s %-22s\n", "trace proposed", fmt("Correct: %zu", c.correct).c_str(),
           fmt("False Alarm: %zu", c.false_alarm).c_str());
  s += fmt("%-18s %-22s %-22s\n", "no trace proposed", fmt("Miss: %zu", c.miss).c_str(),
           fmt("X: %zu", c.reject).c_str());
  return s;
}

inline std::string format_metrics(const MetricReport& m) {
  using detail::fmt;
  return fmt("Recall    = %5.1f %%\n", percent(m.recall)) + fmt("Precision = %5.1f %%\n", percent(m.precision)) +
         fmt("Error     = %5.1f %%\n", percent(m.error));
}

inline std::string format_crosstab(const CrossTab& t) {
  using detail::fmt;
  std::string s = fmt("%-8s %7s", "", "cases");
  for (const auto& c : t.cols) s += fmt(" %7s", c.c_str());
  s += "\n";
  for (const auto& r : t.rows) {
    s += fmt("%-8s %7zu", r.c_str(), t.row_total(r));
    for (const auto& c : t.cols) s += fmt(" %7.1f", t.percent(r, c));
    s += "\n";
  }
  return s;
}

inline std::string format_rank(const RankHistogram& h) {
  using detail::fmt;
  std::string a = fmt("%-12s", "Rank"), b = fmt("%-12s", "# of occ.");
  for (std::size_t k = 0; k < RankHistogram::kBuckets; ++k) {
    a += fmt(" %5s", RankHistogram::bucket_label(k).c_str());
    b += fmt(" %5zu", h.counts[k]);
  }
  return a + "\n" + b + "\n" + fmt("%-12s %5zu\n", "sentences", h.total);
}

inline std::string format_bench(const BenchReport& r) {
  using detail::fmt;
  std::string s = fmt("%-14s %16s %16s\n", "", "With Prosody", "Without Prosody");
  s += fmt("%-14s %16.3f %16.3f\n", "Overall (s)", r.seconds_on, r.seconds_off);
  s += fmt("%-14s %16.5f %16.5f\n", "Average (s)", r.average_on(), r.average_off());
  s += fmt("%-14s %16zu %16zu\n", "Empty edges", r.empty_edges_on, r.empty_edges_off);
  s += fmt("%-14s %16zu %16zu\n", "Trace sites", r.sites_on, r.sites_off);
  s += fmt("%-14s %15.2f%% %16s\n", "Speedup", round_half_up(r.speedup() * 100.0, 2), "./.");
  s += fmt("turns %zu, repeats %zu, reading sets compared on %zu turns: %s\n", r.turns, r.repeats, r.compared_turns,
           r.readings_identical() ? "identical" : "DIFFERENT");
  return s;
}

}  // namespace prosogate::eval
