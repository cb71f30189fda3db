#pragma once

// Whole-corpus parse timing with and without gating.

#include <algorithm>
#include <chrono>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "../corpus/turn.hpp"
#include "../error.hpp"
#include "../grammar/grammar.hpp"
#include "../parser/chart.hpp"
#include "metrics.hpp"

namespace prosogate::eval {

struct BenchReport {
  double seconds_on = 0;   // gated setting
  double seconds_off = 0;  // ungated setting
  std::size_t turns = 0;
  std::size_t empty_edges_on = 0, empty_edges_off = 0;
  std::size_t sites_on = 0, sites_off = 0;
  std::size_t repeats = 1;
  std::size_t compared_turns = 0;         // turns whose gold sites all pass the gate
  std::vector<std::string> mismatched;    // compared turns whose reading sets differ

  static BenchReport from_totals(double on, double off, std::size_t turns) {
    BenchReport r;
    r.seconds_on = on;
    r.seconds_off = off;
    r.turns = turns;
    return r;
  }

  double average_on() const { return turns ? seconds_on / static_cast<double>(turns) : 0.0; }
  double average_off() const { return turns ? seconds_off / static_cast<double>(turns) : 0.0; }
  /// 1 - on/off; 0 when nothing was timed.
  double speedup() const { return seconds_off > 0 ? 1.0 - seconds_on / seconds_off : 0.0; }
  bool readings_identical() const { return mismatched.empty(); }

  /// The settings exchanged.
  BenchReport swapped() const {
    BenchReport r = *this;
    std::swap(r.seconds_on, r.seconds_off);
    std::swap(r.empty_edges_on, r.empty_edges_off);
    std::swap(r.sites_on, r.sites_off);
    return r;
  }
};

namespace detail {

struct Pass {
  double seconds = 0;
  std::size_t empty_edges = 0, sites = 0;
  std::vector<std::set<std::string>> readings;
  std::vector<std::vector<int>> proposed;
};

inline Pass timed_pass(const corpus::Corpus& c, const grammar::Grammar& g, const parser::ParseConfig& cfg) {
  Pass p;
  for (const auto& t : c.turns) {
    const auto t0 = std::chrono::steady_clock::now();
    parser::ParseResult r;
    try {
      r = parser::parse(t, g, cfg);
    } catch (const Error& e) {
      throw ParseError("turn " + t.id + ": " + e.what());
    }
    p.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    p.empty_edges += r.stats.empty_edges;
    p.sites += r.sites.size();
    p.readings.push_back(r.reading_set());
    p.proposed.push_back(r.sites);
  }
  return p;
}

}  // namespace detail

/// Sequential passes on the calling thread after one untimed warm-up pass.
/// The order of the two settings alternates between repeats; with
/// repeats > 1 each setting's total is the median over passes.
inline BenchReport bench(const corpus::Corpus& c, const grammar::Grammar& g, const parser::ParseConfig& on,
                         const parser::ParseConfig& off, std::size_t repeats = 1) {
  if (repeats == 0) throw InvalidArgument("repeats must be positive");
  std::vector<double> t_on, t_off;
  detail::Pass p_on, p_off;
  detail::timed_pass(c, g, off);
  for (std::size_t k = 0; k < repeats; ++k) {
    if (k % 2 == 0) {
      p_on = detail::timed_pass(c, g, on);
      p_off = detail::timed_pass(c, g, off);
    } else {
      p_off = detail::timed_pass(c, g, off);
      p_on = detail::timed_pass(c, g, on);
    }
    t_off.push_back(p_off.seconds);
    t_on.push_back(p_on.seconds);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  BenchReport r = BenchReport::from_totals(median(t_on), median(t_off), c.turns.size());
  r.repeats = repeats;
  r.empty_edges_on = p_on.empty_edges;
  r.empty_edges_off = p_off.empty_edges;
  r.sites_on = p_on.sites;
  r.sites_off = p_off.sites;
  for (std::size_t i = 0; i < c.turns.size(); ++i) {
    const auto& t = c.turns[i];
    if (!t.gold_traces) continue;
    const auto& sites = p_on.proposed[i];
    const bool all_pass = std::all_of(t.gold_traces->begin(), t.gold_traces->end(), [&](int gap) {
      return std::find(sites.begin(), sites.end(), gap) != sites.end();
    });
    if (!all_pass) continue;
    ++r.compared_turns;
    if (p_on.readings[i] != p_off.readings[i]) r.mismatched.push_back(t.id);
  }
  return r;
}

inline nlohmann::json to_json(const BenchReport& r) {
  return {{"with_prosody", {{"overall_s", r.seconds_on}, {"average_s", r.average_on()},
                            {"empty_edges", r.empty_edges_on}, {"proposed_sites", r.sites_on}}},
          {"without_prosody", {{"overall_s", r.seconds_off}, {"average_s", r.average_off()},
                               {"empty_edges", r.empty_edges_off}, {"proposed_sites", r.sites_off}}},
          {"turns", r.turns},
          {"repeats", r.repeats},
          {"speedup", r.speedup()},
          {"speedup_pct", round_half_up(r.speedup() * 100.0, 2)},
          {"compared_turns", r.compared_turns},
          {"readings_identical", r.readings_identical()},
          {"mismatched_turns", r.mismatched}};
}

}  // namespace prosogate::eval
