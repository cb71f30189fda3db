#include <set>
#include <string>

#include <gtest/gtest.h>

#include <prosogate/corpus/turn.hpp>
#include <prosogate/grammar/grammar.hpp>
#include <prosogate/parser/chart.hpp>

#include "support/oracle.hpp"

namespace {

using namespace prosogate;
using corpus::TurnRecord;
using fs::Path;
using parser::EdgeKind;
using parser::GateMode;
using parser::ParseConfig;

const std::string kDir = PROSOGATE_DEMO_DIR;

const grammar::Grammar& demo_grammar() {
  static const auto g = grammar::load_grammar_file(kDir + "/grammar.json");
  return g;
}

const corpus::Corpus& demo_corpus() {
  static const auto c = corpus::load_corpus(kDir + "/corpus.jsonl");
  return c;
}

const TurnRecord& turn(const std::string& id) {
  for (const auto& t : demo_corpus().turns)
    if (t.id == id) return t;
  throw std::runtime_error("no demo turn " + id);
}

TurnRecord scored(std::vector<std::string> words, std::vector<double> scores) {
  TurnRecord t;
  t.id = "t";
  t.words = std::move(words);
  t.gap_scores = std::move(scores);
  return t;
}

ParseConfig threshold(double tau) {
  ParseConfig c;
  c.mode = GateMode::threshold;
  c.threshold = tau;
  return c;
}

ParseConfig off() {
  ParseConfig c;
  c.mode = GateMode::off;
  return c;
}

TEST(ProposeSites, ThresholdRankOff) {
  auto t = scored({"a", "b", "c"}, {0.001, 0.2, 0.9});
  EXPECT_EQ(parser::propose_trace_sites(t, threshold(0.01)), (std::vector<int>{2, 3}));
  EXPECT_EQ(parser::propose_trace_sites(t, threshold(0)), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(parser::propose_trace_sites(t, threshold(0.2)), (std::vector<int>{2, 3}));
  ParseConfig rank;
  rank.mode = GateMode::rank;
  rank.rank_limit = 2;
  EXPECT_EQ(parser::propose_trace_sites(t, rank), (std::vector<int>{3, 2}));
  auto ties = scored({"a", "b", "c", "d"}, {0.5, 0.5, 0.5, 0.5});
  EXPECT_EQ(parser::propose_trace_sites(ties, rank), (std::vector<int>{1, 2}));
  TurnRecord bare;
  bare.id = "bare";
  bare.words = {"a", "b"};
  EXPECT_EQ(parser::propose_trace_sites(bare, off()), (std::vector<int>{1, 2}));
  EXPECT_THROW(parser::propose_trace_sites(bare, threshold(0.01)), InputFormatError);
  auto low = scored({"a", "b"}, {0.5, 0.0});
  auto cfg = threshold(0.01);
  cfg.assume_final_boundary = true;
  EXPECT_EQ(parser::propose_trace_sites(low, cfg), (std::vector<int>{1, 2}));
  EXPECT_THROW(parser::propose_trace_sites(t, threshold(1.5)), InvalidArgument);
}

TEST(Parse, FrontedAdverbTreeWithTraceAtFinalGap) {
  const auto& g = demo_grammar();
  auto r = parser::parse(turn("1a"), g, threshold(0.01));
  ASSERT_EQ(r.readings.size(), 1u);
  EXPECT_EQ(r.readings[0].derivation,
            "(filler-head-adjunct gestern (v2-selection reparierte+v2 (head-subject er "
            "(head-complement (head-complement-initial den wagen) t<reparierte>@5))))");
  EXPECT_EQ(parser::to_string(parser::extract_pred_arg(r, 0)), "fix(agent:er,theme:wagen) yesterday(arg:fix)");

  // the trace's LOC is one node with the DSL element the V2 verb's complement requires
  auto rp = parser::replay(r, g, r.readings[0]);
  std::size_t trace = 0, verb = 0, vp = 0;
  for (std::size_t i = 0; i < rp.labels.size(); ++i) {
    if (rp.labels[i] == "t<reparierte>@5") trace = i;
    if (rp.labels[i] == "reparierte+v2") verb = i;
    if (rp.labels[i] == "v2-selection") vp = i + 2;  // preorder: selection, verb, selected projection
  }
  ASSERT_TRUE(trace && verb && vp);
  const auto& nodes = rp.nodes;
  EXPECT_TRUE(nodes.same_node(rp.path(trace, Path{"LOC"}), rp.path(verb, Path::parse("LOC.SUBCAT.0.NONLOC.DSL.0"))));
  EXPECT_TRUE(nodes.same_node(rp.path(trace, Path{"LOC"}), rp.path(vp, Path::parse("NONLOC.DSL.0"))));
  EXPECT_TRUE(r.chart[rp.edges[trace]].zero_width());
  EXPECT_EQ(r.chart[rp.edges[trace]].start, 5);
  EXPECT_EQ(r.chart[rp.edges[trace]].category.at("LOC")->str(),
            g.find_entry("reparierte")->category.at("LOC")->str());
}

TEST(Parse, ZeroScoresBlockEveryTrace) {
  auto t = turn("1a");
  t.gap_scores = std::vector<double>(t.words.size(), 0.0);
  auto r = parser::parse(t, demo_grammar(), threshold(0.01));
  EXPECT_TRUE(r.readings.empty());
  EXPECT_EQ(r.stats.empty_edges, 0u);
  EXPECT_THROW(parser::extract_pred_arg(r, 0), ParseError);
}

TEST(Parse, VerbFinalClauseNeedsNoTrace) {
  auto r = parser::parse(turn("1b-clause"), demo_grammar(), threshold(0.01));
  ASSERT_EQ(r.readings.size(), 1u);
  EXPECT_EQ(r.stats.empty_edges, 0u);
  EXPECT_EQ(r.readings[0].derivation.find("t<"), std::string::npos);
}

TEST(Parse, ScopeParallelismBetweenVerbSecondAndVerbFinal) {
  const auto& g = demo_grammar();
  auto a = parser::parse(turn("3a"), g, threshold(0.01));
  auto b = parser::parse(turn("3b"), g, threshold(0.01));
  ASSERT_EQ(a.readings.size(), 1u);
  ASSERT_EQ(b.readings.size(), 1u);
  auto pa = parser::extract_pred_arg(a, 0);
  EXPECT_EQ(pa, parser::extract_pred_arg(b, 0));
  EXPECT_EQ(parser::to_string(pa), "believe(agent:ich,theme:shall) kill(agent:du) not(arg:kill) shall(arg:not)");

  auto v2 = parser::parse(turn("1a"), g, threshold(0.01));
  auto clause = parser::parse(turn("1b-clause"), g, threshold(0.01));
  auto full = parser::parse(turn("1b"), g, threshold(0.01));
  EXPECT_EQ(parser::extract_pred_arg(v2, 0), parser::extract_pred_arg(clause, 0));
  ASSERT_EQ(full.readings.size(), 1u);
  auto outer = parser::extract_pred_arg(full, 0);
  for (const auto& tuple : parser::extract_pred_arg(v2, 0))
    EXPECT_NE(std::find(outer.begin(), outer.end(), tuple), outer.end()) << tuple.relation;
}

TEST(Parse, Errors) {
  auto t = scored({"gestern", "reparierte", "sie"}, {0.1, 0.1, 0.1});
  EXPECT_THROW(parser::parse(t, demo_grammar(), threshold(0.01)), ParseError);
  auto cfg = off();
  cfg.max_edges = 10;
  try {
    parser::parse(turn("1a"), demo_grammar(), cfg);
    FAIL() << "expected edge cap";
  } catch (const parser::EdgeCapExceeded& e) {
    EXPECT_GT(e.partial().lexical_edges, 0u);
  }
}

// --- properties over the demo corpus --------------------------------------

TEST(ParseProperties, GateOffEqualsThresholdZero) {
  for (const auto& t : demo_corpus().turns) {
    auto a = parser::parse(t, demo_grammar(), off());
    auto b = parser::parse(t, demo_grammar(), threshold(0));
    EXPECT_EQ(a.reading_set(), b.reading_set()) << t.id;
    EXPECT_EQ(a.stats.lexical_edges, b.stats.lexical_edges) << t.id;
    EXPECT_EQ(a.stats.empty_edges, b.stats.empty_edges) << t.id;
    EXPECT_EQ(a.stats.derived_edges, b.stats.derived_edges) << t.id;
    ASSERT_EQ(a.chart.size(), b.chart.size());
    for (std::size_t i = 0; i < a.chart.size(); ++i) EXPECT_EQ(a.chart[i].canon, b.chart[i].canon);
  }
}

TEST(ParseProperties, MonotoneGating) {
  const std::vector<double> taus{0, 0.005, 0.01, 0.05, 0.2, 0.5, 0.9, 1.0};
  for (const auto& t : demo_corpus().turns) {
    std::set<std::string> prev;
    std::size_t prev_empty = 0;
    for (std::size_t k = 0; k < taus.size(); ++k) {
      auto r = parser::parse(t, demo_grammar(), threshold(taus[k]));
      auto now = r.reading_set();
      if (k > 0) {
        EXPECT_TRUE(std::includes(prev.begin(), prev.end(), now.begin(), now.end())) << t.id << " tau " << taus[k];
        EXPECT_LE(r.stats.empty_edges, prev_empty) << t.id;
      }
      prev = now;
      prev_empty = r.stats.empty_edges;
    }
  }
}

TEST(ParseProperties, LicenserOrderingAndTraceFidelity) {
  for (const auto& t : demo_corpus().turns) {
    for (const auto& cfg : {off(), threshold(0.01)}) {
      auto r = parser::parse(t, demo_grammar(), cfg);
      std::set<int> stacked;
      for (const auto& s : r.trace_stack) stacked.insert(s.licenser_edge);
      std::set<std::pair<int, std::string>> seen;
      for (const auto& e : r.chart) {
        if (e.kind == EdgeKind::lexical) {
          EXPECT_EQ(stacked.count(e.id) > 0, e.entry->is_v2());
        }
        if (e.kind != EdgeKind::empty) continue;
        EXPECT_TRUE(e.zero_width());
        EXPECT_TRUE(e.category.at("PHON")->is_empty_list());
        EXPECT_TRUE(seen.insert({e.start, e.entry->id}).second) << "one empty edge per gap and template";
        ASSERT_FALSE(e.licensers.empty());
        for (int lic : e.licensers) {
          const auto& l = r.chart[lic];
          EXPECT_EQ(l.kind, EdgeKind::lexical);
          EXPECT_TRUE(l.entry->trace_template.has_value());
          EXPECT_EQ(l.entry, e.entry);
          EXPECT_GE(e.start, l.end) << t.id;
        }
        const auto& linked = *e.entry->linked;
        EXPECT_TRUE(fs::unifiable(e.category, *e.entry->trace_template));
        EXPECT_EQ(e.category.str(), linked.at("1")->str());
        EXPECT_TRUE(linked.same_node(Path::parse("1.LOC"), Path::parse("0.LOC.SUBCAT.0.NONLOC.DSL.0")));
      }
      std::size_t sites_times_templates = 0;
      for (int g : r.sites) {
        std::set<const grammar::LexEntry*> active;
        for (const auto& s : r.trace_stack)
          if (g >= s.licenser_end) active.insert(s.entry);
        sites_times_templates += active.size();
      }
      EXPECT_LE(r.stats.empty_edges, sites_times_templates);
      EXPECT_EQ(r.stats.proposed_sites, r.sites.size());
    }
  }
}

TEST(ParseProperties, MatchesBruteForceOracle) {
  int compared = 0, nonempty = 0;
  for (const auto& t : demo_corpus().turns) {
    if (t.words.size() > 6) continue;
    for (const auto& cfg : {off(), threshold(0.01)}) {
      auto r = parser::parse(t, demo_grammar(), cfg);
      prosogate::testing::BracketingOracle oracle(demo_grammar(), t.words, parser::propose_trace_sites(t, cfg));
      EXPECT_EQ(r.reading_set(), oracle.readings()) << t.id << " " << parser::to_string(cfg.mode);
      ++compared;
      nonempty += !r.readings.empty();
    }
  }
  EXPECT_GE(compared, 30);
  EXPECT_GE(nonempty, 20);
}

TEST(ParseProperties, DemoTurnsParseAsLabelled) {
  for (const auto& t : demo_corpus().turns) {
    auto r = parser::parse(t, demo_grammar(), threshold(0.01));
    if (t.id == "no-parse") {
      EXPECT_TRUE(r.readings.empty());
      continue;
    }
    EXPECT_EQ(r.readings.size(), 1u) << t.id;
    std::set<int> used;
    for (const auto& rd : r.readings) {
      for (std::size_t p = rd.derivation.find(">@"); p != std::string::npos; p = rd.derivation.find(">@", p + 1))
        used.insert(std::stoi(rd.derivation.substr(p + 2)));
    }
    std::set<int> gold(t.gold_traces->begin(), t.gold_traces->end());
    EXPECT_EQ(used, gold) << t.id;
  }
}

}  // namespace
