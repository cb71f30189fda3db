#include <string>

#include <gtest/gtest.h>

#include <prosogate/grammar/grammar.hpp>

namespace {

using namespace prosogate;
using grammar::apply_v2_lexical_rule;
using grammar::Grammar;
using grammar::LexEntry;
using grammar::load_grammar;
using grammar::load_grammar_file;
using fs::json;
using fs::Path;

const std::string kDemo = std::string(PROSOGATE_DEMO_DIR) + "/grammar.json";

const Grammar& demo() {
  static const Grammar g = load_grammar_file(kDemo);
  return g;
}

json minimal_doc() {
  return json::parse(R"({
    "features": ["PHON", "LOC", "HEAD", "SUBCAT", "SEM", "REL", "NONLOC", "DSL", "FILLER", "POS", "FIN", "VPOS"],
    "lexicon": [
      {"id": "v", "orth": "v", "avm": {"LOC": {"HEAD": {"POS": "verb", "FIN": "+", "VPOS": "final"},
                                               "SUBCAT": [], "SEM": {"REL": "v"}},
                                       "NONLOC": {"DSL": []}}},
      {"id": "n", "orth": "n", "avm": {"LOC": {"HEAD": {"POS": "noun"}, "SUBCAT": [], "SEM": {"REL": "n"}},
                                       "NONLOC": {"DSL": []}}}
    ],
    "schemata": [
      {"name": "head-subject", "head": 1,
       "daughters": [{"LOC": "#s"}, {"LOC": {"HEAD": "#h", "SUBCAT": ["#s"]}, "NONLOC": {"DSL": "#d"}}],
       "mother": {"LOC": {"HEAD": "#h", "SUBCAT": []}, "NONLOC": {"DSL": "#d"}}}
    ]
  })");
}

std::string load_error(const json& doc) {
  try {
    load_grammar(doc);
  } catch (const GrammarError& e) {
    return e.what();
  }
  return {};
}

TEST(DemoGrammar, LoadsCleanly) {
  const auto& g = demo();
  EXPECT_TRUE(g.diagnostics.empty()) << g.diagnostics.front();
  EXPECT_EQ(g.schemata.size(), 7u);
  int v2 = 0;
  for (const auto& e : g.entries) v2 += e.is_v2();
  EXPECT_EQ(v2, 11);
  EXPECT_EQ(g.lookup("glaube").size(), 4u);
  EXPECT_TRUE(g.lookup("xyz").empty());
}

TEST(DemoGrammar, PhonIsFilledFromOrthography) {
  auto* e = demo().find_entry("wagen");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->category.at("PHON")->str(), "<wagen>");
}

TEST(V2Rule, DerivedEntryFollowsItsSource) {
  const auto& g = demo();
  for (std::size_t i = 0; i < g.entries.size(); ++i) {
    if (!g.entries[i].is_v2()) continue;
    ASSERT_GT(i, 0u);
    EXPECT_EQ(g.entries[i - 1].id, g.entries[i].source_id);
    EXPECT_EQ(g.entries[i].id, g.entries[i].source_id + "+v2");
  }
}

TEST(V2Rule, TraceIsSpecifiedCopyOfFinalLoc) {
  auto* src = demo().find_entry("reparierte");
  auto* v2 = demo().find_entry("reparierte+v2");
  ASSERT_TRUE(src && v2 && v2->trace_template && v2->linked);
  const auto& t = *v2->trace_template;
  EXPECT_TRUE(t.at("PHON")->is_empty_list());
  EXPECT_TRUE(t.same_node(Path{"LOC"}, Path::parse("NONLOC.DSL.0")));
  EXPECT_EQ(t.at("LOC")->str(), src->category.at("LOC")->str());
  EXPECT_TRUE(fs::unifiable(t, grammar::generic_head_trace()));
  EXPECT_TRUE(t.at("LOC.HEAD.VPOS")->atom_is("final"));
  EXPECT_TRUE(v2->category.at("LOC.HEAD.VPOS")->atom_is("second"));
  EXPECT_EQ(v2->category.at("LOC.SUBCAT")->list_elements()->size(), 1u);
  // the selected projection's DSL holds exactly the trace's LOC
  EXPECT_TRUE(v2->linked->same_node(Path::parse("0.LOC.SUBCAT.0.NONLOC.DSL.0"), Path::parse("1.LOC")));
  EXPECT_TRUE(v2->linked->same_node(Path::parse("0.LOC.SEM"), Path::parse("0.LOC.SUBCAT.0.LOC.SEM")));
  EXPECT_EQ(v2->category.at("PHON")->str(), "<reparierte>");
}

TEST(V2Rule, InapplicableInputsReportWhy) {
  const auto& g = demo();
  for (const char* id : {"töten", "wagen", "gestern", "reparierte+v2"}) {
    auto r = apply_v2_lexical_rule(*g.find_entry(id));
    EXPECT_FALSE(r) << id;
    EXPECT_FALSE(r.reason.empty());
  }
}

TEST(V2Rule, DeterministicAcrossLoads) {
  auto a = load_grammar_file(kDemo);
  auto b = load_grammar_file(kDemo);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].category.str(), b.entries[i].category.str());
    if (a.entries[i].trace_template) {
      EXPECT_EQ(a.entries[i].trace_template->str(), b.entries[i].trace_template->str());
    }
  }
}

TEST(Loader, MinimalDocument) {
  auto g = load_grammar(minimal_doc());
  EXPECT_EQ(g.entries.size(), 3u);
  EXPECT_EQ(g.entries[1].id, "v+v2");
  EXPECT_EQ(g.schemata[0].label, "head-subject");
}

TEST(Loader, UndeclaredFeatureNamesEntry) {
  auto doc = minimal_doc();
  doc["lexicon"][1]["avm"]["LOC"]["HEAD"]["CASE"] = "nom";
  auto msg = load_error(doc);
  EXPECT_NE(msg.find("undeclared feature CASE"), std::string::npos) << msg;
  EXPECT_NE(msg.find("lexicon[1]"), std::string::npos) << msg;
}

TEST(Loader, CyclicEntryRejected) {
  auto doc = minimal_doc();
  doc["lexicon"][1]["avm"]["LOC"] = json::parse(R"({"#1": {"SEM": {"REL": "#1"}}})");
  EXPECT_NE(load_error(doc).find("cyclic"), std::string::npos);
}

TEST(Loader, DuplicateIdRejected) {
  auto doc = minimal_doc();
  doc["lexicon"][1]["id"] = "v";
  EXPECT_NE(load_error(doc).find("duplicate entry id"), std::string::npos);
}

TEST(Loader, DslMustPercolateThroughHead) {
  auto doc = minimal_doc();
  doc["schemata"][0]["mother"]["NONLOC"]["DSL"] = json::array();
  EXPECT_NE(load_error(doc).find("DSL"), std::string::npos);
}

TEST(Loader, StructuralErrors) {
  auto doc = minimal_doc();
  doc["features"].erase(doc["features"].begin() + 7);  // DSL
  EXPECT_NE(load_error(doc).find("must declare feature DSL"), std::string::npos);

  doc = minimal_doc();
  doc["schemata"][0]["name"] = "head-filler-subject";
  EXPECT_NE(load_error(doc).find("unknown schema"), std::string::npos);

  doc = minimal_doc();
  doc["schemata"][0]["daughters"].push_back(json::object());
  EXPECT_NE(load_error(doc).find("binary"), std::string::npos);

  EXPECT_THROW(grammar::load_grammar_text("{not json"), GrammarError);
  EXPECT_THROW(load_grammar_file("/nonexistent/grammar.json"), GrammarError);
}

}  // namespace
