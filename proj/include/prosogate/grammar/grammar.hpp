#pragma once

// Lexicon, rule schemata and the verb-second lexical rule.
//
// Feature geometry assumed by the engine (LOC holds HEAD, SUBCAT and SEM;
// the double-slash set lives at NONLOC.DSL and is encoded as a list of at
// most one element):
//
//   [ PHON   <orthography>
//     LOC    [ HEAD [POS, VFORM, FIN, VPOS, ...], SUBCAT <...>, SEM [REL, roles...] ]
//     NONLOC [ DSL <...>, FILLER ... ] ]

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "../error.hpp"
#include "../fs/feature_structure.hpp"
#include "../fs/json_io.hpp"

namespace prosogate::grammar {

using fs::FeatureStructure;
using fs::json;
using fs::Path;

namespace geometry {
inline const Path& phon() {
  static const Path p{"PHON"};
  return p;
}
inline const Path& loc() {
  static const Path p{"LOC"};
  return p;
}
inline const Path& head() {
  static const Path p{"LOC", "HEAD"};
  return p;
}
inline const Path& subcat() {
  static const Path p{"LOC", "SUBCAT"};
  return p;
}
inline const Path& sem() {
  static const Path p{"LOC", "SEM"};
  return p;
}
inline const Path& dsl() {
  static const Path p{"NONLOC", "DSL"};
  return p;
}
inline const Path& vpos() {
  static const Path p{"LOC", "HEAD", "VPOS"};
  return p;
}
inline const std::vector<std::string>& required_features() {
  static const std::vector<std::string> names{"PHON", "LOC", "HEAD", "SUBCAT", "SEM", "REL",
                                              "NONLOC", "DSL", "POS", "FIN", "VPOS"};
  return names;
}
}  // namespace geometry

enum class SchemaKind { head_complement, head_subject, head_adjunct, filler_head, v2_selection };

inline std::string to_string(SchemaKind k) {
  switch (k) {
    case SchemaKind::head_complement:
      return "head-complement";
    case SchemaKind::head_subject:
      return "head-subject";
    case SchemaKind::head_adjunct:
      return "head-adjunct";
    case SchemaKind::filler_head:
      return "filler-head";
    case SchemaKind::v2_selection:
      return "v2-selection";
  }
  return "?";
}

inline std::optional<SchemaKind> schema_kind_from(std::string_view name) {
  for (auto k : {SchemaKind::head_complement, SchemaKind::head_subject, SchemaKind::head_adjunct,
                 SchemaKind::filler_head, SchemaKind::v2_selection})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

struct LexEntry {
  std::string id;
  std::string orth;
  FeatureStructure category;
  /// Present exactly for second-position verbs built by the lexical rule.
  std::optional<FeatureStructure> trace_template;
  /// List <category, trace_template> of one graph; the trace's LOC is the
  /// node the category's complement carries in its DSL.
  std::optional<FeatureStructure> linked;
  /// Entry the V2 form was derived from.
  std::string source_id;

  bool is_v2() const { return trace_template.has_value(); }
};

/// A binary schema stored as one structure <mother, left, right> so tags
/// are shared between the three parts.
struct RuleSchema {
  SchemaKind kind;
  std::string label;
  FeatureStructure rule;
  int head = 0;

  FeatureStructure mother() const { return *rule.at(Path::parse("0")); }
  FeatureStructure daughter(int i) const { return *rule.at(Path::parse(std::to_string(i + 1))); }
  std::string name() const { return to_string(kind); }
};

struct Grammar {
  fs::Signature signature;
  std::vector<LexEntry> entries;  // file order; V2 forms follow their source
  std::unordered_map<std::string, std::vector<std::size_t>> lexicon;
  std::vector<RuleSchema> schemata;
  std::vector<std::string> diagnostics;

  std::vector<const LexEntry*> lookup(const std::string& orth) const {
    std::vector<const LexEntry*> out;
    if (auto it = lexicon.find(orth); it != lexicon.end())
      for (auto i : it->second) out.push_back(&entries[i]);
    return out;
  }

  const LexEntry* find_entry(const std::string& id) const {
    for (const auto& e : entries)
      if (e.id == id) return &e;
    return nullptr;
  }
};

/// The underspecified empty verbal head: empty phonology, LOC shared with the
/// single DSL element.
inline FeatureStructure generic_head_trace() {
  static const FeatureStructure trace =
      fs::parse_avm(json::parse(R"({"PHON": [], "LOC": "#1", "NONLOC": {"DSL": ["#1"]}})"));
  return trace;
}

struct LexicalRuleResult {
  std::optional<LexEntry> entry;
  std::string reason;  // why the rule did not apply

  explicit operator bool() const { return entry.has_value(); }
};

/// Derives the second-position form of a finite verb-final entry together
/// with its fully specified trace. Non-verbs, non-finite verbs and verbs not
/// in final position yield an empty result with a reason.
inline LexicalRuleResult apply_v2_lexical_rule(const LexEntry& final_entry) {
  const auto& cat = final_entry.category;
  auto pos = cat.at(geometry::head() / "POS");
  auto fin = cat.at(geometry::head() / "FIN");
  auto vpos = cat.at(geometry::vpos());
  if (!pos || !pos->atom_is("verb")) return {std::nullopt, "not a verb"};
  if (!fin || !fin->atom_is("+")) return {std::nullopt, "not finite"};
  if (!vpos || !vpos->atom_is("final")) return {std::nullopt, "not a verb-final form"};
  auto loc = cat.at(geometry::loc());
  auto head = cat.at(geometry::head());
  if (!loc || !head) return {std::nullopt, "entry lacks LOC.HEAD"};

  static const json pattern = json::parse(R"([
    {"PHON": "#phon",
     "LOC": {"HEAD": "#v2head",
             "SUBCAT": [{"LOC": {"HEAD": "#th", "SEM": "#vpsem"}, "NONLOC": {"DSL": ["#T"]}}],
             "SEM": "#vpsem"},
     "NONLOC": {"DSL": []}},
    {"PHON": [], "LOC": {"#T": {"HEAD": "#th"}}, "NONLOC": {"DSL": ["#T"]}}
  ])");

  fs::Unifier store;
  fs::JsonReader reader(store, nullptr, "v2 lexical rule");
  auto root = reader.read(pattern);
  const auto& tags = reader.tags();
  fs::Unifier::Memo memo;
  auto imported_loc = store.import(*loc, &memo);
  bool ok = store.unify(tags.at("#T"), imported_loc);
  if (auto phon = cat.at(geometry::phon())) ok = ok && store.unify(tags.at("#phon"), store.import(*phon, &memo));
  // the V2 head is a copy of the final head with the position flipped
  auto v2_head = head->replace(Path{"VPOS"}, FeatureStructure::atom("second"));
  ok = ok && store.unify(tags.at("#v2head"), store.import(v2_head));
  if (!ok) return {std::nullopt, "entry is inconsistent with the verb-second pattern"};
  auto linked = store.extract(root);
  if (!linked) return {std::nullopt, "verb-second pattern produced a cycle"};

  LexEntry out;
  out.id = final_entry.id + "+v2";
  out.orth = final_entry.orth;
  out.linked = *linked;
  out.category = *linked->at(Path::parse("0"));
  out.trace_template = *linked->at(Path::parse("1"));
  out.source_id = final_entry.id;
  return {std::move(out), {}};
}

namespace detail {

inline std::string where_lex(std::size_t i, const std::string& id) {
  return "lexicon[" + std::to_string(i) + "]" + (id.empty() ? "" : " id=" + id);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw GrammarError(what);
}

}  // namespace detail

/// Loads a grammar document:
///   {"features": [...], "lexicon": [{"id", "orth", "avm"}...],
///    "schemata": [{"name", "label"?, "daughters": [l, r], "mother", "head"}...]}
/// The V2 lexical rule runs over every entry at load time.
inline Grammar load_grammar(const json& doc) {
  using detail::require;
  require(doc.is_object(), "grammar document must be a JSON object");
  Grammar g;
  require(doc.contains("features") && doc["features"].is_array(), "grammar lacks a \"features\" array");
  for (const auto& f : doc["features"]) {
    require(f.is_string(), "feature names must be strings");
    const auto& name = f.get_ref<const std::string&>();
    require(name != "FIRST" && name != "REST", "feature name " + name + " is reserved for list cells");
    g.signature.declare(name);
  }
  for (const auto& name : geometry::required_features())
    require(g.signature.declares(name), "grammar must declare feature " + name);

  require(doc.contains("lexicon") && doc["lexicon"].is_array(), "grammar lacks a \"lexicon\" array");
  std::map<std::string, std::size_t> ids;
  const auto& lex = doc["lexicon"];
  for (std::size_t i = 0; i < lex.size(); ++i) {
    const auto& item = lex[i];
    std::string id = item.value("id", "");
    const auto where = detail::where_lex(i, id);
    require(item.is_object() && !id.empty(), where + ": entry needs a non-empty \"id\"");
    require(item.contains("orth") && item["orth"].is_string(), where + ": entry needs \"orth\"");
    require(item.contains("avm"), where + ": entry needs \"avm\"");
    LexEntry e;
    e.id = id;
    e.orth = item["orth"].get<std::string>();
    e.category = fs::parse_avm(item["avm"], &g.signature, where);
    if (!e.category.at(geometry::phon())) {
      auto with_phon = fs::unify(e.category, fs::parse_avm(json{{"PHON", json::array({e.orth})}}));
      require(with_phon.has_value(), where + ": PHON cannot be added");
      e.category = *with_phon;
    }
    if (!e.category.at(geometry::dsl())) g.diagnostics.push_back(where + ": entry does not specify NONLOC.DSL");

    std::vector<LexEntry> produced{std::move(e)};
    if (auto v2 = apply_v2_lexical_rule(produced.front())) produced.push_back(std::move(*v2.entry));
    for (auto& p : produced) {
      require(ids.emplace(p.id, g.entries.size()).second, where + ": duplicate entry id " + p.id);
      if (p.trace_template)
        require(fs::unifiable(*p.trace_template, generic_head_trace()),
                where + ": trace of " + p.id + " does not unify with the generic head trace");
      g.lexicon[p.orth].push_back(g.entries.size());
      g.entries.push_back(std::move(p));
    }
  }

  require(doc.contains("schemata") && doc["schemata"].is_array(), "grammar lacks a \"schemata\" array");
  std::map<std::string, int> labels;
  const auto& schemata = doc["schemata"];
  for (std::size_t i = 0; i < schemata.size(); ++i) {
    const auto& item = schemata[i];
    const auto where = "schemata[" + std::to_string(i) + "]";
    require(item.is_object(), where + ": schema must be an object");
    auto kind = schema_kind_from(item.value("name", ""));
    require(kind.has_value(), where + ": unknown schema name \"" + item.value("name", "") + "\"");
    require(item.contains("daughters") && item["daughters"].is_array() && item["daughters"].size() == 2,
            where + ": schemata are binary (exactly two daughters)");
    require(item.contains("mother"), where + ": schema needs \"mother\"");
    require(item.contains("head") && item["head"].is_number_integer(), where + ": schema needs \"head\" index");
    RuleSchema s;
    s.kind = *kind;
    s.label = item.value("label", to_string(*kind));
    s.head = item["head"].get<int>();
    require(s.head == 0 || s.head == 1, where + ": head index must be 0 or 1");
    require(labels.emplace(s.label, static_cast<int>(i)).second, where + ": duplicate schema label " + s.label);
    fs::Unifier store;
    fs::JsonReader reader(store, &g.signature, where);
    auto m = reader.read(item["mother"]);
    auto d0 = reader.read(item["daughters"][0]);
    auto d1 = reader.read(item["daughters"][1]);
    auto nil = store.make_node(fs::NodeKind::empty_list);
    auto root = store.make_cons(m, store.make_cons(d0, store.make_cons(d1, nil)));
    s.rule = reader.finish(root);

    auto mother_dsl = s.mother().at(geometry::dsl());
    auto head_dsl = s.daughter(s.head).at(geometry::dsl());
    if (s.kind != SchemaKind::v2_selection) {
      require(mother_dsl && head_dsl && mother_dsl->identical(*head_dsl),
              where + " (" + s.label + "): mother's NONLOC.DSL must be shared with the head daughter's");
    } else {
      auto selected_dsl = s.daughter(1 - s.head).at(geometry::dsl());
      require(mother_dsl && selected_dsl && !mother_dsl->identical(*selected_dsl),
              where + " (" + s.label + "): v2-selection must bind the selected projection's DSL");
    }
    auto mother_head = s.mother().at(geometry::head());
    auto dtr_head = s.daughter(s.head).at(geometry::head());
    if (!(mother_head && dtr_head && mother_head->identical(*dtr_head)))
      g.diagnostics.push_back(where + " (" + s.label + "): HEAD not shared between mother and head daughter");
    g.schemata.push_back(std::move(s));
  }
  return g;
}

inline Grammar load_grammar_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GrammarError(std::string("grammar is not valid JSON: ") + e.what());
  }
  return load_grammar(doc);
}

inline Grammar load_grammar_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GrammarError("cannot open grammar file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_grammar_text(buf.str());
}

}  // namespace prosogate::grammar
