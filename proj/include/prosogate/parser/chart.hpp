#pragma once

// Bottom-up agenda chart parser with gated empty verbal heads.
//
// Chart positions run 0..n; word i occupies (i-1, i) and gap g is position g.
// Empty edges are zero-width at a proposed gap, g >= the end of the licensing
// V2 verb, and are only ever used as right daughters.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "../corpus/turn.hpp"
#include "../error.hpp"
#include "../fs/feature_structure.hpp"
#include "../grammar/grammar.hpp"

namespace prosogate::parser {

using corpus::TurnRecord;
using fs::FeatureStructure;
using fs::Path;
using grammar::Grammar;
using grammar::LexEntry;

enum class GateMode { threshold, rank, off };

inline std::string to_string(GateMode m) {
  switch (m) {
    case GateMode::threshold:
      return "threshold";
    case GateMode::rank:
      return "rank";
    case GateMode::off:
      return "off";
  }
  return "?";
}

struct ParseConfig {
  GateMode mode = GateMode::threshold;
  double threshold = 0.01;
  int rank_limit = 3;
  std::size_t max_edges = 200000;
  std::size_t max_readings = 10000;
  bool assume_final_boundary = false;

  void check() const {
    if (!(threshold >= 0 && threshold <= 1)) throw InvalidArgument("threshold must lie in [0,1]");
    if (mode == GateMode::rank && rank_limit < 1) throw InvalidArgument("rank limit must be positive");
    if (max_edges == 0) throw InvalidArgument("edge cap must be positive");
  }
};

/// Candidate trace gaps (1-based). Threshold mode: ascending gaps with
/// score >= tau. Rank mode: the N best gaps by descending score, ties to the
/// lower gap. Off: every gap, scores not needed.
inline std::vector<int> propose_trace_sites(const TurnRecord& turn, const ParseConfig& config) {
  config.check();
  const int n = static_cast<int>(turn.words.size());
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 1);
  if (config.mode == GateMode::off) return all;
  if (!turn.gap_scores || static_cast<int>(turn.gap_scores->size()) != n)
    throw InputFormatError("turn " + turn.id + ": gap scores missing or incomplete");
  const auto& s = *turn.gap_scores;
  std::vector<int> out;
  if (config.mode == GateMode::threshold) {
    for (int g = 1; g <= n; ++g)
      if (s[g - 1] >= config.threshold || (config.assume_final_boundary && g == n)) out.push_back(g);
    return out;
  }
  std::stable_sort(all.begin(), all.end(), [&](int a, int b) { return s[a - 1] > s[b - 1]; });
  all.resize(std::min<std::size_t>(all.size(), static_cast<std::size_t>(config.rank_limit)));
  if (config.assume_final_boundary && n > 0 && std::find(all.begin(), all.end(), n) == all.end()) all.push_back(n);
  return all;
}

enum class EdgeKind { lexical, empty, derived };

inline std::string to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::lexical:
      return "lexical";
    case EdgeKind::empty:
      return "empty";
    case EdgeKind::derived:
      return "derived";
  }
  return "?";
}

struct Derivation {
  int schema;
  int left;
  int right;
  bool operator==(const Derivation&) const = default;
};

struct Edge {
  int id = -1;
  int start = 0;
  int end = 0;
  FeatureStructure category;
  std::string canon;
  EdgeKind kind = EdgeKind::lexical;
  const LexEntry* entry = nullptr;  // lexical: the entry; empty: the V2 entry owning the template
  std::vector<int> licensers;       // empty edges: V2 lexical edges that introduced it
  std::vector<Derivation> derivations;

  int licenser() const { return licensers.empty() ? -1 : licensers.front(); }
  bool zero_width() const { return start == end; }
};

struct TraceStackEntry {
  int licenser_edge;
  const LexEntry* entry;
  int licenser_end;
};

struct ParseStatistics {
  std::size_t lexical_edges = 0;
  std::size_t empty_edges = 0;
  std::size_t derived_edges = 0;
  std::size_t packed_derivations = 0;
  std::size_t proposed_sites = 0;
  double elapsed_ms = 0;
};

struct DerivationTree {
  int edge = -1;
  int schema = -1;  // -1 for leaves
  std::vector<DerivationTree> children;
};

struct Reading {
  std::string derivation;
  int root_edge = -1;
  DerivationTree tree;
};

struct ParseResult {
  std::vector<Edge> chart;
  std::vector<int> roots;  // complete root edges (the packed forest)
  std::vector<int> sites;
  std::vector<TraceStackEntry> trace_stack;
  std::vector<Reading> readings;  // unpacked, sorted by derivation string
  bool readings_truncated = false;
  ParseStatistics stats;

  std::set<std::string> reading_set() const {
    std::set<std::string> out;
    for (const auto& r : readings) out.insert(r.derivation);
    return out;
  }
};

class EdgeCapExceeded : public ParseError {
 public:
  EdgeCapExceeded(const std::string& what, ParseStatistics partial) : ParseError(what), partial_(partial) {}
  const ParseStatistics& partial() const { return partial_; }

 private:
  ParseStatistics partial_;
};

/// Root condition: SUBCAT and DSL both empty.
inline bool is_root_category(const FeatureStructure& cat) {
  auto sc = cat.at(grammar::geometry::subcat());
  auto dsl = cat.at(grammar::geometry::dsl());
  return sc && sc->is_empty_list() && dsl && dsl->is_empty_list();
}

inline std::string trace_label(const Edge& e) { return "t<" + e.entry->source_id + ">@" + std::to_string(e.start); }

namespace detail {

/// Applies a schema to two categories in a thread-local working store.
inline std::optional<FeatureStructure> apply_schema(const grammar::RuleSchema& s, const FeatureStructure& left,
                                                    const FeatureStructure& right) {
  thread_local fs::Unifier u;
  static const Path mother_path = Path::parse("0"), left_path = Path::parse("1"), right_path = Path::parse("2");
  u.clear();
  auto r = u.import(s.rule);
  auto m = *u.follow(r, mother_path);
  auto d0 = *u.follow(r, left_path);
  auto d1 = *u.follow(r, right_path);
  if (!u.unify(d0, u.import(left))) return std::nullopt;
  if (!u.unify(d1, u.import(right))) return std::nullopt;
  return u.extract(m);
}

class ChartBuilder {
 public:
  ChartBuilder(const TurnRecord& turn, const Grammar& g, const ParseConfig& cfg, ParseResult& out)
      : turn_(turn), g_(g), cfg_(cfg), out_(out), n_(static_cast<int>(turn.words.size())) {
    starting_.resize(n_ + 1);
    ending_.resize(n_ + 1);
  }

  void run() {
    out_.sites = propose_trace_sites(turn_, cfg_);
    out_.stats.proposed_sites = out_.sites.size();
    for (int i = 0; i < n_; ++i) {
      auto entries = g_.lookup(turn_.words[i]);
      if (entries.empty()) throw ParseError("turn " + turn_.id + ": unknown word \"" + turn_.words[i] + "\"");
      for (const auto* e : entries) {
        Edge edge;
        edge.start = i;
        edge.end = i + 1;
        edge.category = e->category;
        edge.kind = EdgeKind::lexical;
        edge.entry = e;
        add(std::move(edge));
      }
    }
    while (next_ < agenda_.size()) process(agenda_[next_++]);
    for (const auto& e : out_.chart)
      if (e.kind != EdgeKind::empty && e.start == 0 && e.end == n_ && is_root_category(e.category))
        out_.roots.push_back(e.id);
  }

 private:
  void check_cap() {
    if (out_.chart.size() >= cfg_.max_edges) {
      tally();
      throw EdgeCapExceeded("turn " + turn_.id + ": edge cap of " + std::to_string(cfg_.max_edges) + " exceeded",
                            out_.stats);
    }
  }

  void tally() {
    out_.stats.lexical_edges = out_.stats.empty_edges = out_.stats.derived_edges = 0;
    for (const auto& e : out_.chart) {
      if (e.kind == EdgeKind::lexical) ++out_.stats.lexical_edges;
      if (e.kind == EdgeKind::empty) ++out_.stats.empty_edges;
      if (e.kind == EdgeKind::derived) ++out_.stats.derived_edges;
    }
  }

  int add(Edge e) {
    check_cap();
    e.id = static_cast<int>(out_.chart.size());
    e.canon = e.category.str();
    out_.chart.push_back(std::move(e));
    agenda_.push_back(out_.chart.back().id);
    return out_.chart.back().id;
  }

  void process(int id) {
    const Edge& e = out_.chart[id];
    if (e.kind == EdgeKind::lexical && e.entry->is_v2()) introduce_traces(id);
    const int start = out_.chart[id].start, end = out_.chart[id].end;
    const bool empty = out_.chart[id].zero_width();
    // as right daughter: anything non-empty ending where this starts
    for (std::size_t k = 0; k < ending_[start].size(); ++k) {
      int left = ending_[start][k];
      if (!out_.chart[left].zero_width()) combine(left, id);
    }
    // as left daughter
    if (!empty) {
      for (std::size_t k = 0; k < starting_[end].size(); ++k) combine(id, starting_[end][k]);
    }
    starting_[start].push_back(id);
    ending_[end].push_back(id);
  }

  void introduce_traces(int licenser) {
    const Edge& lic = out_.chart[licenser];
    const LexEntry* entry = lic.entry;
    out_.trace_stack.push_back({licenser, entry, lic.end});
    const int lic_end = lic.end;
    for (int g : out_.sites) {
      if (g < lic_end) continue;
      auto key = std::make_pair(g, entry);
      if (auto it = empty_at_.find(key); it != empty_at_.end()) {
        out_.chart[it->second].licensers.push_back(licenser);
        continue;
      }
      Edge t;
      t.start = t.end = g;
      t.category = *entry->trace_template;
      t.kind = EdgeKind::empty;
      t.entry = entry;
      t.licensers.push_back(licenser);
      empty_at_.emplace(key, add(std::move(t)));
    }
  }

  bool reaches(int from, int target) const {
    std::vector<int> stack{from};
    std::set<int> seen;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      if (x == target) return true;
      if (!seen.insert(x).second) continue;
      for (const auto& d : out_.chart[x].derivations) {
        stack.push_back(d.left);
        stack.push_back(d.right);
      }
    }
    return false;
  }

  void combine(int left, int right) {
    for (std::size_t s = 0; s < g_.schemata.size(); ++s) {
      auto mother = apply_schema(g_.schemata[s], out_.chart[left].category, out_.chart[right].category);
      if (!mother) continue;
      const int start = out_.chart[left].start, end = out_.chart[right].end;
      auto canon = mother->str();
      auto key = std::make_tuple(start, end, canon);
      Derivation d{static_cast<int>(s), left, right};
      if (auto it = derived_.find(key); it != derived_.end()) {
        auto& existing = out_.chart[it->second];
        if (std::find(existing.derivations.begin(), existing.derivations.end(), d) != existing.derivations.end())
          continue;
        if (reaches(left, it->second) || reaches(right, it->second)) continue;
        out_.chart[it->second].derivations.push_back(d);
        ++out_.stats.packed_derivations;
        continue;
      }
      Edge m;
      m.start = start;
      m.end = end;
      m.category = std::move(*mother);
      m.kind = EdgeKind::derived;
      m.derivations.push_back(d);
      derived_.emplace(std::move(key), add(std::move(m)));
    }
  }

  const TurnRecord& turn_;
  const Grammar& g_;
  const ParseConfig& cfg_;
  ParseResult& out_;
  int n_;
  std::vector<int> agenda_;
  std::size_t next_ = 0;
  std::vector<std::vector<int>> starting_, ending_;  // processed edges by position
  std::map<std::pair<int, const LexEntry*>, int> empty_at_;
  std::map<std::tuple<int, int, std::string>, int> derived_;

 public:
  void finish_stats() { tally(); }
};

class Unpacker {
 public:
  Unpacker(const ParseResult& r, const Grammar& g, std::size_t limit) : r_(r), g_(g), limit_(limit) {}

  const std::vector<std::pair<std::string, DerivationTree>>& of(int edge) {
    if (auto it = memo_.find(edge); it != memo_.end()) return it->second;
    std::vector<std::pair<std::string, DerivationTree>> out;
    const Edge& e = r_.chart[edge];
    if (e.kind == EdgeKind::lexical) {
      out.push_back({e.entry->id, {edge, -1, {}}});
    } else if (e.kind == EdgeKind::empty) {
      out.push_back({trace_label(e), {edge, -1, {}}});
    } else {
      for (const auto& d : e.derivations) {
        const auto& ls = of(d.left);
        const auto& rs = of(d.right);
        for (const auto& [lstr, ltree] : ls) {
          for (const auto& [rstr, rtree] : rs) {
            if (out.size() >= limit_) {
              truncated = true;
              break;
            }
            out.push_back({"(" + g_.schemata[d.schema].label + " " + lstr + " " + rstr + ")",
                           {edge, d.schema, {ltree, rtree}}});
          }
        }
      }
    }
    return memo_.emplace(edge, std::move(out)).first->second;
  }

  bool truncated = false;

 private:
  const ParseResult& r_;
  const Grammar& g_;
  std::size_t limit_;
  std::unordered_map<int, std::vector<std::pair<std::string, DerivationTree>>> memo_;
};

}  // namespace detail

/// Parses one turn. Unknown words and an exceeded edge cap raise ParseError;
/// an empty forest is a normal result.
inline ParseResult parse(const TurnRecord& turn, const Grammar& g, const ParseConfig& config = {}) {
  config.check();
  ParseResult out;
  const auto t0 = std::chrono::steady_clock::now();
  detail::ChartBuilder builder(turn, g, config, out);
  builder.run();
  out.stats.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  builder.finish_stats();

  detail::Unpacker unpack(out, g, config.max_readings);
  for (int root : out.roots)
    for (const auto& [str, tree] : unpack.of(root)) out.readings.push_back({str, root, tree});
  out.readings_truncated = unpack.truncated;
  std::sort(out.readings.begin(), out.readings.end(),
            [](const Reading& a, const Reading& b) { return a.derivation < b.derivation; });
  return out;
}

/// A derivation re-executed in one working store so node identity across the
/// whole tree can be inspected. `nodes` is a list of the categories of every
/// tree node in preorder, all in one graph; `labels[i]` names node i.
struct Replay {
  FeatureStructure nodes;
  std::vector<std::string> labels;
  std::vector<int> edges;

  FeatureStructure node(std::size_t i) const { return *nodes.at(Path().index(i)); }
  Path path(std::size_t i, const Path& inner) const {
    Path p;
    p.index(i);
    for (auto s : inner.steps()) p.append(s);
    return p;
  }
};

inline Replay replay(const ParseResult& r, const Grammar& g, const Reading& reading) {
  fs::Unifier u;
  std::vector<std::uint32_t> ids;
  Replay out;
  std::function<std::uint32_t(const DerivationTree&)> run = [&](const DerivationTree& t) -> std::uint32_t {
    const Edge& e = r.chart[t.edge];
    const std::size_t slot = ids.size();
    ids.push_back(0);
    out.edges.push_back(t.edge);
    if (t.schema < 0) {
      out.labels.push_back(e.kind == EdgeKind::empty ? trace_label(e) : e.entry->id);
      ids[slot] = u.import(e.category);
      return ids[slot];
    }
    const auto& s = g.schemata[t.schema];
    out.labels.push_back(s.label);
    auto root = u.import(s.rule);
    auto m = *u.follow(root, Path::parse("0"));
    ids[slot] = m;
    auto l = run(t.children[0]);
    auto rr = run(t.children[1]);
    if (!u.unify(*u.follow(root, Path::parse("1")), l) || !u.unify(*u.follow(root, Path::parse("2")), rr))
      throw ParseError("replay failed at " + s.label);
    return m;
  };
  run(reading.tree);
  auto nil = u.make_node(fs::NodeKind::empty_list);
  auto list = nil;
  for (auto it = ids.rbegin(); it != ids.rend(); ++it) list = u.make_cons(*it, list);
  auto extracted = u.extract(list);
  if (!extracted) throw ParseError("replay produced a cyclic structure");
  out.nodes = *extracted;
  return out;
}

struct PredArg {
  std::string relation;
  std::string role;
  std::string argument;
  auto operator<=>(const PredArg&) const = default;
};

inline std::string to_string(const std::vector<PredArg>& record) {
  std::string out;
  for (std::size_t i = 0; i < record.size();) {
    std::size_t j = i;
    std::string term = record[i].relation + "(";
    for (; j < record.size() && record[j].relation == record[i].relation; ++j)
      term += (j > i ? "," : "") + record[j].role + ":" + record[j].argument;
    out += (out.empty() ? "" : " ") + term + ")";
    i = j;
  }
  return out;
}

/// Predicate-argument tuples read off a SEM structure: one tuple per role
/// whose value carries a relation, sorted by relation, role, argument.
inline std::vector<PredArg> pred_arg_of(const FeatureStructure& sem) {
  std::vector<PredArg> out;
  std::set<std::uint32_t> seen;
  std::vector<FeatureStructure> stack{sem};
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    if (!seen.insert(s.root()).second) continue;
    auto rel = s.get("REL");
    if (!rel || !rel->is_atom()) continue;
    for (const auto& [name, value] : s.attributes()) {
      if (name == "REL") continue;
      auto arg_rel = value.get("REL");
      if (!arg_rel || !arg_rel->is_atom()) continue;
      std::string role = name;
      std::transform(role.begin(), role.end(), role.begin(), [](unsigned char c) { return std::tolower(c); });
      out.push_back({rel->atom_value(), role, arg_rel->atom_value()});
      stack.push_back(value);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<PredArg> extract_pred_arg(const ParseResult& r, std::size_t reading) {
  if (r.readings.empty()) throw ParseError("no reading");
  if (reading >= r.readings.size()) throw InvalidArgument("reading index " + std::to_string(reading) + " out of range");
  auto sem = r.chart[r.readings[reading].root_edge].category.at(grammar::geometry::sem());
  if (!sem) return {};
  return pred_arg_of(*sem);
}

inline fs::json to_json(const ParseStatistics& s) {
  return {{"lexical_edges", s.lexical_edges}, {"empty_edges", s.empty_edges},
          {"derived_edges", s.derived_edges}, {"packed_derivations", s.packed_derivations},
          {"proposed_sites", s.proposed_sites}, {"elapsed_ms", s.elapsed_ms}};
}

/// Report block for one parsed turn.
inline fs::json turn_report(const TurnRecord& turn, const ParseResult& r) {
  fs::json readings = fs::json::array();
  for (std::size_t i = 0; i < r.readings.size(); ++i)
    readings.push_back({{"derivation", r.readings[i].derivation}, {"pred_arg", to_string(extract_pred_arg(r, i))}});
  return {{"id", turn.id},
          {"readings", std::move(readings)},
          {"readings_truncated", r.readings_truncated},
          {"sites", r.sites},
          {"statistics", to_json(r.stats)}};
}

}  // namespace prosogate::parser
