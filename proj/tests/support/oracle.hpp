#pragma once

// Exhaustive reading enumerator used as a reference for the chart parser.
// It shares nothing with the chart code except the grammar and the public
// unify(): every lexical choice, every trace placement and every binary
// bracketing of the resulting leaf sequence is tried.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <prosogate/fs/feature_structure.hpp>
#include <prosogate/grammar/grammar.hpp>

namespace prosogate::testing {

struct OracleLeaf {
  std::string label;
  fs::FeatureStructure category;
  bool empty = false;
};

class BracketingOracle {
 public:
  BracketingOracle(const grammar::Grammar& g, std::vector<std::string> words, std::vector<int> sites)
      : g_(g), words_(std::move(words)), sites_(std::move(sites)) {}

  std::set<std::string> readings() {
    std::set<std::string> out;
    std::vector<const grammar::LexEntry*> choice(words_.size());
    choose(0, choice, out);
    return out;
  }

 private:
  using Cell = std::map<std::string, std::pair<fs::FeatureStructure, std::set<std::string>>>;

  void choose(std::size_t i, std::vector<const grammar::LexEntry*>& choice, std::set<std::string>& out) {
    if (i == words_.size()) {
      place_traces(choice, out);
      return;
    }
    for (const auto* e : g_.lookup(words_[i])) {
      choice[i] = e;
      choose(i + 1, choice, out);
    }
  }

  // every V2 word contributes no trace or one trace at an allowed gap >= its position
  void place_traces(const std::vector<const grammar::LexEntry*>& choice, std::set<std::string>& out) {
    std::vector<std::size_t> v2;
    for (std::size_t i = 0; i < choice.size(); ++i)
      if (choice[i]->trace_template) v2.push_back(i);
    std::vector<int> gap_of(v2.size(), 0);
    place(0, v2, gap_of, choice, out);
  }

  void place(std::size_t k, const std::vector<std::size_t>& v2, std::vector<int>& gap_of,
             const std::vector<const grammar::LexEntry*>& choice, std::set<std::string>& out) {
    if (k == v2.size()) {
      build_sequences(v2, gap_of, choice, out);
      return;
    }
    gap_of[k] = 0;
    place(k + 1, v2, gap_of, choice, out);
    for (int g : sites_) {
      if (g < static_cast<int>(v2[k]) + 1) continue;
      gap_of[k] = g;
      place(k + 1, v2, gap_of, choice, out);
    }
  }

  void build_sequences(const std::vector<std::size_t>& v2, const std::vector<int>& gap_of,
                       const std::vector<const grammar::LexEntry*>& choice, std::set<std::string>& out) {
    // traces sharing a gap may appear in any order
    std::map<int, std::vector<std::size_t>> at_gap;
    for (std::size_t k = 0; k < v2.size(); ++k)
      if (gap_of[k] > 0) at_gap[gap_of[k]].push_back(k);
    std::vector<std::vector<std::vector<std::size_t>>> orders;  // per gap, all permutations
    std::vector<int> gaps;
    for (auto& [g, ks] : at_gap) {
      gaps.push_back(g);
      std::vector<std::vector<std::size_t>> perms;
      std::sort(ks.begin(), ks.end());
      do perms.push_back(ks);
      while (std::next_permutation(ks.begin(), ks.end()));
      orders.push_back(std::move(perms));
    }
    std::vector<std::size_t> pick(orders.size(), 0);
    while (true) {
      std::vector<OracleLeaf> leaves;
      for (std::size_t i = 0; i < choice.size(); ++i) {
        leaves.push_back({choice[i]->id, choice[i]->category, false});
        int gap = static_cast<int>(i) + 1;
        auto it = std::find(gaps.begin(), gaps.end(), gap);
        if (it == gaps.end()) continue;
        const auto& order = orders[it - gaps.begin()][pick[it - gaps.begin()]];
        for (auto k : order) {
          const auto* e = choice[v2[k]];
          leaves.push_back({"t<" + e->source_id + ">@" + std::to_string(gap), *e->trace_template, true});
        }
      }
      bracket(leaves, out);
      std::size_t d = 0;
      while (d < pick.size() && ++pick[d] == orders[d].size()) pick[d++] = 0;
      if (d == pick.size()) break;
    }
  }

  static bool root_ok(const fs::FeatureStructure& c) {
    auto sc = c.at("LOC.SUBCAT");
    auto dsl = c.at("NONLOC.DSL");
    return sc && sc->kind() == fs::NodeKind::empty_list && dsl && dsl->kind() == fs::NodeKind::empty_list;
  }

  void bracket(const std::vector<OracleLeaf>& leaves, std::set<std::string>& out) {
    const std::size_t n = leaves.size();
    // cells[i][j]: analyses of leaves[i..j)
    std::vector<std::vector<Cell>> cells(n + 1, std::vector<Cell>(n + 1));
    std::vector<std::vector<bool>> has_word(n + 1, std::vector<bool>(n + 1, false));
    for (std::size_t i = 0; i < n; ++i) {
      cells[i][i + 1][leaves[i].category.str()] = {leaves[i].category, {leaves[i].label}};
      for (std::size_t j = i + 1; j <= n; ++j) has_word[i][j] = has_word[i][j - 1] || !leaves[j - 1].empty;
    }
    for (std::size_t len = 2; len <= n; ++len) {
      for (std::size_t i = 0; i + len <= n; ++i) {
        const std::size_t j = i + len;
        for (std::size_t k = i + 1; k < j; ++k) {
          if (!has_word[i][k]) continue;                      // left daughter must contain a word
          if (!has_word[k][j] && j - k > 1) continue;         // bare empty material only as one leaf
          for (const auto& [lk, lv] : cells[i][k]) {
            for (const auto& [rk, rv] : cells[k][j]) {
              for (const auto& s : g_.schemata) {
                auto pattern = fs::FeatureStructure::list({fs::FeatureStructure::top(), lv.first, rv.first});
                auto u = fs::unify(s.rule, pattern);
                if (!u) continue;
                auto mother = *u->at("0");
                // re-root the mother into a graph of its own so canonical forms compare
                auto standalone = *fs::unify(fs::FeatureStructure::top(), mother);
                auto& slot = cells[i][j][standalone.str()];
                slot.first = standalone;
                for (const auto& ls : lv.second)
                  for (const auto& rs : rv.second) slot.second.insert("(" + s.label + " " + ls + " " + rs + ")");
              }
            }
          }
        }
      }
    }
    for (const auto& [key, v] : cells[0][n])
      if (root_ok(v.first)) out.insert(v.second.begin(), v.second.end());
  }

  const grammar::Grammar& g_;
  std::vector<std::string> words_;
  std::vector<int> sites_;
};

}  // namespace prosogate::testing
