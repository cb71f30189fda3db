#pragma once

// JSON notation for feature structures.
//
//   {"HEAD": {"POS": "verb"}}      AVM; keys are declared feature names
//   "verb"                         atom (true/false read as "+"/"-")
//   ["a", "b"]                     list; [] is the empty list
//   ["a", "|", "#2"]               list with an explicit tail
//   "#1"                           reentrancy tag (unconstrained if never given content)
//   {"#1": {...}}                  tag carrying content
//   {}                             unconstrained value

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "feature_structure.hpp"

namespace prosogate::fs {

using json = nlohmann::json;

/// Builds JSON AVM notation into a Unifier store. Tags are shared across
/// every value read through the same reader.
class JsonReader {
 public:
  JsonReader(Unifier& store, const Signature* signature, std::string where)
      : store_(store), signature_(signature), where_(std::move(where)) {}

  std::uint32_t read(const json& v) {
    if (v.is_null()) return store_.make_top();
    if (v.is_boolean()) return store_.make_node(NodeKind::atom, intern(v.get<bool>() ? "+" : "-"));
    if (v.is_number()) return store_.make_node(NodeKind::atom, intern(v.dump()));
    if (v.is_string()) {
      const auto& s = v.get_ref<const std::string&>();
      if (is_tag(s)) return tag_node(s);
      if (s == "|") fail("list tail marker '|' outside a list");
      return store_.make_node(NodeKind::atom, intern(s));
    }
    if (v.is_array()) return read_list(v);
    return read_object(v);
  }

  const std::map<std::string, std::uint32_t>& tags() const { return tags_; }

  /// Extracts the structure rooted at n; cyclic results are load errors.
  FeatureStructure finish(std::uint32_t n) {
    auto out = store_.extract(n);
    if (!out) fail("cyclic AVM");
    return *out;
  }

 private:
  static bool is_tag(const std::string& s) { return s.size() > 1 && s[0] == '#'; }

  [[noreturn]] void fail(const std::string& what) const {
    throw GrammarError(where_.empty() ? what : what + " (" + where_ + ")");
  }

  std::uint32_t tag_node(const std::string& tag) {
    if (auto it = tags_.find(tag); it != tags_.end()) return it->second;
    auto n = store_.make_top();
    tags_.emplace(tag, n);
    return n;
  }

  std::uint32_t read_list(const json& v) {
    std::vector<std::uint32_t> items;
    std::optional<std::uint32_t> tail;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_string() && v[i].get_ref<const std::string&>() == "|") {
        if (i + 2 != v.size() || i == 0) fail("'|' must precede the last element of a non-empty list");
        tail = read(v[i + 1]);
        break;
      }
      items.push_back(read(v[i]));
    }
    std::uint32_t cur = tail ? *tail : store_.make_node(NodeKind::empty_list);
    for (auto it = items.rbegin(); it != items.rend(); ++it) cur = store_.make_cons(*it, cur);
    return cur;
  }

  std::uint32_t read_object(const json& v) {
    if (v.size() == 1 && is_tag(v.begin().key())) {
      const auto tag = v.begin().key();
      auto content = read(v.begin().value());
      auto it = tags_.find(tag);
      if (it == tags_.end()) {
        tags_.emplace(tag, content);
        return content;
      }
      if (!store_.unify(it->second, content)) fail("inconsistent values for tag " + tag);
      return it->second;
    }
    std::vector<detail::Arc> arcs;
    for (auto it = v.begin(); it != v.end(); ++it) {
      const auto& key = it.key();
      if (!key.empty() && key[0] == '#') fail("tag key " + key + " must be the only key of its object");
      auto sym = intern(key);
      if (signature_ && !signature_->declares(sym)) fail("undeclared feature " + key);
      arcs.push_back({sym, read(it.value())});
    }
    return store_.make_complex(NodeKind::avm, std::move(arcs));
  }

  Unifier& store_;
  const Signature* signature_;
  std::string where_;
  std::map<std::string, std::uint32_t> tags_;
};

/// Parses one AVM. Undeclared features (when a signature is given),
/// inconsistent tags and cycles raise GrammarError.
inline FeatureStructure parse_avm(const json& v, const Signature* signature = nullptr, std::string where = {}) {
  Unifier store;
  JsonReader reader(store, signature, std::move(where));
  return reader.finish(reader.read(v));
}

inline FeatureStructure parse_avm_text(std::string_view text, const Signature* signature = nullptr) {
  return parse_avm(json::parse(text), signature);
}

/// Inverse of parse_avm: shared nodes get "#n" tags in preorder.
inline json to_json(const FeatureStructure& fs) {
  const auto& g = fs.graph();
  std::unordered_map<std::uint32_t, int> indegree;
  {
    std::vector<std::uint32_t> stack{fs.root()};
    std::vector<char> seen(g.nodes.size(), 0);
    while (!stack.empty()) {
      auto n = stack.back();
      stack.pop_back();
      if (seen[n]) continue;
      seen[n] = 1;
      const auto& node = g.nodes[n];
      for (std::uint32_t i = 0; i < node.arc_count; ++i) {
        auto t = g.arcs[node.arc_begin + i].target;
        ++indegree[t];
        stack.push_back(t);
      }
    }
  }
  std::unordered_map<std::uint32_t, int> tags;
  std::function<json(const FeatureStructure&)> emit = [&](const FeatureStructure& v) -> json {
    const auto n = v.root();
    std::string tag;
    if (indegree[n] > 1) {
      if (auto it = tags.find(n); it != tags.end()) return "#" + std::to_string(it->second);
      int t = static_cast<int>(tags.size()) + 1;
      tags[n] = t;
      tag = "#" + std::to_string(t);
    }
    json body;
    switch (v.kind()) {
      case NodeKind::atom:
        body = v.atom_value();
        break;
      case NodeKind::empty_list:
        body = json::array();
        break;
      case NodeKind::list: {
        body = json::array();
        FeatureStructure cur = v;
        while (true) {
          body.push_back(emit(*cur.get(first_symbol())));
          auto rest = *cur.get(rest_symbol());
          if (indegree[rest.root()] <= 1 && rest.is_empty_list()) break;
          if (indegree[rest.root()] <= 1 && rest.is_list_cell()) {
            cur = rest;
            continue;
          }
          body.push_back("|");
          body.push_back(emit(rest));
          break;
        }
        break;
      }
      case NodeKind::avm:
        body = json::object();
        for (const auto& [name, child] : v.attributes()) body[name] = emit(child);
        break;
    }
    if (tag.empty()) return body;
    if (v.is_top()) return tag;
    return json{{tag, body}};
  };
  return emit(fs);
}

}  // namespace prosogate::fs
