#pragma once

// Acyclic attribute-value matrices with reentrancy.
//
// A FeatureStructure is an immutable view: a shared graph plus a root node.
// Sub-structures returned by at() are views into the same graph, so node
// identity (token identity of reentrant values) is observable with
// identical(). Lists are cons cells with FIRST/REST arcs ending in the
// empty list. An AVM without attributes is the unconstrained value.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "../error.hpp"
#include "symbol.hpp"

namespace prosogate::fs {

enum class NodeKind : std::uint8_t { avm, atom, list, empty_list };

class Path {
 public:
  Path() = default;
  Path(std::initializer_list<std::string_view> steps) {
    for (auto s : steps) append(s);
  }

  /// Dotted form, e.g. "LOC.SUBCAT.1.LOC"; numeric steps index into lists.
  static Path parse(std::string_view dotted) {
    Path p;
    std::size_t pos = 0;
    while (pos <= dotted.size() && !dotted.empty()) {
      auto dot = dotted.find('.', pos);
      auto step = dotted.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
      if (!step.empty()) p.append(step);
      if (dot == std::string_view::npos) break;
      pos = dot + 1;
    }
    return p;
  }

  Path& append(std::string_view step) {
    if (!step.empty() && std::all_of(step.begin(), step.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return index(static_cast<std::size_t>(std::stoul(std::string(step))));
    }
    steps_.push_back(intern(step));
    return *this;
  }
  Path& append(Symbol s) {
    steps_.push_back(s);
    return *this;
  }
  Path& index(std::size_t i) {
    for (std::size_t k = 0; k < i; ++k) steps_.push_back(rest_symbol());
    steps_.push_back(first_symbol());
    return *this;
  }
  Path operator/(std::string_view step) const {
    Path p = *this;
    p.append(step);
    return p;
  }
  Path operator/(const Path& tail) const {
    Path p = *this;
    p.steps_.insert(p.steps_.end(), tail.steps_.begin(), tail.steps_.end());
    return p;
  }

  const std::vector<Symbol>& steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }

  std::string str() const {
    std::string out;
    for (auto s : steps_) {
      if (!out.empty()) out += '.';
      out += symbol_name(s);
    }
    return out;
  }

  friend bool operator==(const Path&, const Path&) = default;

 private:
  std::vector<Symbol> steps_;
};

namespace detail {

struct Arc {
  Symbol feature;
  std::uint32_t target;
};

struct Node {
  NodeKind kind = NodeKind::avm;
  Symbol atom = 0;
  std::uint32_t arc_begin = 0;
  std::uint32_t arc_count = 0;
};

struct Graph {
  std::vector<Node> nodes;
  std::vector<Arc> arcs;  // per node, sorted by feature id
};

}  // namespace detail

class FeatureStructure;

/// Closed set of declared attribute names.
class Signature {
 public:
  Signature() = default;
  explicit Signature(const std::vector<std::string>& names) {
    for (const auto& n : names) declare(n);
  }
  void declare(std::string_view name) {
    auto s = intern(name);
    if (std::find(order_.begin(), order_.end(), s) == order_.end()) order_.push_back(s);
    declared_.insert(s);
  }
  bool declares(Symbol s) const { return declared_.count(s) > 0; }
  bool declares(std::string_view name) const { return declares(intern(name)); }
  const std::vector<Symbol>& features() const { return order_; }

  /// Throws GrammarError naming the first undeclared attribute of fs.
  inline void validate(const FeatureStructure& fs, std::string_view where = {}) const;

 private:
  std::unordered_set<Symbol> declared_;
  std::vector<Symbol> order_;
};

class Unifier;

class FeatureStructure {
 public:
  /// The unconstrained value (empty AVM).
  FeatureStructure() : graph_(top_graph()), root_(0) {}

  static FeatureStructure top() { return {}; }
  static inline FeatureStructure atom(std::string_view value);
  static inline FeatureStructure empty_list();
  /// Items share structure with one another when they are views of one graph.
  static inline FeatureStructure list(const std::vector<FeatureStructure>& items,
                                      const std::optional<FeatureStructure>& tail = std::nullopt);
  static inline FeatureStructure avm(const std::vector<std::pair<std::string, FeatureStructure>>& attrs);

  NodeKind kind() const { return node().kind; }
  bool is_top() const { return node().kind == NodeKind::avm && node().arc_count == 0; }
  bool is_atom() const { return node().kind == NodeKind::atom; }
  bool is_empty_list() const { return node().kind == NodeKind::empty_list; }
  bool is_list_cell() const { return node().kind == NodeKind::list; }

  /// Atom value; empty string when the node is not an atom.
  std::string atom_value() const { return is_atom() ? symbol_name(node().atom) : std::string(); }
  bool atom_is(std::string_view v) const { return is_atom() && symbol_name(node().atom) == v; }

  std::optional<FeatureStructure> get(Symbol feature) const {
    const auto& n = node();
    for (std::uint32_t i = 0; i < n.arc_count; ++i) {
      const auto& arc = graph_->arcs[n.arc_begin + i];
      if (arc.feature == feature) return FeatureStructure(graph_, arc.target);
    }
    return std::nullopt;
  }
  std::optional<FeatureStructure> get(std::string_view feature) const { return get(intern(feature)); }

  std::optional<FeatureStructure> at(const Path& path) const {
    FeatureStructure cur = *this;
    for (auto step : path.steps()) {
      auto next = cur.get(step);
      if (!next) return std::nullopt;
      cur = *next;
    }
    return cur;
  }
  std::optional<FeatureStructure> at(std::string_view dotted) const { return at(Path::parse(dotted)); }

  /// Attribute names (or FIRST/REST for list cells) in name order.
  std::vector<std::pair<std::string, FeatureStructure>> attributes() const {
    std::vector<std::pair<std::string, FeatureStructure>> out;
    const auto& n = node();
    for (std::uint32_t i = 0; i < n.arc_count; ++i) {
      const auto& arc = graph_->arcs[n.arc_begin + i];
      out.emplace_back(symbol_name(arc.feature), FeatureStructure(graph_, arc.target));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  /// Elements of a proper list; nullopt when the value is not a closed list.
  std::optional<std::vector<FeatureStructure>> list_elements() const {
    std::vector<FeatureStructure> out;
    FeatureStructure cur = *this;
    for (std::size_t guard = 0; guard <= graph_->nodes.size(); ++guard) {
      if (cur.is_empty_list()) return out;
      if (!cur.is_list_cell()) return std::nullopt;
      auto first = cur.get(first_symbol());
      auto rest = cur.get(rest_symbol());
      if (!first || !rest) return std::nullopt;
      out.push_back(*first);
      cur = *rest;
    }
    return std::nullopt;
  }

  /// Token identity: both views denote the same node of the same graph.
  bool identical(const FeatureStructure& other) const {
    return graph_ == other.graph_ && root_ == other.root_;
  }

  /// Shares the underlying graph with other (views of one structure).
  bool same_graph(const FeatureStructure& other) const { return graph_ == other.graph_; }

  /// Node identity between two paths of this structure.
  bool same_node(const Path& a, const Path& b) const {
    auto x = at(a);
    auto y = at(b);
    return x && y && x->identical(*y);
  }

  /// Number of nodes reachable from the root.
  std::size_t size() const {
    std::vector<std::uint32_t> order;
    reachable(order);
    return order.size();
  }

  /// Copy with the value at path (which must exist) replaced by value.
  inline FeatureStructure replace(const Path& path, const FeatureStructure& value) const;

  /// Canonical text form; equal for structures that are isomorphic
  /// including their reentrancies.
  inline std::string str() const;
  std::size_t hash() const { return std::hash<std::string>{}(str()); }

  friend bool operator==(const FeatureStructure& a, const FeatureStructure& b) {
    return a.identical(b) || a.str() == b.str();
  }

  FeatureStructure(std::shared_ptr<const detail::Graph> graph, std::uint32_t root)
      : graph_(std::move(graph)), root_(root) {}

  const detail::Graph& graph() const { return *graph_; }
  std::uint32_t root() const { return root_; }

 private:
  friend class Unifier;

  static std::shared_ptr<const detail::Graph> top_graph() {
    static const auto g = [] {
      auto graph = std::make_shared<detail::Graph>();
      graph->nodes.push_back(detail::Node{});
      return std::shared_ptr<const detail::Graph>(graph);
    }();
    return g;
  }

  const detail::Node& node() const { return graph_->nodes[root_]; }

  // Preorder over reachable nodes, arcs visited in name order.
  void reachable(std::vector<std::uint32_t>& order) const {
    std::vector<char> seen(graph_->nodes.size(), 0);
    std::vector<std::uint32_t> stack{root_};
    while (!stack.empty()) {
      auto n = stack.back();
      stack.pop_back();
      if (seen[n]) continue;
      seen[n] = 1;
      order.push_back(n);
      const auto& node = graph_->nodes[n];
      for (std::uint32_t i = node.arc_count; i-- > 0;) stack.push_back(graph_->arcs[node.arc_begin + i].target);
    }
  }

  std::shared_ptr<const detail::Graph> graph_;
  std::uint32_t root_;
};

// Working store for destructive unification over copies. Structures are
// imported (copied), unified with union-find, and extracted back into a
// fresh immutable graph. Inputs are never touched.
class Unifier {
 public:
  /// Node correspondence for imports that must preserve identity across
  /// several views of the same graph.
  struct Memo {
    std::unordered_map<const detail::Graph*, std::vector<std::uint32_t>> maps;
  };

  void clear() {
    nodes_.clear();
    arcs_.clear();
    parent_.clear();
  }

  std::uint32_t make_node(NodeKind kind, Symbol atom = 0) {
    nodes_.push_back({kind, atom, static_cast<std::uint32_t>(arcs_.size()), 0});
    parent_.push_back(static_cast<std::uint32_t>(nodes_.size() - 1));
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }
  std::uint32_t make_top() { return make_node(NodeKind::avm); }

  /// New AVM / list cell with the given arcs (targets are working indices).
  std::uint32_t make_complex(NodeKind kind, std::vector<detail::Arc> arcs) {
    std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) { return a.feature < b.feature; });
    auto n = make_node(kind);
    nodes_[n].arc_begin = static_cast<std::uint32_t>(arcs_.size());
    nodes_[n].arc_count = static_cast<std::uint32_t>(arcs.size());
    arcs_.insert(arcs_.end(), arcs.begin(), arcs.end());
    return n;
  }
  std::uint32_t make_cons(std::uint32_t first, std::uint32_t rest) {
    return make_complex(NodeKind::list, {{first_symbol(), first}, {rest_symbol(), rest}});
  }

  /// Copies the reachable part of fs. When memo is given, nodes already
  /// imported through the same memo are reused.
  std::uint32_t import(const FeatureStructure& fs, Memo* memo = nullptr) {
    const auto& g = *fs.graph_;
    std::vector<std::uint32_t>* map = &scratch_map_;
    if (memo) {
      map = &memo->maps[&g];
      if (map->size() < g.nodes.size()) map->resize(g.nodes.size(), kNone);
    } else {
      scratch_map_.assign(g.nodes.size(), kNone);
    }
    auto& m = *map;
    scratch_order_.clear();
    fs.reachable(scratch_order_);
    std::vector<std::uint32_t> fresh;
    for (auto n : scratch_order_) {
      if (m[n] != kNone) continue;
      const auto& src = g.nodes[n];
      m[n] = make_node(src.kind, src.atom);
      fresh.push_back(n);
    }
    for (auto n : fresh) {
      const auto& src = g.nodes[n];
      auto w = m[n];
      nodes_[w].arc_begin = static_cast<std::uint32_t>(arcs_.size());
      nodes_[w].arc_count = src.arc_count;
      for (std::uint32_t i = 0; i < src.arc_count; ++i) {
        const auto& arc = g.arcs[src.arc_begin + i];
        arcs_.push_back({arc.feature, m[arc.target]});
      }
    }
    return m[fs.root_];
  }

  /// Points the feature arc of node n at target.
  void redirect_arc(std::uint32_t n, Symbol feature, std::uint32_t target) {
    n = find(n);
    const auto& node = nodes_[n];
    for (std::uint32_t i = 0; i < node.arc_count; ++i) {
      if (arcs_[node.arc_begin + i].feature == feature) {
        arcs_[node.arc_begin + i].target = target;
        return;
      }
    }
    throw InvalidArgument("redirect_arc: no arc " + symbol_name(feature));
  }

  std::uint32_t find(std::uint32_t n) {
    while (parent_[n] != n) {
      parent_[n] = parent_[parent_[n]];
      n = parent_[n];
    }
    return n;
  }

  /// Follows a path through the current (partially unified) store.
  std::optional<std::uint32_t> follow(std::uint32_t n, const Path& path) {
    n = find(n);
    for (auto step : path.steps()) {
      const auto& node = nodes_[n];
      bool found = false;
      for (std::uint32_t i = 0; i < node.arc_count; ++i) {
        const auto& arc = arcs_[node.arc_begin + i];
        if (arc.feature == step) {
          n = find(arc.target);
          found = true;
          break;
        }
      }
      if (!found) return std::nullopt;
    }
    return n;
  }

  /// Unifies two working nodes. On failure the store is inconsistent and
  /// must be cleared before reuse.
  bool unify(std::uint32_t a, std::uint32_t b) {
    pending_.clear();
    pending_.emplace_back(a, b);
    while (!pending_.empty()) {
      auto [x0, y0] = pending_.back();
      pending_.pop_back();
      auto x = find(x0);
      auto y = find(y0);
      if (x == y) continue;
      auto& nx = nodes_[x];
      auto& ny = nodes_[y];
      const bool top_x = nx.kind == NodeKind::avm && nx.arc_count == 0;
      const bool top_y = ny.kind == NodeKind::avm && ny.arc_count == 0;
      if (top_x) {
        parent_[x] = y;
        continue;
      }
      if (top_y) {
        parent_[y] = x;
        continue;
      }
      if (nx.kind != ny.kind) return false;
      switch (nx.kind) {
        case NodeKind::atom:
          if (nx.atom != ny.atom) return false;
          parent_[y] = x;
          break;
        case NodeKind::empty_list:
          parent_[y] = x;
          break;
        case NodeKind::avm:
        case NodeKind::list:
          merge_arcs(x, y);
          parent_[y] = x;
          break;
      }
    }
    return true;
  }

  /// Builds an immutable structure rooted at n; nullopt if a cycle arose.
  std::optional<FeatureStructure> extract(std::uint32_t n) {
    n = find(n);
    auto graph = std::make_shared<detail::Graph>();
    // iterative DFS; grey marks nodes on the current path (cycle check)
    constexpr char white = 0, grey = 1, black = 2;
    colour_.assign(nodes_.size(), white);
    index_.resize(nodes_.size());
    struct Frame {
      std::uint32_t node;
      std::uint32_t next_arc;
    };
    std::vector<Frame> stack;
    std::vector<std::uint32_t> visited;
    auto enter = [&](std::uint32_t w) {
      colour_[w] = grey;
      index_[w] = static_cast<std::uint32_t>(graph->nodes.size());
      visited.push_back(w);
      graph->nodes.push_back({nodes_[w].kind, nodes_[w].atom, 0, 0});
      stack.push_back({w, 0});
    };
    enter(n);
    while (!stack.empty()) {
      auto& f = stack.back();
      const auto& wn = nodes_[f.node];
      if (f.next_arc < wn.arc_count) {
        auto child = find(arcs_[wn.arc_begin + f.next_arc].target);
        ++f.next_arc;
        if (colour_[child] == white) {
          enter(child);
        } else if (colour_[child] == grey) {
          return std::nullopt;
        }
        continue;
      }
      colour_[f.node] = black;
      stack.pop_back();
    }
    for (auto w : visited) {
      const auto& wn = nodes_[w];
      auto& out = graph->nodes[index_[w]];
      out.arc_begin = static_cast<std::uint32_t>(graph->arcs.size());
      out.arc_count = wn.arc_count;
      for (std::uint32_t k = 0; k < wn.arc_count; ++k) {
        const auto& arc = arcs_[wn.arc_begin + k];
        graph->arcs.push_back({arc.feature, index_[find(arc.target)]});
      }
    }
    return FeatureStructure(std::shared_ptr<const detail::Graph>(std::move(graph)), 0);
  }

  std::size_t node_count() const { return nodes_.size(); }

 private:
  void merge_arcs(std::uint32_t x, std::uint32_t y) {
    const auto bx = nodes_[x].arc_begin, cx = nodes_[x].arc_count;
    const auto by = nodes_[y].arc_begin, cy = nodes_[y].arc_count;
    if (cy == 0) return;
    const auto begin = static_cast<std::uint32_t>(arcs_.size());
    std::uint32_t i = 0, j = 0;
    // arcs_ may reallocate while appending, so index rather than hold refs
    while (i < cx || j < cy) {
      if (j == cy || (i < cx && arcs_[bx + i].feature < arcs_[by + j].feature)) {
        arcs_.push_back(arcs_[bx + i]);
        ++i;
      } else if (i == cx || arcs_[by + j].feature < arcs_[bx + i].feature) {
        arcs_.push_back(arcs_[by + j]);
        ++j;
      } else {
        auto ax = arcs_[bx + i];
        auto ay = arcs_[by + j];
        arcs_.push_back(ax);
        pending_.emplace_back(ax.target, ay.target);
        ++i;
        ++j;
      }
    }
    nodes_[x].arc_begin = begin;
    nodes_[x].arc_count = static_cast<std::uint32_t>(arcs_.size() - begin);
  }

  std::vector<detail::Node> nodes_;
  std::vector<detail::Arc> arcs_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pending_;
  static constexpr std::uint32_t kNone = ~std::uint32_t{0};
  std::vector<std::uint32_t> scratch_map_;
  std::vector<std::uint32_t> scratch_order_;
  std::vector<char> colour_;
  std::vector<std::uint32_t> index_;
};

/// Most general structure subsumed by both inputs, or nullopt on a clash
/// (atom mismatch, list length mismatch, kind mismatch, cycle).
inline std::optional<FeatureStructure> unify(const FeatureStructure& a, const FeatureStructure& b) {
  Unifier u;
  auto x = u.import(a);
  auto y = u.import(b);
  if (!u.unify(x, y)) return std::nullopt;
  return u.extract(x);
}

/// Unification over a closed attribute set: undeclared attributes in either
/// input raise GrammarError rather than returning a failure.
inline std::optional<FeatureStructure> unify(const Signature& sig, const FeatureStructure& a,
                                             const FeatureStructure& b) {
  sig.validate(a, "left operand");
  sig.validate(b, "right operand");
  return unify(a, b);
}

inline bool unifiable(const FeatureStructure& a, const FeatureStructure& b) { return unify(a, b).has_value(); }

// ---------------------------------------------------------------------------

inline FeatureStructure FeatureStructure::atom(std::string_view value) {
  auto g = std::make_shared<detail::Graph>();
  g->nodes.push_back({NodeKind::atom, intern(value), 0, 0});
  return {std::move(g), 0};
}

inline FeatureStructure FeatureStructure::empty_list() {
  auto g = std::make_shared<detail::Graph>();
  g->nodes.push_back({NodeKind::empty_list, 0, 0, 0});
  return {std::move(g), 0};
}

inline FeatureStructure FeatureStructure::list(const std::vector<FeatureStructure>& items,
                                               const std::optional<FeatureStructure>& tail) {
  Unifier u;
  Unifier::Memo memo;
  std::vector<std::uint32_t> heads;
  for (const auto& item : items) heads.push_back(u.import(item, &memo));
  std::uint32_t cur = tail ? u.import(*tail, &memo) : u.make_node(NodeKind::empty_list);
  for (auto it = heads.rbegin(); it != heads.rend(); ++it) cur = u.make_cons(*it, cur);
  auto out = u.extract(cur);
  if (!out) throw InvalidArgument("list construction produced a cycle");
  return *out;
}

inline FeatureStructure FeatureStructure::avm(const std::vector<std::pair<std::string, FeatureStructure>>& attrs) {
  Unifier u;
  Unifier::Memo memo;
  std::vector<detail::Arc> arcs;
  for (const auto& [name, value] : attrs) {
    auto sym = intern(name);
    for (const auto& a : arcs)
      if (a.feature == sym) throw InvalidArgument("duplicate attribute " + name);
    arcs.push_back({sym, u.import(value, &memo)});
  }
  auto root = u.make_complex(NodeKind::avm, std::move(arcs));
  auto out = u.extract(root);
  if (!out) throw InvalidArgument("avm construction produced a cycle");
  return *out;
}

inline FeatureStructure FeatureStructure::replace(const Path& path, const FeatureStructure& value) const {
  if (path.empty()) return value;
  if (!at(path)) throw InvalidArgument("replace: path " + path.str() + " does not exist");
  Unifier u;
  auto root = u.import(*this);
  auto v = u.import(value);
  // walk to the parent and redirect the final arc
  Path parent;
  for (std::size_t i = 0; i + 1 < path.steps().size(); ++i) parent.append(path.steps()[i]);
  auto p = u.follow(root, parent);
  u.redirect_arc(*p, path.steps().back(), v);
  auto out = u.extract(root);
  if (!out) throw InvalidArgument("replace produced a cycle");
  return *out;
}

inline std::string FeatureStructure::str() const {
  // in-degree over reachable nodes decides which nodes carry a tag
  std::vector<std::uint32_t> order;
  reachable(order);
  std::unordered_map<std::uint32_t, int> indegree;
  for (auto n : order) {
    const auto& node = graph_->nodes[n];
    for (std::uint32_t i = 0; i < node.arc_count; ++i) ++indegree[graph_->arcs[node.arc_begin + i].target];
  }
  std::unordered_map<std::uint32_t, int> tags;
  std::string out;
  std::function<void(std::uint32_t)> emit = [&](std::uint32_t n) {
    if (indegree[n] > 1) {
      if (auto it = tags.find(n); it != tags.end()) {
        out += '#' + std::to_string(it->second);
        return;
      }
      int t = static_cast<int>(tags.size()) + 1;
      tags[n] = t;
      out += '#' + std::to_string(t) + '=';
    }
    FeatureStructure view(graph_, n);
    switch (view.kind()) {
      case NodeKind::atom:
        out += symbol_name(view.node().atom);
        return;
      case NodeKind::empty_list:
        out += "<>";
        return;
      case NodeKind::list: {
        out += '<';
        FeatureStructure cur = view;
        bool first = true;
        while (true) {
          if (!first) out += ',';
          first = false;
          emit(cur.get(first_symbol())->root_);
          auto rest = *cur.get(rest_symbol());
          if (rest.is_empty_list() && indegree[rest.root_] <= 1) break;
          if (rest.is_list_cell() && indegree[rest.root_] <= 1) {
            cur = rest;
            continue;
          }
          out += '|';
          emit(rest.root_);
          break;
        }
        out += '>';
        return;
      }
      case NodeKind::avm: {
        out += '[';
        bool first = true;
        for (const auto& [name, child] : view.attributes()) {
          if (!first) out += ',';
          first = false;
          out += name;
          out += ':';
          emit(child.root_);
        }
        out += ']';
        return;
      }
    }
  };
  emit(root_);
  return out;
}

inline void Signature::validate(const FeatureStructure& fs, std::string_view where) const {
  std::vector<std::pair<FeatureStructure, int>> stack{{fs, 0}};
  std::unordered_set<std::uint32_t> seen;
  while (!stack.empty()) {
    auto [cur, depth] = stack.back();
    stack.pop_back();
    if (!seen.insert(cur.root()).second) continue;
    for (const auto& [name, child] : cur.attributes()) {
      if (!cur.is_list_cell() && !declares(name)) {
        std::string msg = "undeclared feature " + name;
        if (!where.empty()) msg += " in " + std::string(where);
        throw GrammarError(msg);
      }
      stack.emplace_back(child, depth + 1);
    }
  }
}

}  // namespace prosogate::fs
