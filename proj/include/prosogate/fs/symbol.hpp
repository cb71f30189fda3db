#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace prosogate::fs {

using Symbol = std::uint32_t;

// Process-wide interning of feature names and atom values. Ids are only
// meaningful inside one process; anything printed is sorted by name.
class SymbolTable {
 public:
  static SymbolTable& global() {
    static SymbolTable table;
    return table;
  }

  Symbol intern(std::string_view name) {
    {
      std::shared_lock lock(mu_);
      if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto [it, inserted] = ids_.try_emplace(std::string(name), static_cast<Symbol>(names_.size()));
    if (inserted) names_.emplace_back(name);
    return it->second;
  }

  const std::string& name(Symbol s) const {
    std::shared_lock lock(mu_);
    return names_.at(s);
  }

 private:
  SymbolTable() = default;

  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, Symbol> ids_;
  std::deque<std::string> names_;
};

inline Symbol intern(std::string_view name) { return SymbolTable::global().intern(name); }
inline const std::string& symbol_name(Symbol s) { return SymbolTable::global().name(s); }

// Arc labels of list cells. Reserved: never declared by a grammar.
inline Symbol first_symbol() {
  static const Symbol s = intern("FIRST");
  return s;
}
inline Symbol rest_symbol() {
  static const Symbol s = intern("REST");
  return s;
}

}  // namespace prosogate::fs
