#pragma once

// Row-normalized label cross-tabulation.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "../error.hpp"
#include "metrics.hpp"

namespace prosogate::eval {

using LabelSeq = std::vector<std::string>;

struct CrossTab {
  std::vector<std::string> rows;  // values of the reference labels
  std::vector<std::string> cols;  // values of the compared labels
  std::map<std::string, std::map<std::string, std::size_t>> counts;

  std::size_t row_total(const std::string& r) const {
    std::size_t n = 0;
    auto it = counts.find(r);
    if (it != counts.end())
      for (const auto& [c, k] : it->second) n += k;
    return n;
  }
  std::size_t count(const std::string& r, const std::string& c) const {
    auto it = counts.find(r);
    if (it == counts.end()) return 0;
    auto jt = it->second.find(c);
    return jt == it->second.end() ? 0 : jt->second;
  }
  /// Unrounded row percentage; 0 for an empty row.
  double share(const std::string& r, const std::string& c) const {
    const auto n = row_total(r);
    return n ? 100.0 * static_cast<double>(count(r, c)) / static_cast<double>(n) : 0.0;
  }
  double percent(const std::string& r, const std::string& c, int decimals = 1) const {
    return round_half_up(share(r, c), decimals);
  }
};

namespace detail {

inline void order_labels(std::vector<std::string>& v) {
  static const std::vector<std::string> preferred{"S3+", "S3-", "S3?", "B3", "not-B3"};
  auto rank = [&](const std::string& s) {
    auto it = std::find(preferred.begin(), preferred.end(), s);
    return it == preferred.end() ? preferred.size() : static_cast<std::size_t>(it - preferred.begin());
  };
  std::sort(v.begin(), v.end(), [&](const std::string& a, const std::string& b) {
    return rank(a) != rank(b) ? rank(a) < rank(b) : a < b;
  });
}

}  // namespace detail

/// One reference and one compared label sequence per turn; with the flag set
/// each turn's last position is dropped.
inline CrossTab crosstab(const std::vector<LabelSeq>& a, const std::vector<LabelSeq>& b, bool exclude_turn_final) {
  if (a.size() != b.size())
    throw InvalidArgument("crosstab: " + std::to_string(a.size()) + " reference turns vs " +
                          std::to_string(b.size()) + " compared turns");
  CrossTab t;
  std::set<std::string> rows, cols;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].size() != b[k].size())
      throw InvalidArgument("crosstab: label sequences of turn " + std::to_string(k) + " differ in length (" +
                            std::to_string(a[k].size()) + " vs " + std::to_string(b[k].size()) + ")");
    const std::size_t n = a[k].size() - (exclude_turn_final && !a[k].empty() ? 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
      rows.insert(a[k][i]);
      cols.insert(b[k][i]);
      t.counts[a[k][i]][b[k][i]]++;
    }
  }
  t.rows.assign(rows.begin(), rows.end());
  t.cols.assign(cols.begin(), cols.end());
  detail::order_labels(t.rows);
  detail::order_labels(t.cols);
  return t;
}

/// Single flat sequence pair, treated as one turn.
inline CrossTab crosstab(const LabelSeq& a, const LabelSeq& b, bool exclude_turn_final = false) {
  return crosstab(std::vector<LabelSeq>{a}, std::vector<LabelSeq>{b}, exclude_turn_final);
}

inline json to_json(const CrossTab& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json pct = json::object(), cnt = json::object();
    for (const auto& c : t.cols) {
      pct[c] = t.percent(r, c);
      cnt[c] = t.count(r, c);
    }
    rows.push_back({{"label", r}, {"cases", t.row_total(r)}, {"percent", pct}, {"counts", cnt}});
  }
  return {{"columns", t.cols}, {"rows", rows}};
}

}  // namespace prosogate::eval
