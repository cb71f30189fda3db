#pragma once

// Turn records and JSON Lines corpora.
//
// Gaps are 1-based: gap i is the position after word i, so a turn of n words
// has gaps 1..n and gap n is turn-final. gap_scores[i-1] and s3_labels[i-1]
// belong to gap i.
//
// An optional first line {"corpus": {...}} carries provenance metadata.

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../error.hpp"
#include "../prosody/syllable.hpp"

namespace prosogate::corpus {

using json = nlohmann::json;

struct Syllable {
  int word = 0;  // 0-based index into TurnRecord::words
  prosody::SyllableRecord features;
  bool operator==(const Syllable&) const = default;
};

struct TurnRecord {
  std::string id;
  std::vector<std::string> words;
  std::optional<std::vector<double>> gap_scores;
  std::optional<std::vector<int>> gold_traces;
  std::optional<std::vector<std::string>> s3_labels;
  std::optional<std::vector<Syllable>> syllables;

  std::size_t gap_count() const { return words.size(); }
  bool operator==(const TurnRecord&) const = default;
};

struct Corpus {
  std::vector<TurnRecord> turns;
  json provenance = json::object();

  bool operator==(const Corpus&) const = default;
};

/// Scores are stored with at most six fractional digits.
inline double round_score(double x) { return std::round(x * 1e6) / 1e6; }

inline bool valid_s3(const std::string& s) { return s == "S3+" || s == "S3-" || s == "S3?"; }

inline void validate(const TurnRecord& t) {
  auto fail = [&](const std::string& field, const std::string& what) {
    throw InputFormatError("turn " + t.id + ": field " + field + ": " + what);
  };
  if (t.id.empty()) throw InputFormatError("turn with empty id");
  const auto n = t.words.size();
  for (const auto& w : t.words)
    if (w.empty()) fail("words", "empty word");
  if (t.gap_scores) {
    if (t.gap_scores->size() != n)
      fail("gap_scores", "has " + std::to_string(t.gap_scores->size()) + " entries for " + std::to_string(n) + " words");
    for (double s : *t.gap_scores)
      if (!(s >= 0 && s <= 1)) fail("gap_scores", "score outside [0,1]");
  }
  if (t.gold_traces) {
    std::set<int> seen;
    for (int g : *t.gold_traces) {
      if (g < 1 || static_cast<std::size_t>(g) > n) fail("gold_traces", "gap " + std::to_string(g) + " outside 1.." + std::to_string(n));
      if (!seen.insert(g).second) fail("gold_traces", "duplicate gap " + std::to_string(g));
    }
  }
  if (t.s3_labels) {
    if (t.s3_labels->size() != n) fail("s3_labels", "length differs from word count");
    for (const auto& l : *t.s3_labels)
      if (!valid_s3(l)) fail("s3_labels", "unknown label " + l);
  }
  if (t.syllables) {
    for (const auto& s : *t.syllables)
      if (s.word < 0 || static_cast<std::size_t>(s.word) >= n)
        fail("syllables", "word index " + std::to_string(s.word) + " out of range");
  }
}

inline json to_json(const TurnRecord& t) {
  json j;
  j["id"] = t.id;
  j["words"] = t.words;
  if (t.gap_scores) {
    json arr = json::array();
    for (double s : *t.gap_scores) arr.push_back(round_score(s));
    j["gap_scores"] = std::move(arr);
  }
  if (t.gold_traces) j["gold_traces"] = *t.gold_traces;
  if (t.s3_labels) j["s3_labels"] = *t.s3_labels;
  if (t.syllables) {
    json arr = json::array();
    for (const auto& s : *t.syllables) arr.push_back({{"word", s.word}, {"features", prosody::to_json(s.features)}});
    j["syllables"] = std::move(arr);
  }
  return j;
}

inline TurnRecord turn_from_json(const json& j, const std::string& where) {
  auto fail = [&](const std::string& what) { throw InputFormatError(where + ": " + what); };
  if (!j.is_object()) fail("turn record must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const std::set<std::string> known{"id", "words", "gap_scores", "gold_traces", "s3_labels", "syllables"};
    if (!known.count(it.key())) fail("unknown field " + it.key());
  }
  TurnRecord t;
  if (!j.contains("id") || !j["id"].is_string()) fail("missing string field id");
  t.id = j["id"].get<std::string>();
  auto field_fail = [&](const std::string& field, const std::string& what) {
    throw InputFormatError(where + ": turn " + t.id + ": field " + field + ": " + what);
  };
  if (!j.contains("words") || !j["words"].is_array()) field_fail("words", "missing word array");
  for (const auto& w : j["words"]) {
    if (!w.is_string()) field_fail("words", "non-string word");
    t.words.push_back(w.get<std::string>());
  }
  if (j.contains("gap_scores") && !j["gap_scores"].is_null()) {
    if (!j["gap_scores"].is_array()) field_fail("gap_scores", "must be an array");
    t.gap_scores.emplace();
    for (const auto& s : j["gap_scores"]) {
      if (!s.is_number()) field_fail("gap_scores", "non-numeric score");
      t.gap_scores->push_back(s.get<double>());
    }
  }
  if (j.contains("gold_traces") && !j["gold_traces"].is_null()) {
    if (!j["gold_traces"].is_array()) field_fail("gold_traces", "must be an array");
    t.gold_traces.emplace();
    for (const auto& g : j["gold_traces"]) {
      if (!g.is_number_integer()) field_fail("gold_traces", "non-integer gap");
      t.gold_traces->push_back(g.get<int>());
    }
  }
  if (j.contains("s3_labels") && !j["s3_labels"].is_null()) {
    if (!j["s3_labels"].is_array()) field_fail("s3_labels", "must be an array");
    t.s3_labels.emplace();
    for (const auto& l : j["s3_labels"]) {
      if (!l.is_string()) field_fail("s3_labels", "non-string label");
      t.s3_labels->push_back(l.get<std::string>());
    }
  }
  if (j.contains("syllables") && !j["syllables"].is_null()) {
    if (!j["syllables"].is_array()) field_fail("syllables", "must be an array");
    t.syllables.emplace();
    std::size_t k = 0;
    for (const auto& s : j["syllables"]) {
      const auto sw = where + ": turn " + t.id + ": syllables[" + std::to_string(k++) + "]";
      if (!s.is_object() || !s.contains("word") || !s["word"].is_number_integer() || !s.contains("features"))
        throw InputFormatError(sw + ": needs integer word and features");
      t.syllables->push_back({s["word"].get<int>(), prosody::syllable_from_json(s["features"], sw)});
    }
  }
  try {
    validate(t);
  } catch (const InputFormatError& e) {
    fail(e.what());
  }
  return t;
}

inline Corpus parse_corpus(std::istream& in, const std::string& name = "corpus") {
  Corpus c;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = name + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputFormatError(where + ": malformed JSON line");
    }
    if (first && j.is_object() && j.contains("corpus") && !j.contains("id")) {
      c.provenance = j["corpus"];
      first = false;
      continue;
    }
    first = false;
    auto t = turn_from_json(j, where);
    if (!ids.insert(t.id).second) throw InputFormatError(where + ": duplicate turn id " + t.id);
    c.turns.push_back(std::move(t));
  }
  return c;
}

inline Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputFormatError("cannot open corpus file " + path);
  return parse_corpus(in, path);
}

inline void write_corpus(std::ostream& out, const Corpus& c) {
  if (!c.provenance.empty()) out << json{{"corpus", c.provenance}}.dump() << '\n';
  for (const auto& t : c.turns) out << to_json(t).dump() << '\n';
}

inline void save_corpus(const std::string& path, const Corpus& c) {
  std::ofstream out(path);
  if (!out) throw InputFormatError("cannot write corpus file " + path);
  write_corpus(out, c);
}

inline std::string corpus_text(const Corpus& c) {
  std::ostringstream out;
  write_corpus(out, c);
  return out.str();
}

}  // namespace prosogate::corpus
