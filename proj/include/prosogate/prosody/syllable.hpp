#pragma once

// Per-syllable acoustic measurements as stored in corpus files.

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "../error.hpp"

namespace prosogate::prosody {

using json = nlohmann::json;

inline constexpr std::size_t kDefaultRegressionLength = 16;

struct SyllableRecord {
  double duration = 0;  // normalized nucleus duration
  double f0_min = 0, f0_max = 0, f0_onset = 0, f0_offset = 0;  // semitones
  double f0_min_pos = 0, f0_max_pos = 0, f0_onset_pos = 0, f0_offset_pos = 0;  // seconds
  double energy_max = 0, energy_max_pos = 0, energy_mean = 0;
  double f0_mean = 0;
  bool accent = false;
  bool word_final = false;
  double pause_before = 0, pause_after = 0;  // seconds, 0 if none
  std::vector<double> f0_regression;
  std::vector<double> energy_regression;

  /// The fifteen values that enter every context position, in layout order.
  std::array<double, 15> context_block() const {
    return {duration,     f0_min,     f0_max,        f0_onset,       f0_offset,
            f0_min_pos,   f0_max_pos, f0_onset_pos,  f0_offset_pos,  energy_max,
            energy_max_pos, energy_mean, f0_mean, accent ? 1.0 : 0.0, word_final ? 1.0 : 0.0};
  }

  bool operator==(const SyllableRecord&) const = default;
};

inline const std::vector<std::string>& context_feature_names() {
  static const std::vector<std::string> names{
      "duration",     "f0_min",     "f0_max",       "f0_onset",      "f0_offset",
      "f0_min_pos",   "f0_max_pos", "f0_onset_pos", "f0_offset_pos", "energy_max",
      "energy_max_pos", "energy_mean", "f0_mean", "accent", "word_final"};
  return names;
}

inline json to_json(const SyllableRecord& s) {
  auto block = s.context_block();
  json j = json::object();
  const auto& names = context_feature_names();
  for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = block[i];
  j["accent"] = s.accent;
  j["word_final"] = s.word_final;
  j["pause_before"] = s.pause_before;
  j["pause_after"] = s.pause_after;
  j["f0_regression"] = s.f0_regression;
  j["energy_regression"] = s.energy_regression;
  return j;
}

/// Throws InputFormatError naming the offending field; `where` prefixes the message.
inline SyllableRecord syllable_from_json(const json& j, const std::string& where) {
  auto fail = [&](const std::string& what) { throw InputFormatError(where + ": " + what); };
  if (!j.is_object()) fail("syllable features must be an object");
  auto num = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) fail(std::string("missing or non-numeric feature ") + key);
    return j[key].get<double>();
  };
  auto flag = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_boolean()) fail(std::string("feature ") + key + " must be boolean");
    return j[key].get<bool>();
  };
  auto vec = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array()) fail(std::string("feature ") + key + " must be an array");
    std::vector<double> out;
    for (const auto& x : j[key]) {
      if (!x.is_number()) fail(std::string("feature ") + key + " holds a non-number");
      out.push_back(x.get<double>());
    }
    return out;
  };
  SyllableRecord s;
  s.duration = num("duration");
  s.f0_min = num("f0_min");
  s.f0_max = num("f0_max");
  s.f0_onset = num("f0_onset");
  s.f0_offset = num("f0_offset");
  s.f0_min_pos = num("f0_min_pos");
  s.f0_max_pos = num("f0_max_pos");
  s.f0_onset_pos = num("f0_onset_pos");
  s.f0_offset_pos = num("f0_offset_pos");
  s.energy_max = num("energy_max");
  s.energy_max_pos = num("energy_max_pos");
  s.energy_mean = num("energy_mean");
  s.f0_mean = num("f0_mean");
  s.accent = flag("accent");
  s.word_final = flag("word_final");
  s.pause_before = num("pause_before");
  s.pause_after = num("pause_after");
  if (s.pause_before < 0 || s.pause_after < 0) fail("pause lengths must be >= 0");
  s.f0_regression = vec("f0_regression");
  s.energy_regression = vec("energy_regression");
  return s;
}

}  // namespace prosogate::prosody
