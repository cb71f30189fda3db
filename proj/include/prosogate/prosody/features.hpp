#pragma once

// Feature vectors over a window of ±6 syllables.
//
// Default layout, 242 values:
//   13 positions (-6..+6) x 15 per-syllable values      195
//   13 validity flags (1 = position inside the turn)      13
//   pause before / after, current syllable only             2
//   F0 regression coefficients, current syllable only      16
//   energy regression coefficients, current syllable only  16
//
// The 16 coefficients per contour are 15 windows plus one window over the
// nucleus. A mask selects a subset of the 242 values.

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "../error.hpp"
#include "syllable.hpp"

namespace prosogate::prosody {

struct FeatureLayout {
  std::string id = "ctx6-v1";
  int context = 6;
  std::size_t regression_length = kDefaultRegressionLength;
  std::vector<bool> mask;  // empty: keep everything

  std::size_t positions() const { return static_cast<std::size_t>(2 * context + 1); }
  std::size_t full_dimension() const {
    return positions() * context_feature_names().size() + positions() + 2 + 2 * regression_length;
  }
  std::size_t dimension() const {
    return mask.empty() ? full_dimension() : static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
  }

  /// Names of the full (unmasked) vector, in order.
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (int p = -context; p <= context; ++p)
      for (const auto& f : context_feature_names()) out.push_back(f + "@" + std::to_string(p));
    for (int p = -context; p <= context; ++p) out.push_back("valid@" + std::to_string(p));
    out.push_back("pause_before");
    out.push_back("pause_after");
    for (std::size_t i = 0; i < regression_length; ++i) out.push_back("f0_regression[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < regression_length; ++i) out.push_back("energy_regression[" + std::to_string(i) + "]");
    return out;
  }

  /// Layout keeping only the features whose name satisfies keep.
  FeatureLayout subset(const std::string& subset_id, const std::function<bool(const std::string&)>& keep) const {
    FeatureLayout out = *this;
    out.id = subset_id;
    out.mask.clear();
    for (const auto& n : names()) out.mask.push_back(keep(n));
    return out;
  }

  static FeatureLayout default_layout() { return {}; }

  /// Durational features and F0 regression coefficients only.
  static FeatureLayout duration_f0_subset() {
    return default_layout().subset("ctx6-dur-f0-v1", [](const std::string& n) {
      return n.rfind("duration@", 0) == 0 || n.rfind("pause_", 0) == 0 || n.rfind("f0_regression", 0) == 0 ||
             n.rfind("valid@", 0) == 0;
    });
  }
};

struct FeatureVector {
  std::vector<double> values;
  std::string layout_id;
};

inline FeatureVector extract_features(const std::vector<SyllableRecord>& syllables, std::size_t index,
                                      const FeatureLayout& layout) {
  if (index >= syllables.size())
    throw InvalidArgument("syllable index " + std::to_string(index) + " outside turn of " +
                          std::to_string(syllables.size()));
  const auto& cur = syllables[index];
  if (cur.f0_regression.size() != layout.regression_length || cur.energy_regression.size() != layout.regression_length)
    throw InputFormatError("regression block length differs from layout " + layout.id + " (expected " +
                           std::to_string(layout.regression_length) + ")");
  std::vector<double> full;
  full.reserve(layout.full_dimension());
  std::vector<double> valid;
  const long n = static_cast<long>(syllables.size());
  for (long p = -layout.context; p <= layout.context; ++p) {
    const long k = static_cast<long>(index) + p;
    if (k < 0 || k >= n) {
      full.insert(full.end(), context_feature_names().size(), 0.0);
      valid.push_back(0);
      continue;
    }
    auto block = syllables[k].context_block();
    full.insert(full.end(), block.begin(), block.end());
    valid.push_back(1);
  }
  full.insert(full.end(), valid.begin(), valid.end());
  full.push_back(cur.pause_before);
  full.push_back(cur.pause_after);
  full.insert(full.end(), cur.f0_regression.begin(), cur.f0_regression.end());
  full.insert(full.end(), cur.energy_regression.begin(), cur.energy_regression.end());

  FeatureVector out;
  out.layout_id = layout.id;
  if (layout.mask.empty()) {
    out.values = std::move(full);
  } else {
    if (layout.mask.size() != full.size()) throw InvalidArgument("layout mask length differs from full dimension");
    for (std::size_t i = 0; i < full.size(); ++i)
      if (layout.mask[i]) out.values.push_back(full[i]);
  }
  return out;
}

}  // namespace prosogate::prosody
