#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "elab/features/features.hpp"

namespace elab {

/// Per-feature min-max scaling fitted on every observation of an experiment.
/// Constant features map to 0; missing values stay missing.
struct MinMaxScaler {
  std::array<double, kNumFeatures> min{};
  std::array<double, kNumFeatures> max{};
  std::array<bool, kNumFeatures> seen{};

  static MinMaxScaler fit(std::span<const FeatureVector> table) {
    MinMaxScaler s;
    s.min.fill(std::numeric_limits<double>::infinity());
    s.max.fill(-std::numeric_limits<double>::infinity());
    for (const auto& row : table)
      for (std::size_t f = 0; f < kNumFeatures; ++f) {
        if (!row.values[f]) continue;
        s.seen[f] = true;
        s.min[f] = std::min(s.min[f], *row.values[f]);
        s.max[f] = std::max(s.max[f], *row.values[f]);
      }
    return s;
  }

  FeatureValue apply(std::size_t f, const FeatureValue& v) const {
    if (!v) return std::nullopt;
    const double range = max[f] - min[f];
    if (!seen[f] || !(range > 0.0)) return 0.0;
    return (*v - min[f]) / range;
  }

  FeatureVector apply(const FeatureVector& row) const {
    FeatureVector out = row;
    for (std::size_t f = 0; f < kNumFeatures; ++f) out.values[f] = apply(f, row.values[f]);
    return out;
  }

  std::vector<FeatureVector> apply(std::span<const FeatureVector> table) const {
    std::vector<FeatureVector> out;
    out.reserve(table.size());
    for (const auto& row : table) out.push_back(apply(row));
    return out;
  }
};

/// Fits a scaler on `table` and returns the normalized table with it.
inline std::pair<std::vector<FeatureVector>, MinMaxScaler> normalize(std::span<const FeatureVector> table) {
  auto scaler = MinMaxScaler::fit(table);
  return {scaler.apply(table), scaler};
}

}  // namespace elab
