#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "elab/features/features.hpp"
#include "elab/stats/ks.hpp"
#include "elab/stats/normalize.hpp"
#include "elab/stats/wasserstein.hpp"
#include "elab/transforms.hpp"

namespace elab {

struct ComparisonRow {
  std::size_t feature = 0;
  KsResult ks;                // ks.insufficient_data marks rows without a test
  std::optional<double> emd;  // missing when either side has no present value
};

/// Which instance pair a report describes.
struct ComparisonKey {
  int problem = 0;
  int original_index = 0;
  int instance_index = 0;
  TransformKind kind = TransformKind::Identity;
  double level = 0.0;
};

struct ComparisonReport {
  ComparisonKey key;
  std::array<ComparisonRow, kNumFeatures> rows{};
  int n_rejected = 0;
  double mean_emd = 0.0;
};

namespace detail {

inline std::vector<double> present_column(std::span<const FeatureVector> table, std::size_t f) {
  std::vector<double> out;
  out.reserve(table.size());
  for (const auto& row : table)
    if (row.values[f]) out.push_back(*row.values[f]);
  return out;
}

inline std::vector<double> present_column(std::span<const FeatureVector> table, std::size_t f,
                                          const MinMaxScaler& scaler) {
  std::vector<double> out;
  out.reserve(table.size());
  for (const auto& row : table)
    if (auto v = scaler.apply(f, row.values[f])) out.push_back(*v);
  return out;
}

}  // namespace detail

/// Feature-wise comparison of an original and a transformed instance, each
/// given as one feature vector per repetition. KS runs on raw values, EMD on
/// values normalized by `scaler`; missing entries are dropped per feature.
inline ComparisonReport compare(std::span<const FeatureVector> orig, std::span<const FeatureVector> trans,
                                const MinMaxScaler& scaler, double alpha = 0.05, ComparisonKey key = {}) {
  if (orig.empty() || trans.empty()) throw std::invalid_argument("compare: empty feature table");
  ComparisonReport rep;
  rep.key = key;
  double emd_sum = 0.0;
  int emd_count = 0;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    ComparisonRow& row = rep.rows[f];
    row.feature = f;
    const auto a = detail::present_column(orig, f), b = detail::present_column(trans, f);
    if (a.empty() || b.empty()) {
      row.ks.n_a = a.size();
      row.ks.n_b = b.size();
      row.ks.alpha = alpha;
      row.ks.insufficient_data = true;
      continue;
    }
    row.ks = ks_2samp(a, b, alpha);
    rep.n_rejected += row.ks.reject;
    row.emd = wasserstein_1d(detail::present_column(orig, f, scaler), detail::present_column(trans, f, scaler));
    emd_sum += *row.emd;
    ++emd_count;
  }
  rep.mean_emd = emd_count > 0 ? emd_sum / emd_count : 0.0;
  return rep;
}

struct CurvePoint {
  double level = 0.0;
  double n_reject_mean = 0.0;
  double emd_mean = 0.0;
};

/// Averages reports that share a level. Levels come out in ascending order,
/// which is the order of every parameter grid.
inline std::vector<CurvePoint> rejection_curve(std::span<const ComparisonReport> reports) {
  if (reports.empty()) throw std::invalid_argument("rejection_curve: no reports");
  std::map<double, std::tuple<double, double, int>> acc;
  for (const auto& r : reports) {
    auto& [rej, emd, n] = acc[r.key.level];
    rej += r.n_rejected;
    emd += r.mean_emd;
    ++n;
  }
  std::vector<CurvePoint> out;
  out.reserve(acc.size());
  for (const auto& [level, t] : acc) {
    const auto& [rej, emd, n] = t;
    out.push_back({level, rej / n, emd / n});
  }
  return out;
}

struct SensitivityKey {
  int problem = 0;
  TransformKind kind = TransformKind::Identity;
  std::size_t feature = 0;
  auto operator<=>(const SensitivityKey&) const = default;
};

struct SensitivityCell {
  int rejected = 0;
  int tested = 0;
  /// Missing when every comparison of the cell lacked data.
  std::optional<double> fraction() const {
    if (tested == 0) return std::nullopt;
    return static_cast<double>(rejected) / tested;
  }
};

using SensitivityMatrix = std::map<SensitivityKey, SensitivityCell>;

/// Fraction of transformed instances rejecting each feature, per problem and
/// transform kind. Identity comparisons are ignored.
inline SensitivityMatrix sensitivity(std::span<const ComparisonReport> reports) {
  SensitivityMatrix m;
  for (const auto& r : reports) {
    if (r.key.kind == TransformKind::Identity) continue;
    for (const auto& row : r.rows) {
      auto& cell = m[{r.key.problem, r.key.kind, row.feature}];
      if (row.ks.insufficient_data) continue;
      ++cell.tested;
      cell.rejected += row.ks.reject;
    }
  }
  return m;
}

using FeatureMeans = std::array<std::optional<double>, kNumFeatures>;

inline FeatureMeans feature_means(std::span<const FeatureVector> table) {
  FeatureMeans out{};
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& row : table)
      if (row.values[f]) {
        s += *row.values[f];
        ++n;
      }
    if (n > 0) out[f] = s / static_cast<double>(n);
  }
  return out;
}

/// Relative difference in percent between a transformed and an original
/// feature mean. Undefined when the original mean is 0 or either is missing.
inline std::optional<double> relative_diff_pct(std::optional<double> mean0, std::optional<double> mean_i) {
  if (!mean0 || !mean_i || *mean0 == 0.0) return std::nullopt;
  return std::abs((*mean0 - *mean_i) / *mean0) * 100.0;
}

/// One row per rotation, in input order.
using DiffMatrix = std::vector<FeatureMeans>;

inline DiffMatrix rotation_diff(std::span<const FeatureMeans> rotated, const FeatureMeans& original) {
  DiffMatrix out(rotated.size());
  for (std::size_t i = 0; i < rotated.size(); ++i)
    for (std::size_t f = 0; f < kNumFeatures; ++f) out[i][f] = relative_diff_pct(original[f], rotated[i][f]);
  return out;
}

/// Features whose diff reaches `threshold_pct` for some rotation of some problem.
inline std::vector<std::size_t> affected_features(std::span<const DiffMatrix> per_problem,
                                                  double threshold_pct = 1.0) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    bool hit = false;
    for (const auto& m : per_problem)
      for (const auto& row : m) hit = hit || (row[f] && *row[f] >= threshold_pct);
    if (hit) out.push_back(f);
  }
  return out;
}

inline std::size_t affected_count(const DiffMatrix& m, double threshold_pct = 1.0) {
  return affected_features(std::span<const DiffMatrix>(&m, 1), threshold_pct).size();
}

}  // namespace elab
