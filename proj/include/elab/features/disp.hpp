#pragma once

// Dispersion features: pairwise distances among the best points compared
// with pairwise distances in the whole sample.

#include <array>
#include <vector>

#include "elab/features/common.hpp"
#include "elab/features/registry.hpp"

namespace elab {

namespace detail {

inline constexpr std::array<double, 4> kDispQuantiles{0.02, 0.05, 0.10, 0.25};

inline std::vector<double> pair_distances(const DistanceMatrix& dist, const std::vector<std::size_t>& rows) {
  std::vector<double> out;
  out.reserve(rows.size() * (rows.size() - 1) / 2);
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b) out.push_back(dist(rows[a], rows[b]));
  return out;
}

}  // namespace detail

/// ratio_mean_q, ratio_median_q, diff_mean_q, diff_median_q for
/// q in {02, 05, 10, 25} (grouped by statistic, as in the registry).
inline FeatureBlock<kDispCount> disp(const EvaluatedSample& s, const detail::DistanceMatrix& dist) {
  FeatureBlock<kDispCount> out{};
  const auto& y = s.values;
  const std::size_t m = y.size();
  if (m < 2) return out;

  std::vector<std::size_t> all(m);
  for (std::size_t i = 0; i < m; ++i) all[i] = i;
  const auto all_d = detail::pair_distances(dist, all);
  const double mean_all = detail::mean(all_d);
  const double median_all = detail::median(all_d);

  for (std::size_t qi = 0; qi < detail::kDispQuantiles.size(); ++qi) {
    const double threshold = detail::quantile_linear(y, detail::kDispQuantiles[qi]);
    std::vector<std::size_t> best;
    for (std::size_t i = 0; i < m; ++i)
      if (y[i] <= threshold) best.push_back(i);
    if (best.size() < 2) continue;
    const auto sub = detail::pair_distances(dist, best);
    const double mean_q = detail::mean(sub), median_q = detail::median(sub);
    out[qi] = detail::finite_or_missing(mean_q / mean_all);
    out[4 + qi] = detail::finite_or_missing(median_q / median_all);
    out[8 + qi] = mean_q - mean_all;
    out[12 + qi] = median_q - median_all;
  }
  return out;
}

}  // namespace elab
