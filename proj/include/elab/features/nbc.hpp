#pragma once

// Nearest-better clustering features.

#include <limits>
#include <vector>

#include "elab/features/common.hpp"
#include "elab/features/registry.hpp"

namespace elab {

/// nn_nb.sd_ratio, nn_nb.mean_ratio, nn_nb.cor, dist_ratio.coeff_var,
/// nb_fitness.cor.
///
/// A point without a strictly better neighbour (the sample best) takes its
/// nearest-neighbour distance as its nearest-better distance and selects no
/// one; every other point contributes one edge to the indegree count.
inline FeatureBlock<kNbcCount> nbc(const EvaluatedSample& s, const detail::DistanceMatrix& dist) {
  FeatureBlock<kNbcCount> out{};
  const auto& y = s.values;
  const std::size_t m = y.size();
  if (m < 2 || detail::all_equal(y)) return out;

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> nn(m, inf), nb(m, inf), ratio(m);
  std::vector<double> indegree(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t best_j = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const double dij = dist(i, j);
      if (dij < nn[i]) nn[i] = dij;
      if (y[j] < y[i] && dij < nb[i]) {
        nb[i] = dij;
        best_j = j;
      }
    }
    if (best_j == m)
      nb[i] = nn[i];
    else
      indegree[best_j] += 1.0;
  }
  for (std::size_t i = 0; i < m; ++i) ratio[i] = nn[i] / nb[i];

  using detail::finite_or_missing;
  const double sd_nb = detail::sd(nb);
  if (sd_nb > 0.0) out[0] = finite_or_missing(detail::sd(nn) / sd_nb);
  out[1] = finite_or_missing(detail::mean(nn) / detail::mean(nb));
  const double ratio_mean = detail::mean(ratio);
  if (ratio_mean > 0.0) out[3] = finite_or_missing(detail::sd(ratio) / ratio_mean);
  // with m = 2 only one point has a better neighbour
  if (m > 2) {
    out[2] = detail::pearson(nn, nb);
    out[4] = detail::pearson(indegree, y);
  }
  return out;
}

}  // namespace elab
