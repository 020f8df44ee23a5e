#pragma once

// Distribution of the objective values: moments and the number of modes of a
// kernel density estimate.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "elab/features/common.hpp"
#include "elab/features/registry.hpp"

namespace elab {

namespace detail {

/// Silverman's rule of thumb, 0.9 min(sd, IQR / 1.34) n^(-1/5).
inline double silverman_bandwidth(std::span<const double> y) {
  std::vector<double> v(y.begin(), y.end());
  const double iqr = quantile_linear(v, 0.75) - quantile_linear(v, 0.25);
  double spread = sd(y);
  if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
  return 0.9 * spread * std::pow(static_cast<double>(y.size()), -0.2);
}

/// Modes of a Gaussian KDE on a 512-point grid over [min - 3h, max + 3h] whose
/// probability mass between the flanking local minima exceeds `mass_threshold`.
inline int count_kde_peaks(std::span<const double> y, double mass_threshold = 0.01) {
  constexpr std::size_t kGrid = 512;
  const double h = silverman_bandwidth(y);
  if (!(h > 0.0)) return 1;
  const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
  const double lo = *lo_it - 3.0 * h, hi = *hi_it + 3.0 * h;
  const double step = (hi - lo) / static_cast<double>(kGrid - 1);

  std::vector<double> grid(kGrid), dens(kGrid, 0.0);
  const double norm = 1.0 / (static_cast<double>(y.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t g = 0; g < kGrid; ++g) {
    grid[g] = lo + step * static_cast<double>(g);
    double acc = 0.0;
    for (double v : y) {
      const double z = (grid[g] - v) / h;
      acc += std::exp(-0.5 * z * z);
    }
    dens[g] = acc * norm;
  }

  std::vector<std::size_t> cuts{0};
  for (std::size_t g = 1; g + 1 < kGrid; ++g)
    if (dens[g] < dens[g - 1] && dens[g] < dens[g + 1]) cuts.push_back(g);
  cuts.push_back(kGrid - 1);

  int peaks = 0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    double mass = 0.0;
    for (std::size_t g = cuts[c]; g < cuts[c + 1]; ++g) mass += 0.5 * (dens[g] + dens[g + 1]) * step;
    if (mass > mass_threshold) ++peaks;
  }
  return peaks;
}

}  // namespace detail

/// skewness (m3 / m2^1.5), excess kurtosis (m4 / m2^2 - 3), number_of_peaks.
inline FeatureBlock<kElaDistrCount> ela_distr(const EvaluatedSample& s) {
  FeatureBlock<kElaDistrCount> out{};
  const std::span<const double> y = s.values;
  if (y.size() < 4 || detail::all_equal(y)) return out;

  const double n = static_cast<double>(y.size());
  const double mu = detail::mean(y);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : y) {
    const double c = v - mu, c2 = c * c;
    m2 += c2;
    m3 += c2 * c;
    m4 += c2 * c2;
  }
  out[0] = detail::finite_or_missing(std::sqrt(n) * m3 / std::pow(m2, 1.5));
  out[1] = detail::finite_or_missing(n * m4 / (m2 * m2) - 3.0);
  out[2] = static_cast<double>(detail::count_kde_peaks(y));
  return out;
}

}  // namespace elab
