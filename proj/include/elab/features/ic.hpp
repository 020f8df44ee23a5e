#pragma once

// Information content of the slope-sign sequence along a nearest-neighbour
// tour through the sample.

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "elab/features/common.hpp"
#include "elab/features/registry.hpp"

namespace elab {

namespace detail {

inline constexpr double kIcSettlingSensitivity = 0.05;
inline constexpr double kIcInfoSensitivity = 0.5;

/// {0} followed by 1000 log-spaced values in [1e-5, 1e15].
inline const std::vector<double>& ic_epsilon_grid() {
  static const std::vector<double> grid = [] {
    constexpr int n = 1000;
    constexpr double start = -5.0, stop = 15.0;
    const double step = (stop - start) / (n - 1);
    std::vector<double> g{0.0};
    for (int i = 0; i < n; ++i) {
      const double e = i == n - 1 ? stop : static_cast<double>(i) * step + start;
      g.push_back(std::pow(10.0, e));
    }
    return g;
  }();
  return grid;
}

/// Greedy tour starting at row 0: repeatedly move to the nearest unvisited
/// point (lowest index on ties).
inline std::vector<std::size_t> nearest_neighbour_tour(const DistanceMatrix& dist) {
  const std::size_t m = dist.size();
  std::vector<std::size_t> tour{0};
  std::vector<char> visited(m, 0);
  visited[0] = 1;
  tour.reserve(m);
  for (std::size_t step = 1; step < m; ++step) {
    const std::size_t cur = tour.back();
    std::size_t next = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      if (visited[j]) continue;
      if (dist(cur, j) < best) {
        best = dist(cur, j);
        next = j;
      }
    }
    visited[next] = 1;
    tour.push_back(next);
  }
  return tour;
}

struct EntropyProfile {
  std::vector<double> h;  // H(eps), base-6 entropy of unequal symbol pairs
  std::vector<double> m;  // M(eps), partial information
};

inline EntropyProfile entropy_profile(const std::vector<double>& slopes, const std::vector<double>& eps) {
  EntropyProfile prof;
  prof.h.resize(eps.size());
  prof.m.resize(eps.size());
  const std::size_t n = slopes.size();
  const double pairs = static_cast<double>(n - 1);
  const double log6 = std::log(6.0);
  std::vector<int> psi(n);
  for (std::size_t e = 0; e < eps.size(); ++e) {
    for (std::size_t i = 0; i < n; ++i)
      psi[i] = std::abs(slopes[i]) < eps[e] ? 0 : (slopes[i] > 0.0) - (slopes[i] < 0.0);

    std::array<std::array<int, 3>, 3> count{};
    for (std::size_t i = 0; i + 1 < n; ++i) ++count[psi[i] + 1][psi[i + 1] + 1];
    double h = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (a == b || count[a][b] == 0) continue;
        const double p = count[a][b] / pairs;
        h -= p * std::log(p) / log6;
      }
    prof.h[e] = h;

    // sign changes in the sequence with zeros removed
    int last = 0, changes = 0;
    for (int v : psi) {
      if (v == 0) continue;
      if (last != 0 && v != last) ++changes;
      last = v;
    }
    prof.m[e] = changes / pairs;
  }
  return prof;
}

}  // namespace detail

/// h_max, eps_s, eps_max, eps_ratio, m0.
inline FeatureBlock<kIcCount> ic(const EvaluatedSample& s, const detail::DistanceMatrix& dist) {
  FeatureBlock<kIcCount> out{};
  const auto& y = s.values;
  const std::size_t m = y.size();
  if (m < 3) return out;

  const auto tour = detail::nearest_neighbour_tour(dist);
  std::vector<double> slopes;
  slopes.reserve(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double step = dist(tour[i], tour[i + 1]);
    if (step == 0.0) continue;
    slopes.push_back((y[tour[i + 1]] - y[tour[i]]) / step);
  }
  if (slopes.size() < 2) return out;

  const auto& eps = detail::ic_epsilon_grid();
  const auto prof = detail::entropy_profile(slopes, eps);
  const double h_max = *std::max_element(prof.h.begin(), prof.h.end());
  const double m0 = prof.m[0];
  out[0] = h_max;
  out[4] = m0;
  if (detail::all_equal(y)) return out;

  for (std::size_t e = 0; e < eps.size(); ++e)
    if (prof.h[e] < detail::kIcSettlingSensitivity) {
      out[1] = detail::finite_or_missing(std::log10(eps[e]));
      break;
    }

  std::vector<double> at_max;
  for (std::size_t e = 0; e < eps.size(); ++e)
    if (prof.h[e] == h_max) at_max.push_back(eps[e]);
  out[2] = detail::median(at_max);

  for (std::size_t e = eps.size(); e-- > 0;)
    if (prof.m[e] > detail::kIcInfoSensitivity * m0) {
      out[3] = detail::finite_or_missing(std::log10(eps[e]));
      break;
    }
  return out;
}

}  // namespace elab
