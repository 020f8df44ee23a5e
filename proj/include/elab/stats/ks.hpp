#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace elab {

inline constexpr std::size_t kMinKsSampleSize = 10;

struct KsResult {
  double statistic = 0.0;  // D
  double p_value = 1.0;
  bool reject = false;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double alpha = 0.05;
  bool insufficient_data = false;
};

/// Asymptotic Kolmogorov survival function
/// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2), clamped to [0, 1].
inline double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  double sum = 0.0;
  for (int k = 1; k < 1'000'000; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// Exact sup |ECDF_a - ECDF_b| by a merge over the sorted samples.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Two-sample Kolmogorov-Smirnov test. Fewer than 10 values on either side
/// gives an insufficient-data result that never rejects.
inline KsResult ks_2samp(std::span<const double> a, std::span<const double> b, double alpha = 0.05) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_2samp: empty sample");
  KsResult r;
  r.n_a = a.size();
  r.n_b = b.size();
  r.alpha = alpha;
  if (a.size() < kMinKsSampleSize || b.size() < kMinKsSampleSize) {
    r.insufficient_data = true;
    return r;
  }
  r.statistic = ks_statistic({a.begin(), a.end()}, {b.begin(), b.end()});
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  r.p_value = r.statistic == 0.0 ? 1.0 : kolmogorov_sf(r.statistic * std::sqrt(na * nb / (na + nb)));
  r.reject = r.p_value < alpha;
  return r;
}

}  // namespace elab
