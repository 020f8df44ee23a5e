#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "elab/sampling.hpp"

namespace elab::detail {

/// Quantile with linear interpolation between order statistics (R type 7).
inline double quantile_linear(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

inline double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Sample standard deviation (n - 1 denominator).
inline double sd(std::span<const double> v) {
  const double mu = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

/// Median of a copy, averaging the two middle elements for even sizes.
inline double median(std::vector<double> v) {
  const std::size_t n = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

/// Pearson correlation; empty when either side has zero variance.
inline std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  const double ma = mean(a), mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

inline bool all_equal(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

inline std::optional<double> finite_or_missing(double v) {
  return std::isfinite(v) ? std::optional<double>(v) : std::nullopt;
}

/// Dense symmetric Euclidean distance matrix of the design points.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(const Design& design) : n_(design.size()), d_(n_ * n_, 0.0) {
    const std::size_t dim = design.dimension();
    for (std::size_t i = 0; i < n_; ++i) {
      const auto xi = design.point(i);
      for (std::size_t j = i + 1; j < n_; ++j) {
        const auto xj = design.point(j);
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
          const double t = xi[k] - xj[k];
          s += t * t;
        }
        d_[i * n_ + j] = d_[j * n_ + i] = std::sqrt(s);
      }
    }
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

}  // namespace elab::detail
