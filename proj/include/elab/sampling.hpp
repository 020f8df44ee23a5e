#pragma once

// Latin hypercube designs and their evaluation under a problem instance.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "elab/problems.hpp"
#include "elab/rng.hpp"
#include "elab/transforms.hpp"

namespace elab {

/// Row-major so each sample point is a contiguous span.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Design {
  PointMatrix points;
  Bounds bounds;
  std::uint64_t seed = 0;

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
  std::size_t dimension() const { return static_cast<std::size_t>(points.cols()); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * dimension(), dimension()};
  }
};

struct EvaluatedSample {
  Design design;
  std::vector<double> values;
  InstanceDescriptor descriptor;
  int repetition = 0;
};

/// Stratum of v when `bounds` is split into m equal cells.
inline std::size_t stratum_of(double v, const Bounds& bounds, std::size_t m) {
  const double u = (v - bounds.lower) / bounds.width() * static_cast<double>(m);
  const auto s = static_cast<std::size_t>(std::floor(u));
  return s >= m ? m - 1 : s;
}

/// Randomized jittered Latin hypercube: an independent stratum permutation per
/// dimension, uniform position inside each cell.
inline Design lhs(std::size_t m, std::size_t d, const Bounds& bounds, std::uint64_t seed) {
  if (m == 0 || d == 0) throw std::invalid_argument("lhs: m and d must be >= 1");
  if (!(bounds.upper > bounds.lower)) throw std::invalid_argument("lhs: empty bounds");
  Rng rng(seed);
  Design design;
  design.bounds = bounds;
  design.seed = seed;
  design.points.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  std::vector<std::size_t> perm(m);
  const double cell = bounds.width() / static_cast<double>(m);
  for (std::size_t j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(perm));
    for (std::size_t i = 0; i < m; ++i) {
      const double lo = bounds.lower + static_cast<double>(perm[i]) * cell;
      double v = lo + rng.uniform01() * cell;
      // rounding can land exactly on the next cell edge
      while (v > bounds.lower && stratum_of(v, bounds, m) > perm[i]) v = std::nextafter(v, lo);
      while (stratum_of(v, bounds, m) < perm[i]) v = std::nextafter(v, bounds.upper);
      design.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return design;
}

inline Design lhs(std::size_t m, std::size_t d, const Bounds& bounds, Rng& rng) {
  return lhs(m, d, bounds, rng.next_u64());
}

/// Design seed for one repetition; independent of problem and instance, so
/// every instance of equal dimension sees the same design.
inline std::uint64_t design_seed(std::uint64_t base_seed, std::uint64_t repetition) {
  return mix_seed({base_seed, 0x4c4853ULL, repetition});
}

/// Per-instance design seed used when designs are not shared.
inline std::uint64_t unshared_design_seed(std::uint64_t base_seed, ProblemId problem,
                                          int instance_index, std::uint64_t repetition) {
  return mix_seed({base_seed, 0x4c4853ULL, static_cast<std::uint64_t>(to_int(problem)),
                   static_cast<std::uint64_t>(instance_index), repetition});
}

inline EvaluatedSample evaluate_design(const InstanceDescriptor& desc, const Design& design,
                                       int repetition) {
  if (design.dimension() != desc.dimension)
    throw std::invalid_argument("evaluate_design: design dimension " +
                                std::to_string(design.dimension()) + " != problem dimension " +
                                std::to_string(desc.dimension));
  EvaluatedSample s;
  s.design = design;
  s.descriptor = desc;
  s.repetition = repetition;
  s.values.resize(design.size());
  std::vector<double> scratch;
  for (std::size_t i = 0; i < design.size(); ++i) {
    const double y = instance_evaluate(desc, design.point(i), scratch);
    if (!std::isfinite(y)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "non-finite objective value at design row " << i << " (";
      for (std::size_t j = 0; j < design.dimension(); ++j) msg << (j ? ", " : "") << design.point(i)[j];
      msg << ") for problem " << to_int(desc.problem) << " instance " << desc.instance_index;
      throw InternalError(msg.str());
    }
    s.values[i] = y;
  }
  return s;
}

/// Builds a sample from an explicit point matrix and objective values (used
/// for fixtures and tests that bypass the instance machinery).
inline EvaluatedSample make_sample(PointMatrix points, std::vector<double> values) {
  if (static_cast<std::size_t>(points.rows()) != values.size())
    throw std::invalid_argument("make_sample: row count does not match value count");
  EvaluatedSample s;
  s.design.points = std::move(points);
  s.values = std::move(values);
  s.descriptor.dimension = s.design.dimension();
  return s;
}

}  // namespace elab
