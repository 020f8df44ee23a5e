#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "elab/features/common.hpp"
#include "elab/features/disp.hpp"
#include "elab/features/ela_distr.hpp"
#include "elab/features/ela_level.hpp"
#include "elab/features/ela_meta.hpp"
#include "elab/features/ic.hpp"
#include "elab/features/nbc.hpp"
#include "elab/features/pca.hpp"
#include "elab/features/registry.hpp"

namespace elab {

struct FeatureProvenance {
  int problem = 0;
  int instance_index = 0;
  int repetition = 0;
  std::uint64_t feature_seed = 0;
};

/// The 55 feature values of one evaluated sample, in registry order.
struct FeatureVector {
  std::array<FeatureValue, kNumFeatures> values{};
  FeatureProvenance provenance;

  const FeatureValue& operator[](std::size_t i) const { return values[i]; }
  const FeatureValue& at(std::string_view name) const { return values[feature_index(name)]; }
  std::size_t missing_count() const {
    std::size_t n = 0;
    for (const auto& v : values) n += !v.has_value();
    return n;
  }
};

inline std::uint64_t feature_seed(std::uint64_t base_seed, int problem, int instance_index, int repetition) {
  return mix_seed({base_seed, 0x454c41ULL, static_cast<std::uint64_t>(problem),
                   static_cast<std::uint64_t>(instance_index), static_cast<std::uint64_t>(repetition)});
}

/// Runs all seven groups. Degenerate groups yield missing entries; the vector
/// is always complete. Only the level-set fold assignment consumes `seed`.
inline FeatureVector compute_all(const EvaluatedSample& s, std::uint64_t seed) {
  if (s.values.size() != s.design.size())
    throw std::invalid_argument("compute_all: value count does not match design size");
  FeatureVector fv;
  fv.provenance = {to_int(s.descriptor.problem), s.descriptor.instance_index, s.repetition, seed};

  auto place = [&fv](std::size_t offset, const auto& block) {
    for (std::size_t i = 0; i < block.size(); ++i) {
      const auto& v = block[i];
      fv.values[offset + i] = v && std::isfinite(*v) ? v : FeatureValue{};
    }
  };

  const detail::DistanceMatrix dist(s.design);
  Rng rng(seed);
  place(kElaMetaOffset, ela_meta(s));
  place(kElaDistrOffset, ela_distr(s));
  place(kElaLevelOffset, ela_level(s, rng));
  place(kNbcOffset, nbc(s, dist));
  place(kDispOffset, disp(s, dist));
  place(kIcOffset, ic(s, dist));
  place(kPcaOffset, pca(s));
  return fv;
}

}  // namespace elab
