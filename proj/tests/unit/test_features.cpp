#include <cmath>
#include <cstring>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "elab/experiment/tables.hpp"
#include "elab/features/features.hpp"
#include "elab/transforms.hpp"

using namespace elab;

namespace {

EvaluatedSample sample_of(const Design& design, const std::vector<double>& y) {
  return make_sample(design.points, y);
}

std::vector<double> apply(const Design& d, const std::function<double(std::span<const double>)>& f) {
  std::vector<double> y(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) y[i] = f(d.point(i));
  return y;
}

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> y(n);
  for (auto& v : y) v = rng.uniform01();
  return y;
}

double value(const FeatureBlock<9>& b, std::size_t i) { return b[i].value(); }

bool bit_equal(const FeatureValue& a, const FeatureValue& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || std::memcmp(&*a, &*b, sizeof(double)) == 0;
}

void expect_rel(const FeatureValue& a, const FeatureValue& b, double tol, std::string_view what) {
  ASSERT_TRUE(a.has_value()) << what;
  ASSERT_TRUE(b.has_value()) << what;
  EXPECT_LE(std::abs(*a - *b), tol * std::max({std::abs(*a), std::abs(*b), 1e-300})) << what;
}

std::map<std::string, std::optional<double>> read_expected(int p) {
  const std::string text = read_file(std::string(ELAB_FIXTURE_DIR) + "/parity/features_expected_p" +
                                     std::to_string(p) + ".csv");
  std::map<std::string, std::optional<double>> out;
  std::size_t pos = text.find('\n') + 1;
  while (pos < text.size()) {
    const auto end = text.find('\n', pos);
    const auto cells = split_csv_line(std::string_view(text).substr(pos, end - pos));
    out[std::string(cells[0])] = cells[1].empty() ? std::nullopt : std::optional<double>(parse_double(cells[1]));
    pos = end + 1;
  }
  return out;
}

EvaluatedSample fixture_sample(int p) {
  return parse_sample_csv(read_file(std::string(ELAB_FIXTURE_DIR) + "/parity/sample_p" + std::to_string(p) + ".csv"));
}

}  // namespace

TEST(Registry, CountsAndOrder) {
  EXPECT_EQ(kFeatureRegistry.size(), 55u);
  std::map<FeatureGroup, int> counts;
  for (const auto& f : kFeatureRegistry) {
    ++counts[f.group];
    EXPECT_EQ(f.name.substr(0, group_name(f.group).size()), group_name(f.group));
  }
  EXPECT_EQ(counts[FeatureGroup::ElaMeta], 9);
  EXPECT_EQ(counts[FeatureGroup::ElaDistr], 3);
  EXPECT_EQ(counts[FeatureGroup::ElaLevel], 9);
  EXPECT_EQ(counts[FeatureGroup::Nbc], 5);
  EXPECT_EQ(counts[FeatureGroup::Disp], 16);
  EXPECT_EQ(counts[FeatureGroup::Ic], 5);
  EXPECT_EQ(counts[FeatureGroup::Pca], 8);
  EXPECT_EQ(feature_index("ela_meta.lin_simple.intercept"), 1u);
  EXPECT_THROW(feature_index("ela_meta.nope"), std::invalid_argument);
}

TEST(ElaMeta, ExactLinearModel) {
  const Design d = lhs(100, 2, Bounds{}, 1);
  const auto s = sample_of(d, apply(d, [](auto x) { return 3.0 + 2.0 * x[0] - 5.0 * x[1]; }));
  const auto b = ela_meta(s);
  EXPECT_NEAR(value(b, 0), 1.0, 1e-12);  // adj_r2
  EXPECT_NEAR(value(b, 1), 3.0, 1e-9);   // intercept
  EXPECT_NEAR(value(b, 2), 2.0, 1e-9);
  EXPECT_NEAR(value(b, 3), 5.0, 1e-9);
  EXPECT_NEAR(value(b, 4), 2.5, 1e-9);
}

TEST(ElaMeta, ExactSphere) {
  const Design d = lhs(200, 3, Bounds{}, 2);
  const auto s = sample_of(d, apply(d, [](auto x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }));
  const auto b = ela_meta(s);
  EXPECT_NEAR(value(b, 6), 1.0, 1e-12);  // quad_simple.adj_r2
  EXPECT_NEAR(value(b, 7), 1.0, 1e-9);   // quad_simple.cond
}

TEST(ElaMeta, ConstantObjectiveAllMissing) {
  const Design d = lhs(100, 2, Bounds{}, 3);
  for (const auto& v : ela_meta(sample_of(d, std::vector<double>(100, 4.0)))) EXPECT_FALSE(v.has_value());
}

TEST(ElaMeta, RankDeficientDoesNotThrow) {
  Design d = lhs(60, 3, Bounds{}, 4);
  d.points.col(2) = d.points.col(1);  // duplicated column
  const auto y = apply(d, [](auto x) { return x[0] + x[1]; });
  EXPECT_NO_THROW(ela_meta(sample_of(d, y)));
}

TEST(ElaDistr, NormalDraws) {
  Rng rng(5);
  std::vector<double> y(10000);
  for (auto& v : y) v = rng.normal();
  const Design d = lhs(10000, 1, Bounds{}, 5);
  const auto b = ela_distr(sample_of(d, y));
  EXPECT_NEAR(*b[0], 0.0, 0.1);
  EXPECT_NEAR(*b[1], 0.0, 0.2);
  EXPECT_EQ(*b[2], 1.0);
}

TEST(ElaDistr, BimodalMixture) {
  Rng rng(6);
  std::vector<double> y(1000);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = (i % 2 ? 10.0 : -10.0) + 0.5 * rng.normal();
  const Design d = lhs(1000, 1, Bounds{}, 6);
  EXPECT_EQ(*ela_distr(sample_of(d, y))[2], 2.0);
}

TEST(ElaDistr, ConstantMissing) {
  const Design d = lhs(50, 2, Bounds{}, 7);
  for (const auto& v : ela_distr(sample_of(d, std::vector<double>(50, 1.0)))) EXPECT_FALSE(v.has_value());
}

TEST(ElaLevel, SeparableLevelSets) {
  const Design d = lhs(1000, 10, Bounds{}, 8);
  Rng rng(8);
  const auto b = ela_level(sample_of(d, apply(d, [](auto x) { return x[0]; })), rng);
  EXPECT_LE(*b[6], 0.02);  // mmce_lda_50
}

TEST(ElaLevel, NoiseGivesMajorityError) {
  double sum = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Design d = lhs(1000, 10, Bounds{}, 100 + seed);
    Rng rng(seed);
    sum += *ela_level(sample_of(d, noise(1000, 200 + seed)), rng)[0];  // mmce_lda_10
  }
  EXPECT_NEAR(sum / 50, 0.10, 0.03);
}

TEST(ElaLevel, ConstantMissing) {
  const Design d = lhs(200, 3, Bounds{}, 9);
  Rng rng(9);
  for (const auto& v : ela_level(sample_of(d, std::vector<double>(200, 2.0)), rng)) EXPECT_FALSE(v.has_value());
}

TEST(ElaLevel, ErrorsWithinUnitInterval) {
  const Design d = lhs(1000, 10, Bounds{}, 10);
  const auto y = apply(d, [](auto x) { return evaluate(ProblemId::Rastrigin, x.size(), x); });
  Rng rng(10);
  const auto b = ela_level(sample_of(d, y), rng);
  for (std::size_t q = 0; q < 3; ++q)
    for (std::size_t k = 0; k < 2; ++k) {
      ASSERT_TRUE(b[3 * q + k]);
      EXPECT_GE(*b[3 * q + k], 0.0);
      EXPECT_LE(*b[3 * q + k], 1.0);
    }
}

TEST(Nbc, UnitLine) {
  PointMatrix x(10, 1);
  std::vector<double> y(10);
  for (int i = 0; i < 10; ++i) x(i, 0) = y[static_cast<std::size_t>(i)] = i + 1.0;
  const auto s = make_sample(x, y);
  const detail::DistanceMatrix dist(s.design);
  EXPECT_DOUBLE_EQ(*nbc(s, dist)[1], 1.0);  // mean_ratio
}

TEST(Nbc, TwoPointsCorrelationsMissing) {
  PointMatrix x(2, 1);
  x << 0.0, 1.0;
  const auto s = make_sample(x, {0.0, 1.0});
  const detail::DistanceMatrix dist(s.design);
  const auto b = nbc(s, dist);
  EXPECT_FALSE(b[2].has_value());
  EXPECT_FALSE(b[4].has_value());
}

TEST(Disp, TiedObjectiveSelectsEverything) {
  const Design d = lhs(100, 3, Bounds{}, 11);
  const auto s = sample_of(d, std::vector<double>(100, 5.0));
  const detail::DistanceMatrix dist(s.design);
  const auto b = disp(s, dist);
  for (std::size_t q = 0; q < 4; ++q) {
    EXPECT_DOUBLE_EQ(*b[q], 1.0);
    EXPECT_DOUBLE_EQ(*b[4 + q], 1.0);
    EXPECT_DOUBLE_EQ(*b[8 + q], 0.0);
    EXPECT_DOUBLE_EQ(*b[12 + q], 0.0);
  }
}

TEST(Disp, SphereConcentratesBestPoints) {
  const Design d = lhs(1000, 10, Bounds{}, 12);
  const auto s = sample_of(d, apply(d, [](auto x) {
                             double r = 0;
                             for (double v : x) r += v * v;
                             return r;
                           }));
  const detail::DistanceMatrix dist(s.design);
  EXPECT_LT(*disp(s, dist)[0], 1.0);
}

TEST(Disp, NoiseRatioNearOne) {
  double sum = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Design d = lhs(400, 5, Bounds{}, 300 + seed);
    const auto s = sample_of(d, noise(400, 400 + seed));
    const detail::DistanceMatrix dist(s.design);
    sum += *disp(s, dist)[3];  // ratio_mean_25
  }
  EXPECT_NEAR(sum / 50, 1.0, 0.1);
}

TEST(Disp, TooFewElitesMissing) {
  const Design d = lhs(20, 2, Bounds{}, 13);
  const auto s = sample_of(d, noise(20, 13));
  const detail::DistanceMatrix dist(s.design);
  const auto b = disp(s, dist);  // 2% of 20 points selects a single point
  EXPECT_FALSE(b[0].has_value());
  EXPECT_FALSE(b[12].has_value());
}

TEST(Ic, ConstantObjective) {
  const Design d = lhs(100, 3, Bounds{}, 14);
  const auto s = sample_of(d, std::vector<double>(100, 1.0));
  const detail::DistanceMatrix dist(s.design);
  const auto b = ic(s, dist);
  EXPECT_EQ(*b[0], 0.0);
  EXPECT_EQ(*b[4], 0.0);
  EXPECT_FALSE(b[1].has_value());
  EXPECT_FALSE(b[2].has_value());
  EXPECT_FALSE(b[3].has_value());
}

TEST(Ic, UniformSlopesHaveNoEntropy) {
  PointMatrix x(20, 1);
  std::vector<double> y(20);
  for (int i = 0; i < 20; ++i) x(i, 0) = y[static_cast<std::size_t>(i)] = i;
  const auto s = make_sample(x, y);
  const detail::DistanceMatrix dist(s.design);
  EXPECT_EQ(*ic(s, dist)[0], 0.0);
}

TEST(Pca, RankOneDesign) {
  PointMatrix x(200, 10);
  Rng rng(15);
  for (Eigen::Index i = 0; i < 200; ++i) {
    const double t = rng.uniform(-1, 1);
    for (Eigen::Index j = 0; j < 10; ++j) x(i, j) = t * (j + 1);
  }
  const auto b = pca(make_sample(x, noise(200, 15)));
  EXPECT_DOUBLE_EQ(*b[0], 0.1);
  EXPECT_GE(*b[4], 0.999);
}

TEST(Pca, IsotropicDesign) {
  const Design d = lhs(1000, 10, Bounds{}, 16);
  EXPECT_DOUBLE_EQ(*pca(sample_of(d, noise(1000, 16)))[0], 0.9);
}

TEST(ComputeAll, FullVectorAndDeterminism) {
  const Design d = lhs(1000, 10, Bounds{}, 17);
  const auto y = apply(d, [](auto x) { return evaluate(ProblemId::Levy, x.size(), x); });
  const auto s = sample_of(d, y);
  const auto a = compute_all(s, 99), b = compute_all(s, 99);
  EXPECT_EQ(a.values.size(), 55u);
  EXPECT_EQ(a.missing_count(), 0u);
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    EXPECT_TRUE(bit_equal(a[f], b[f])) << kFeatureRegistry[f].name;
    if (a[f]) {
      EXPECT_TRUE(std::isfinite(*a[f]));
    }
  }
}

TEST(ComputeAll, ConstantObjective) {
  const Design d = lhs(200, 3, Bounds{}, 18);
  const auto fv = compute_all(sample_of(d, std::vector<double>(200, 3.0)), 1);
  EXPECT_GE(fv.missing_count(), 21u);
  for (auto name : kDesignOnlyFeatures) EXPECT_TRUE(fv.at(name).has_value()) << name;
}

TEST(Invariance, DesignOnlyPcaIdenticalAcrossInstances) {
  ExperimentConfig c = ExperimentConfig::desk();
  const Design d = lhs(1000, 10, Bounds{}, design_seed(c.base_seed, 0));
  std::optional<FeatureVector> ref;
  for (int p : {1, 4})
    for (const auto& desc : enumerate_instances(problem_from_int(p), c)) {
      if (desc.instance_index % 4 != 0 && desc.kind() != TransformKind::XScaling) continue;
      const auto fv = compute_all(evaluate_design(desc, d, 0), 1);
      if (!ref) ref = fv;
      for (auto name : kDesignOnlyFeatures) EXPECT_TRUE(bit_equal(fv.at(name), ref->at(name))) << name;
    }
}

TEST(Invariance, ObjectiveTranslation) {
  const Design d = lhs(1000, 10, Bounds{}, 19);
  for (int p = 1; p <= 5; ++p) {
    InstanceDescriptor base;
    base.problem = problem_from_int(p);
    base.dimension = 10;
    InstanceDescriptor shifted = base;
    const double dy = 1000.0;
    shifted.spec = YTranslation{dy};
    const auto a = compute_all(evaluate_design(base, d, 0), 5);
    const auto b = compute_all(evaluate_design(shifted, d, 0), 5);
    expect_rel(FeatureValue(*a.at("ela_meta.lin_simple.intercept") + dy), b.at("ela_meta.lin_simple.intercept"),
               1e-9, "intercept");
    for (std::size_t f : {0u, 2u, 3u, 4u, 5u, 6u, 8u}) expect_rel(a[f], b[f], 1e-9, kFeatureRegistry[f].name);
    for (std::size_t f = kDispOffset; f < kDispOffset + kDispCount; ++f)
      EXPECT_TRUE(bit_equal(a[f], b[f])) << kFeatureRegistry[f].name;
    for (std::size_t f = kNbcOffset; f < kNbcOffset + 4; ++f)
      EXPECT_TRUE(bit_equal(a[f], b[f])) << kFeatureRegistry[f].name;
  }
}

TEST(Invariance, ObjectiveScaling) {
  const Design d = lhs(1000, 10, Bounds{}, 20);
  for (int p = 1; p <= 5; ++p)
    for (int e : {-6, 1, 6}) {
      InstanceDescriptor base;
      base.problem = problem_from_int(p);
      base.dimension = 10;
      InstanceDescriptor scaled = base;
      scaled.spec = YScaling{e};
      const double k = std::ldexp(1.0, e);
      const auto a = compute_all(evaluate_design(base, d, 0), 5);
      const auto b = compute_all(evaluate_design(scaled, d, 0), 5);
      for (std::size_t f : {1u, 2u, 3u})
        expect_rel(FeatureValue(*a[f] * k), b[f], 1e-9, kFeatureRegistry[f].name);
      for (std::size_t f = kElaLevelOffset; f < kElaLevelOffset + kElaLevelCount; ++f)
        EXPECT_TRUE(bit_equal(a[f], b[f])) << kFeatureRegistry[f].name;
      for (std::size_t f = kDispOffset; f < kDispOffset + kDispCount; ++f)
        EXPECT_TRUE(bit_equal(a[f], b[f])) << kFeatureRegistry[f].name;
      for (std::size_t f = kNbcOffset; f < kNbcOffset + 4; ++f)
        EXPECT_TRUE(bit_equal(a[f], b[f])) << kFeatureRegistry[f].name;
      expect_rel(a.at("ela_distr.skewness"), b.at("ela_distr.skewness"), 1e-12, "skewness");
      expect_rel(a.at("ela_distr.kurtosis"), b.at("ela_distr.kurtosis"), 1e-12, "kurtosis");
    }
}

TEST(Parity, DeterministicGroupsMatchReference) {
  for (int p = 1; p <= 5; ++p) {
    const auto expected = read_expected(p);
    const auto fv = compute_all(fixture_sample(p), 1);
    int checked = 0;
    for (const auto& [name, ref] : expected) {
      const auto g = kFeatureRegistry[feature_index(name)].group;
      const bool deterministic = g == FeatureGroup::ElaMeta || g == FeatureGroup::Disp || g == FeatureGroup::Nbc ||
                                 g == FeatureGroup::Pca || name == "ela_distr.skewness" ||
                                 name == "ela_distr.kurtosis";
      const bool ic_checked = name == "ic.h_max" || name == "ic.m0";
      if (!deterministic && !ic_checked) continue;
      ++checked;
      if (!ref) {
        EXPECT_FALSE(fv.at(name).has_value()) << "p" << p << " " << name;
        continue;
      }
      expect_rel(fv.at(name), ref, ic_checked ? 1e-4 : 1e-6, "p" + std::to_string(p) + " " + name);
    }
    EXPECT_EQ(checked, 9 + 2 + 16 + 5 + 8 + 2);
  }
}
