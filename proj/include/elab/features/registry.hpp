#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace elab {

enum class FeatureGroup { ElaMeta, ElaDistr, ElaLevel, Nbc, Disp, Ic, Pca };

inline constexpr std::string_view group_name(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::ElaMeta: return "ela_meta";
    case FeatureGroup::ElaDistr: return "ela_distr";
    case FeatureGroup::ElaLevel: return "ela_level";
    case FeatureGroup::Nbc: return "nbc";
    case FeatureGroup::Disp: return "disp";
    case FeatureGroup::Ic: return "ic";
    case FeatureGroup::Pca: return "pca";
  }
  return "";
}

struct FeatureName {
  FeatureGroup group;
  std::string_view name;
};

inline constexpr std::size_t kNumFeatures = 55;

// clang-format off
inline constexpr std::array<FeatureName, kNumFeatures> kFeatureRegistry{{
    {FeatureGroup::ElaMeta, "ela_meta.lin_simple.adj_r2"},
    {FeatureGroup::ElaMeta, "ela_meta.lin_simple.intercept"},
    {FeatureGroup::ElaMeta, "ela_meta.lin_simple.coef.min"},
    {FeatureGroup::ElaMeta, "ela_meta.lin_simple.coef.max"},
    {FeatureGroup::ElaMeta, "ela_meta.lin_simple.coef.max_by_min"},
    {FeatureGroup::ElaMeta, "ela_meta.lin_w_interact.adj_r2"},
    {FeatureGroup::ElaMeta, "ela_meta.quad_simple.adj_r2"},
    {FeatureGroup::ElaMeta, "ela_meta.quad_simple.cond"},
    {FeatureGroup::ElaMeta, "ela_meta.quad_w_interact.adj_r2"},

    {FeatureGroup::ElaDistr, "ela_distr.skewness"},
    {FeatureGroup::ElaDistr, "ela_distr.kurtosis"},
    {FeatureGroup::ElaDistr, "ela_distr.number_of_peaks"},

    {FeatureGroup::ElaLevel, "ela_level.mmce_lda_10"},
    {FeatureGroup::ElaLevel, "ela_level.mmce_qda_10"},
    {FeatureGroup::ElaLevel, "ela_level.lda_qda_10"},
    {FeatureGroup::ElaLevel, "ela_level.mmce_lda_25"},
    {FeatureGroup::ElaLevel, "ela_level.mmce_qda_25"},
    {FeatureGroup::ElaLevel, "ela_level.lda_qda_25"},
    {FeatureGroup::ElaLevel, "ela_level.mmce_lda_50"},
    {FeatureGroup::ElaLevel, "ela_level.mmce_qda_50"},
    {FeatureGroup::ElaLevel, "ela_level.lda_qda_50"},

    {FeatureGroup::Nbc, "nbc.nn_nb.sd_ratio"},
    {FeatureGroup::Nbc, "nbc.nn_nb.mean_ratio"},
    {FeatureGroup::Nbc, "nbc.nn_nb.cor"},
    {FeatureGroup::Nbc, "nbc.dist_ratio.coeff_var"},
    {FeatureGroup::Nbc, "nbc.nb_fitness.cor"},

    {FeatureGroup::Disp, "disp.ratio_mean_02"},
    {FeatureGroup::Disp, "disp.ratio_mean_05"},
    {FeatureGroup::Disp, "disp.ratio_mean_10"},
    {FeatureGroup::Disp, "disp.ratio_mean_25"},
    {FeatureGroup::Disp, "disp.ratio_median_02"},
    {FeatureGroup::Disp, "disp.ratio_median_05"},
    {FeatureGroup::Disp, "disp.ratio_median_10"},
    {FeatureGroup::Disp, "disp.ratio_median_25"},
    {FeatureGroup::Disp, "disp.diff_mean_02"},
    {FeatureGroup::Disp, "disp.diff_mean_05"},
    {FeatureGroup::Disp, "disp.diff_mean_10"},
    {FeatureGroup::Disp, "disp.diff_mean_25"},
    {FeatureGroup::Disp, "disp.diff_median_02"},
    {FeatureGroup::Disp, "disp.diff_median_05"},
    {FeatureGroup::Disp, "disp.diff_median_10"},
    {FeatureGroup::Disp, "disp.diff_median_25"},

    {FeatureGroup::Ic, "ic.h_max"},
    {FeatureGroup::Ic, "ic.eps_s"},
    {FeatureGroup::Ic, "ic.eps_max"},
    {FeatureGroup::Ic, "ic.eps_ratio"},
    {FeatureGroup::Ic, "ic.m0"},

    {FeatureGroup::Pca, "pca.expl_var.cov_x"},
    {FeatureGroup::Pca, "pca.expl_var.cor_x"},
    {FeatureGroup::Pca, "pca.expl_var.cov_init"},
    {FeatureGroup::Pca, "pca.expl_var.cor_init"},
    {FeatureGroup::Pca, "pca.expl_var_PC1.cov_x"},
    {FeatureGroup::Pca, "pca.expl_var_PC1.cor_x"},
    {FeatureGroup::Pca, "pca.expl_var_PC1.cov_init"},
    {FeatureGroup::Pca, "pca.expl_var_PC1.cor_init"},
}};
// clang-format on

/// First registry slot and size of each group.
inline constexpr std::size_t kElaMetaOffset = 0, kElaMetaCount = 9;
inline constexpr std::size_t kElaDistrOffset = 9, kElaDistrCount = 3;
inline constexpr std::size_t kElaLevelOffset = 12, kElaLevelCount = 9;
inline constexpr std::size_t kNbcOffset = 21, kNbcCount = 5;
inline constexpr std::size_t kDispOffset = 26, kDispCount = 16;
inline constexpr std::size_t kIcOffset = 42, kIcCount = 5;
inline constexpr std::size_t kPcaOffset = 47, kPcaCount = 8;

inline std::size_t feature_index(std::string_view name) {
  for (std::size_t i = 0; i < kNumFeatures; ++i)
    if (kFeatureRegistry[i].name == name) return i;
  throw std::invalid_argument("unknown feature '" + std::string(name) + "'");
}

/// The four pca features computed from the design alone.
inline constexpr std::array<std::string_view, 4> kDesignOnlyFeatures{
    "pca.expl_var.cov_x", "pca.expl_var.cor_x", "pca.expl_var_PC1.cov_x",
    "pca.expl_var_PC1.cor_x"};

using FeatureValue = std::optional<double>;

template <std::size_t N>
using FeatureBlock = std::array<FeatureValue, N>;

}  // namespace elab
