#pragma once

// Principal-component features of the design (x) and of the design augmented
// with the objective column (init).

#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "elab/features/common.hpp"
#include "elab/features/registry.hpp"

namespace elab {

namespace detail {

inline constexpr double kPcaExplainedTarget = 0.9;

/// (components needed for 90% explained variance / columns, share of PC1) of
/// the covariance or correlation matrix of `data`. Empty on zero variance.
inline std::optional<std::pair<double, double>> pca_summary(const Eigen::MatrixXd& data, bool correlation) {
  const Eigen::Index n = data.rows(), p = data.cols();
  const Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  if (correlation) {
    const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
    if ((sd.array() <= 0.0).any()) return std::nullopt;
    cov = sd.cwiseInverse().asDiagonal() * cov * sd.cwiseInverse().asDiagonal();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) return std::nullopt;
  const Eigen::VectorXd ev = eig.eigenvalues().reverse();  // descending
  const double total = ev.sum();
  if (!(total > 0.0)) return std::nullopt;
  double cum = 0.0;
  Eigen::Index k = p;
  for (Eigen::Index i = 0; i < p; ++i) {
    cum += ev(i);
    if (cum / total >= kPcaExplainedTarget) {
      k = i + 1;
      break;
    }
  }
  return std::pair{static_cast<double>(k) / static_cast<double>(p), ev(0) / total};
}

}  // namespace detail

/// expl_var.{cov_x, cor_x, cov_init, cor_init} followed by
/// expl_var_PC1.{cov_x, cor_x, cov_init, cor_init}. The x variants read the
/// design only.
inline FeatureBlock<kPcaCount> pca(const EvaluatedSample& s) {
  FeatureBlock<kPcaCount> out{};
  const Eigen::Index m = s.design.points.rows(), d = s.design.points.cols();
  if (m < 2) return out;
  const Eigen::MatrixXd x = s.design.points;
  Eigen::MatrixXd init(m, d + 1);
  init.leftCols(d) = x;
  init.col(d) = Eigen::Map<const Eigen::VectorXd>(s.values.data(), m);

  const std::optional<std::pair<double, double>> summaries[4] = {
      detail::pca_summary(x, false), detail::pca_summary(x, true),
      detail::pca_summary(init, false), detail::pca_summary(init, true)};
  for (int v = 0; v < 4; ++v) {
    if (!summaries[v]) continue;
    out[v] = summaries[v]->first;
    out[4 + v] = summaries[v]->second;
  }
  return out;
}

}  // namespace elab
