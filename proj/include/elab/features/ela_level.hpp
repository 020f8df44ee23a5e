#pragma once

// Level-set features: cross-validated misclassification error of linear and
// quadratic discriminant analysis separating the points below an objective
// quantile from the rest.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "elab/features/common.hpp"
#include "elab/features/registry.hpp"
#include "elab/rng.hpp"

namespace elab {

namespace detail {

inline constexpr std::array<double, 3> kLevelQuantiles{0.10, 0.25, 0.50};
inline constexpr int kLevelFolds = 10;

/// Cholesky factor of a covariance matrix, ridge-regularized by
/// 1e-8 trace / d when the matrix is close to singular.
inline Eigen::LLT<Eigen::MatrixXd> regularized_cholesky(Eigen::MatrixXd cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success && llt.rcond() > 1e-10) return llt;
  const double ridge = std::max(1e-8 * cov.trace() / static_cast<double>(cov.rows()),
                                std::numeric_limits<double>::min());
  cov.diagonal().array() += ridge;
  return Eigen::LLT<Eigen::MatrixXd>(cov);
}

struct ClassStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd scatter;  // sum of centered outer products
  std::size_t count = 0;
};

inline ClassStats class_stats(const PointMatrix& x, const std::vector<std::size_t>& rows) {
  const Eigen::Index d = x.cols();
  ClassStats st;
  st.count = rows.size();
  st.mean = Eigen::VectorXd::Zero(d);
  for (auto r : rows) st.mean += x.row(static_cast<Eigen::Index>(r)).transpose();
  st.mean /= static_cast<double>(rows.size());
  Eigen::MatrixXd centered(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i)
    centered.row(static_cast<Eigen::Index>(i)) =
        x.row(static_cast<Eigen::Index>(rows[i])) - st.mean.transpose();
  st.scatter = centered.transpose() * centered;
  return st;
}

struct FoldErrors {
  double lda = 0.0;
  double qda = 0.0;
};

/// Trains both classifiers on `train` and returns their error rate on `test`.
/// Empty when a class is missing (or has a single member) in the training set.
inline std::optional<FoldErrors> discriminant_fold(const PointMatrix& x, const std::vector<int>& label,
                                                   const std::vector<std::size_t>& train,
                                                   const std::vector<std::size_t>& test) {
  std::array<std::vector<std::size_t>, 2> by_class;
  for (auto r : train) by_class[static_cast<std::size_t>(label[r])].push_back(r);
  if (by_class[0].size() < 2 || by_class[1].size() < 2) return std::nullopt;

  const std::array<ClassStats, 2> st{class_stats(x, by_class[0]), class_stats(x, by_class[1])};
  const double n = static_cast<double>(train.size());
  const std::array<double, 2> log_prior{std::log(static_cast<double>(st[0].count) / n),
                                        std::log(static_cast<double>(st[1].count) / n)};

  const auto pooled = regularized_cholesky((st[0].scatter + st[1].scatter) / (n - 2.0));
  std::array<Eigen::VectorXd, 2> lda_w;
  std::array<double, 2> lda_b{};
  for (int k = 0; k < 2; ++k) {
    lda_w[k] = pooled.solve(st[k].mean);
    lda_b[k] = -0.5 * st[k].mean.dot(lda_w[k]) + log_prior[k];
  }

  std::array<Eigen::LLT<Eigen::MatrixXd>, 2> qda_chol{
      regularized_cholesky(st[0].scatter / static_cast<double>(st[0].count - 1)),
      regularized_cholesky(st[1].scatter / static_cast<double>(st[1].count - 1))};
  std::array<double, 2> qda_b{};
  for (int k = 0; k < 2; ++k) {
    const Eigen::MatrixXd l = qda_chol[k].matrixL();
    qda_b[k] = -l.diagonal().array().log().sum() + log_prior[k];  // -0.5 log det
  }

  std::size_t lda_wrong = 0, qda_wrong = 0;
  for (auto r : test) {
    const Eigen::VectorXd xr = x.row(static_cast<Eigen::Index>(r)).transpose();
    const double l0 = xr.dot(lda_w[0]) + lda_b[0];
    const double l1 = xr.dot(lda_w[1]) + lda_b[1];
    if ((l1 > l0 ? 1 : 0) != label[r]) ++lda_wrong;

    std::array<double, 2> q{};
    for (int k = 0; k < 2; ++k) {
      const Eigen::VectorXd z = qda_chol[k].matrixL().solve(xr - st[k].mean);
      q[k] = -0.5 * z.squaredNorm() + qda_b[k];
    }
    if ((q[1] > q[0] ? 1 : 0) != label[r]) ++qda_wrong;
  }
  const double nt = static_cast<double>(test.size());
  return FoldErrors{static_cast<double>(lda_wrong) / nt, static_cast<double>(qda_wrong) / nt};
}

}  // namespace detail

/// mmce_lda_q, mmce_qda_q, lda_qda_q for q in {10, 25, 50} percent. Class 1 is
/// y <= quantile_q(y); stratified 10-fold assignment is drawn from `rng`.
inline FeatureBlock<kElaLevelCount> ela_level(const EvaluatedSample& s, Rng& rng) {
  FeatureBlock<kElaLevelCount> out{};
  const auto& y = s.values;
  const std::size_t m = y.size();
  if (m < 4 || detail::all_equal(y)) return out;
  const PointMatrix& x = s.design.points;

  for (std::size_t qi = 0; qi < detail::kLevelQuantiles.size(); ++qi) {
    const double threshold = detail::quantile_linear(y, detail::kLevelQuantiles[qi]);
    std::vector<int> label(m);
    std::array<std::vector<std::size_t>, 2> members;
    for (std::size_t i = 0; i < m; ++i) {
      label[i] = y[i] <= threshold ? 1 : 0;
      members[static_cast<std::size_t>(label[i])].push_back(i);
    }
    // The stream is consumed identically whether or not the quantile is usable.
    std::vector<int> fold(m);
    for (auto& cls : members) {
      rng.shuffle(std::span<std::size_t>(cls));
      for (std::size_t k = 0; k < cls.size(); ++k)
        fold[cls[k]] = static_cast<int>(k % detail::kLevelFolds);
    }
    if (members[0].empty() || members[1].empty()) continue;

    double lda_sum = 0.0, qda_sum = 0.0;
    int used = 0;
    bool ok = true;
    for (int f = 0; f < detail::kLevelFolds && ok; ++f) {
      std::vector<std::size_t> train, test;
      for (std::size_t i = 0; i < m; ++i) (fold[i] == f ? test : train).push_back(i);
      if (test.empty()) continue;
      const auto err = detail::discriminant_fold(x, label, train, test);
      if (!err) {
        ok = false;
        break;
      }
      lda_sum += err->lda;
      qda_sum += err->qda;
      ++used;
    }
    if (!ok || used == 0) continue;
    const double lda = lda_sum / used, qda = qda_sum / used;
    out[3 * qi] = lda;
    out[3 * qi + 1] = qda;
    if (qda > 0.0) out[3 * qi + 2] = lda / qda;
  }
  return out;
}

}  // namespace elab
