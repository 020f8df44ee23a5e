#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "elab/features/features.hpp"

namespace elab {

/// Linear 2-D projection onto the two leading principal axes of a fit table.
/// Missing entries are imputed with the fit mean of their feature.
class Projection2D {
 public:
  static Projection2D fit(std::span<const FeatureVector> rows) {
    if (rows.size() < 2) throw std::invalid_argument("project_2d: need at least 2 fit rows");
    const auto p = static_cast<Eigen::Index>(kNumFeatures);
    Projection2D proj;
    proj.mean_ = Eigen::VectorXd::Zero(p);
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      double s = 0.0;
      std::size_t n = 0;
      for (const auto& r : rows)
        if (r.values[f]) {
          s += *r.values[f];
          ++n;
        }
      proj.mean_(static_cast<Eigen::Index>(f)) = n > 0 ? s / static_cast<double>(n) : 0.0;
    }

    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), p);
    for (std::size_t i = 0; i < rows.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = proj.centered(rows[i]);
    const Eigen::MatrixXd cov = x.transpose() * x / static_cast<double>(rows.size() - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw std::runtime_error("project_2d: eigendecomposition failed");
    proj.axes_.resize(p, 2);
    for (int k = 0; k < 2; ++k) {
      Eigen::VectorXd v = eig.eigenvectors().col(p - 1 - k);
      // sign convention: largest-magnitude loading is positive
      Eigen::Index arg = 0;
      v.cwiseAbs().maxCoeff(&arg);
      if (v(arg) < 0.0) v = -v;
      proj.axes_.col(k) = v;
    }
    return proj;
  }

  std::pair<double, double> apply(const FeatureVector& row) const {
    const Eigen::RowVectorXd c = centered(row);
    return {c.dot(axes_.col(0)), c.dot(axes_.col(1))};
  }

  std::vector<std::pair<double, double>> apply(std::span<const FeatureVector> rows) const {
    std::vector<std::pair<double, double>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(apply(r));
    return out;
  }

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& axes() const { return axes_; }

 private:
  Eigen::RowVectorXd centered(const FeatureVector& row) const {
    Eigen::RowVectorXd c(mean_.size());
    for (Eigen::Index f = 0; f < mean_.size(); ++f) {
      const auto& v = row.values[static_cast<std::size_t>(f)];
      c(f) = v ? *v - mean_(f) : 0.0;
    }
    return c;
  }

  Eigen::VectorXd mean_;
  Eigen::MatrixXd axes_;
};

/// Fits on the rows of original (identity) instances, applies to every row.
inline std::vector<std::pair<double, double>> project_2d(std::span<const FeatureVector> all,
                                                         std::span<const FeatureVector> originals) {
  return Projection2D::fit(originals).apply(all);
}

}  // namespace elab
