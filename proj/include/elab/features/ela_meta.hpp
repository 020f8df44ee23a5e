#pragma once

// Meta-model features: least-squares fits of linear and quadratic models of
// y on x, with and without pairwise interaction terms.

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "elab/features/common.hpp"
#include "elab/features/registry.hpp"

namespace elab {

namespace detail {

struct OlsFit {
  double intercept = 0.0;
  Eigen::VectorXd coef;  // one per predictor column
  double r2 = 0.0;
  double adj_r2 = std::numeric_limits<double>::quiet_NaN();
};

/// Ordinary least squares with an intercept. Columns are centered and
/// norm-scaled before a column-pivoted QR solve, so rank-deficient or badly
/// scaled designs still produce a solution.
inline OlsFit fit_ols(const Eigen::MatrixXd& predictors, const Eigen::VectorXd& y) {
  const Eigen::Index m = predictors.rows();
  const Eigen::Index p = predictors.cols();
  const Eigen::RowVectorXd col_mean = predictors.colwise().mean();
  Eigen::MatrixXd a = predictors.rowwise() - col_mean;
  Eigen::VectorXd scale(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double nrm = a.col(j).norm();
    scale(j) = nrm > 0.0 ? nrm : 1.0;
    a.col(j) /= scale(j);
  }
  const double y_mean = y.mean();
  const Eigen::VectorXd yc = y.array() - y_mean;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::VectorXd beta_scaled = qr.solve(yc);
  const Eigen::VectorXd resid = yc - a * beta_scaled;

  OlsFit fit;
  fit.coef = beta_scaled.array() / scale.array();
  fit.intercept = y_mean - col_mean.dot(fit.coef);
  const double ss_tot = yc.squaredNorm();
  fit.r2 = 1.0 - resid.squaredNorm() / ss_tot;
  if (m - p - 1 > 0)
    fit.adj_r2 = 1.0 - (1.0 - fit.r2) * static_cast<double>(m - 1) / static_cast<double>(m - p - 1);
  return fit;
}

inline Eigen::MatrixXd with_pairwise_products(const Eigen::MatrixXd& base) {
  const Eigen::Index m = base.rows(), c = base.cols();
  Eigen::MatrixXd out(m, c + c * (c - 1) / 2);
  out.leftCols(c) = base;
  Eigen::Index k = c;
  for (Eigen::Index i = 0; i < c; ++i)
    for (Eigen::Index j = i + 1; j < c; ++j) out.col(k++) = base.col(i).cwiseProduct(base.col(j));
  return out;
}

}  // namespace detail

/// lin_simple.{adj_r2, intercept, coef.min, coef.max, coef.max_by_min},
/// lin_w_interact.adj_r2, quad_simple.{adj_r2, cond}, quad_w_interact.adj_r2.
///
/// The interaction model of the quadratic fit multiplies every pair of the
/// 2d columns [x, x^2], matching the reference implementation.
inline FeatureBlock<kElaMetaCount> ela_meta(const EvaluatedSample& s) {
  FeatureBlock<kElaMetaCount> out{};
  if (s.values.size() < 2 || detail::all_equal(s.values)) return out;

  const Eigen::MatrixXd x = s.design.points;
  const Eigen::Index d = x.cols();
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(s.values.data(),
                                                              static_cast<Eigen::Index>(s.values.size()));
  using detail::finite_or_missing;
  auto adj = [](const detail::OlsFit& f) { return finite_or_missing(f.adj_r2); };

  const auto lin = detail::fit_ols(x, y);
  const Eigen::VectorXd lin_abs = lin.coef.cwiseAbs();
  const double cmin = lin_abs.minCoeff(), cmax = lin_abs.maxCoeff();
  out[0] = adj(lin);
  out[1] = finite_or_missing(lin.intercept);
  out[2] = finite_or_missing(cmin);
  out[3] = finite_or_missing(cmax);
  if (cmin > 0.0) out[4] = finite_or_missing(cmax / cmin);

  out[5] = adj(detail::fit_ols(detail::with_pairwise_products(x), y));

  Eigen::MatrixXd quad(x.rows(), 2 * d);
  quad.leftCols(d) = x;
  quad.rightCols(d) = x.array().square().matrix();
  const auto qs = detail::fit_ols(quad, y);
  out[6] = adj(qs);
  const Eigen::VectorXd q_abs = qs.coef.tail(d).cwiseAbs();
  if (q_abs.minCoeff() > 0.0) out[7] = finite_or_missing(q_abs.maxCoeff() / q_abs.minCoeff());

  out[8] = adj(detail::fit_ols(detail::with_pairwise_products(quad), y));
  return out;
}

}  // namespace elab
