#pragma once

// Transformed problem instances: search-space translation, scaling and
// rotation, plus objective-value translation and scaling.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "elab/config.hpp"
#include "elab/problems.hpp"
#include "elab/rng.hpp"

namespace elab {

enum class TransformKind : int {
  Identity = 0,
  XTranslation = 1,
  XScaling = 2,
  XRotation = 3,
  YTranslation = 4,
  YScaling = 5,
};

inline constexpr std::string_view kind_name(TransformKind k) {
  switch (k) {
    case TransformKind::Identity: return "identity";
    case TransformKind::XTranslation: return "x_translation";
    case TransformKind::XScaling: return "x_scaling";
    case TransformKind::XRotation: return "x_rotation";
    case TransformKind::YTranslation: return "y_translation";
    case TransformKind::YScaling: return "y_scaling";
  }
  return "unknown";
}

inline TransformKind kind_from_name(std::string_view s) {
  for (int k = 0; k <= 5; ++k)
    if (kind_name(static_cast<TransformKind>(k)) == s) return static_cast<TransformKind>(k);
  throw std::invalid_argument("unknown transform kind '" + std::string(s) + "'");
}

inline constexpr TransformKind kAllTransformedKinds[] = {
    TransformKind::XTranslation, TransformKind::XScaling, TransformKind::XRotation,
    TransformKind::YTranslation, TransformKind::YScaling};

struct IdentityTransform {};

struct XTranslation {
  double limit = 0.0;           // d_x the offset was drawn with
  std::vector<double> offset;   // evaluated as f(x + offset)
};

struct XScaling {
  int exponent = 0;  // k_x = 2^exponent
  double factor() const { return std::ldexp(1.0, exponent); }
};

struct XRotation {
  int index = 0;  // 1-based rotation number
  Eigen::MatrixXd matrix;
};

struct YTranslation {
  double offset = 0.0;
};

struct YScaling {
  int exponent = 0;  // k_y = 2^exponent
  double factor() const { return std::ldexp(1.0, exponent); }
};

using TransformSpec =
    std::variant<IdentityTransform, XTranslation, XScaling, XRotation, YTranslation, YScaling>;

inline TransformKind kind_of(const TransformSpec& spec) {
  return static_cast<TransformKind>(spec.index());
}

/// The generating parameter of a transform: translation limit, scaling
/// exponent, rotation index, objective offset or objective exponent.
inline double level_of(const TransformSpec& spec) {
  struct Visitor {
    double operator()(const IdentityTransform&) const { return 0.0; }
    double operator()(const XTranslation& t) const { return t.limit; }
    double operator()(const XScaling& t) const { return t.exponent; }
    double operator()(const XRotation& t) const { return t.index; }
    double operator()(const YTranslation& t) const { return t.offset; }
    double operator()(const YScaling& t) const { return t.exponent; }
  };
  return std::visit(Visitor{}, spec);
}

struct InstanceDescriptor {
  ProblemId problem = ProblemId::Zakharov;
  std::size_t dimension = 0;
  int instance_index = 0;  // 0 is the original problem
  TransformSpec spec = IdentityTransform{};
  std::uint64_t seed = 0;

  TransformKind kind() const { return kind_of(spec); }
  double level() const { return level_of(spec); }
};

/// Haar-distributed proper rotation: Gaussian matrix, QR, sign-fix of the
/// R-factor diagonal, then one column flip if the determinant is -1.
inline Eigen::MatrixXd random_orthogonal(std::size_t d, Rng& rng) {
  if (d == 0) throw std::invalid_argument("random_orthogonal: d must be >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

inline std::vector<double> sample_translation(std::size_t d, double limit, Rng& rng) {
  if (!(limit >= 0.0)) throw std::invalid_argument("sample_translation: limit must be >= 0");
  std::vector<double> t(d);
  for (auto& v : t) v = rng.uniform(-limit, limit);
  return t;
}

/// Evaluates the transformed instance at x, reusing `scratch` for the
/// transformed point.
inline double instance_evaluate(const InstanceDescriptor& desc, std::span<const double> x,
                                std::vector<double>& scratch) {
  const std::size_t d = desc.dimension;
  if (x.size() != d)
    throw std::invalid_argument("instance_evaluate: dimension mismatch: expected " +
                                std::to_string(d) + ", got " + std::to_string(x.size()));
  switch (desc.kind()) {
    case TransformKind::Identity:
      return evaluate(desc.problem, d, x);
    case TransformKind::XTranslation: {
      const auto& t = std::get<XTranslation>(desc.spec);
      scratch.resize(d);
      for (std::size_t i = 0; i < d; ++i) scratch[i] = x[i] + t.offset[i];
      return evaluate(desc.problem, d, scratch);
    }
    case TransformKind::XScaling: {
      const double k = std::get<XScaling>(desc.spec).factor();
      scratch.resize(d);
      for (std::size_t i = 0; i < d; ++i) scratch[i] = k * x[i];
      return evaluate(desc.problem, d, scratch);
    }
    case TransformKind::XRotation: {
      const auto& r = std::get<XRotation>(desc.spec).matrix;
      scratch.assign(d, 0.0);
      for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j)
          acc += r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * x[j];
        scratch[i] = acc;
      }
      return evaluate(desc.problem, d, scratch);
    }
    case TransformKind::YTranslation:
      return evaluate(desc.problem, d, x) + std::get<YTranslation>(desc.spec).offset;
    case TransformKind::YScaling:
      return std::get<YScaling>(desc.spec).factor() * evaluate(desc.problem, d, x);
  }
  throw std::logic_error("instance_evaluate: unhandled transform kind");
}

inline double instance_evaluate(const InstanceDescriptor& desc, std::span<const double> x) {
  std::vector<double> scratch;
  return instance_evaluate(desc, x, scratch);
}

/// Seed of the stream that generates the parameters of one transform.
inline std::uint64_t transform_seed(std::uint64_t base_seed, ProblemId problem, TransformKind kind,
                                    std::uint64_t index) {
  return mix_seed({base_seed, static_cast<std::uint64_t>(to_int(problem)),
                   static_cast<std::uint64_t>(kind), index});
}

/// All instances of one problem in fixed order: identity, translations
/// (limit-major), rotations, search-space scalings, objective offsets,
/// objective scalings. Each transform draws from its own derived stream.
inline std::vector<InstanceDescriptor> enumerate_instances(ProblemId problem,
                                                           const ExperimentConfig& config) {
  if (config.dimension < 1) throw std::invalid_argument("enumerate_instances: dimension must be >= 1");
  const bool empty = (config.translation_limits.empty() || config.vectors_per_limit == 0) &&
                     config.rotations == 0 && config.scaling_exponents.empty() &&
                     config.objective_offsets.empty() && config.objective_exponents.empty();
  if (empty) throw std::invalid_argument("enumerate_instances: every parameter grid is empty");
  check_dimension(problem, static_cast<std::size_t>(config.dimension));

  const auto d = static_cast<std::size_t>(config.dimension);
  const auto base = config.base_seed;
  std::vector<InstanceDescriptor> out;
  out.reserve(static_cast<std::size_t>(config.instances_per_problem()));
  auto push = [&](TransformSpec spec, std::uint64_t seed) {
    InstanceDescriptor desc;
    desc.problem = problem;
    desc.dimension = d;
    desc.instance_index = static_cast<int>(out.size());
    desc.spec = std::move(spec);
    desc.seed = seed;
    out.push_back(std::move(desc));
  };

  push(IdentityTransform{}, transform_seed(base, problem, TransformKind::Identity, 0));

  std::uint64_t k = 0;
  for (double limit : config.translation_limits) {
    if (!(limit >= 0.0)) throw std::invalid_argument("enumerate_instances: negative translation limit");
    for (int v = 0; v < config.vectors_per_limit; ++v, ++k) {
      const auto seed = transform_seed(base, problem, TransformKind::XTranslation, k);
      Rng rng(seed);
      push(XTranslation{limit, sample_translation(d, limit, rng)}, seed);
    }
  }
  for (int r = 0; r < config.rotations; ++r) {
    const auto seed = transform_seed(base, problem, TransformKind::XRotation, static_cast<std::uint64_t>(r));
    Rng rng(seed);
    push(XRotation{r + 1, random_orthogonal(d, rng)}, seed);
  }
  k = 0;
  for (int e : config.scaling_exponents)
    push(XScaling{e}, transform_seed(base, problem, TransformKind::XScaling, k++));
  k = 0;
  for (double o : config.objective_offsets)
    push(YTranslation{o}, transform_seed(base, problem, TransformKind::YTranslation, k++));
  k = 0;
  for (int e : config.objective_exponents)
    push(YScaling{e}, transform_seed(base, problem, TransformKind::YScaling, k++));
  return out;
}

}  // namespace elab
