#pragma once

// The five CEC2022 basic benchmark functions (raw textbook formulas, no
// official shift/rotation/bias data). All are defined on the whole of R^d;
// the canonical sampling box is [-100, 100]^d.

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace elab {

enum class ProblemId : int {
  Zakharov = 1,
  Rosenbrock = 2,
  SchafferF7 = 3,
  Rastrigin = 4,
  Levy = 5,
};

inline constexpr double kLowerBound = -100.0;
inline constexpr double kUpperBound = 100.0;
inline constexpr int kNumProblems = 5;

struct Bounds {
  double lower = kLowerBound;
  double upper = kUpperBound;
  double width() const { return upper - lower; }
  bool contains(double v) const { return v >= lower && v <= upper; }
};

struct BenchmarkProblem {
  ProblemId id;
  std::string_view name;
  Bounds bounds;
};

inline ProblemId problem_from_int(int id) {
  if (id < 1 || id > kNumProblems)
    throw std::invalid_argument("unknown problem id " + std::to_string(id) + " (expected 1..5)");
  return static_cast<ProblemId>(id);
}

inline int to_int(ProblemId id) { return static_cast<int>(id); }

inline std::string_view problem_name(ProblemId id) {
  switch (id) {
    case ProblemId::Zakharov: return "Zakharov";
    case ProblemId::Rosenbrock: return "Rosenbrock";
    case ProblemId::SchafferF7: return "Schaffer F7";
    case ProblemId::Rastrigin: return "Rastrigin";
    case ProblemId::Levy: return "Levy";
  }
  throw std::invalid_argument("unknown problem id " + std::to_string(static_cast<int>(id)));
}

inline std::array<BenchmarkProblem, kNumProblems> list_problems() {
  std::array<BenchmarkProblem, kNumProblems> out{};
  for (int i = 1; i <= kNumProblems; ++i) {
    const auto id = static_cast<ProblemId>(i);
    out[i - 1] = BenchmarkProblem{id, problem_name(id), Bounds{}};
  }
  return out;
}

namespace detail {

inline double zakharov(std::span<const double> x) {
  double sq = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sq += x[i] * x[i];
    lin += 0.5 * static_cast<double>(i + 1) * x[i];
  }
  const double lin2 = lin * lin;
  return sq + lin2 + lin2 * lin2;
}

inline double rosenbrock(std::span<const double> x) {
  double f = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = x[i] - 1.0;
    f += 100.0 * a * a + b * b;
  }
  return f;
}

inline double schaffer_f7(std::span<const double> x) {
  const std::size_t d = x.size();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    const double s = std::sqrt(x[i] * x[i] + x[i + 1] * x[i + 1]);
    const double rs = std::sqrt(s);
    const double sn = std::sin(50.0 * std::pow(s, 0.2));
    acc += rs + rs * sn * sn;
  }
  const double mean = acc / static_cast<double>(d - 1);
  return mean * mean;
}

inline double rastrigin(std::span<const double> x) {
  double f = 0.0;
  for (double v : x) f += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v) + 10.0;
  return f;
}

inline double levy(std::span<const double> x) {
  constexpr double pi = std::numbers::pi;
  const std::size_t d = x.size();
  auto w = [&](std::size_t i) { return 1.0 + (x[i] - 1.0) / 4.0; };
  const double s0 = std::sin(pi * w(0));
  double f = s0 * s0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    const double wi = w(i);
    const double s = std::sin(pi * wi + 1.0);
    f += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * s * s);
  }
  const double wd = w(d - 1);
  const double sd = std::sin(2.0 * pi * wd);
  f += (wd - 1.0) * (wd - 1.0) * (1.0 + sd * sd);
  return f;
}

}  // namespace detail

/// Smallest dimension each function is defined for.
inline std::size_t min_dimension(ProblemId id) {
  return id == ProblemId::SchafferF7 ? 2 : 1;
}

inline void check_dimension(ProblemId id, std::size_t d) {
  if (d < min_dimension(id))
    throw std::invalid_argument(std::string(problem_name(id)) + " requires d >= " +
                                std::to_string(min_dimension(id)));
}

/// Raw objective value. x may lie outside the sampling box.
inline double evaluate(ProblemId id, std::size_t d, std::span<const double> x) {
  if (x.size() != d)
    throw std::invalid_argument("dimension mismatch: expected " + std::to_string(d) + ", got " +
                                std::to_string(x.size()));
  check_dimension(id, d);
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite input coordinate");
  switch (id) {
    case ProblemId::Zakharov: return detail::zakharov(x);
    case ProblemId::Rosenbrock: return detail::rosenbrock(x);
    case ProblemId::SchafferF7: return detail::schaffer_f7(x);
    case ProblemId::Rastrigin: return detail::rastrigin(x);
    case ProblemId::Levy: return detail::levy(x);
  }
  throw std::invalid_argument("unknown problem id");
}

/// Known global optimum (location, value) of the raw formula.
inline std::pair<std::vector<double>, double> optimum(ProblemId id, std::size_t d) {
  problem_name(id);  // rejects ids outside the enum range
  check_dimension(id, d);
  const bool ones = id == ProblemId::Rosenbrock || id == ProblemId::Levy;
  return {std::vector<double>(d, ones ? 1.0 : 0.0), 0.0};
}

}  // namespace elab
