#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace elab {

/// Experiment parameters. Defaults reproduce the full 267-instance grid per
/// problem at d = 10, m = 100 d, 100 repetitions.
struct ExperimentConfig {
  std::uint64_t base_seed = 20240501;
  int dimension = 10;
  std::vector<int> problems{1, 2, 3, 4, 5};
  int sample_multiple = 100;
  int repetitions = 100;
  std::vector<double> translation_limits = default_translation_limits();
  int vectors_per_limit = 10;
  std::vector<int> scaling_exponents = range(-6, 6);
  int rotations = 30;
  std::vector<double> objective_offsets = default_objective_offsets();
  std::vector<int> objective_exponents = range(-6, 6);
  double alpha = 0.05;
  bool share_designs = true;
  int threads = 1;
  std::string out_dir = "out";

  int sample_size() const { return sample_multiple * dimension; }

  /// Number of instances generated per problem (identity included).
  int instances_per_problem() const {
    return 1 + static_cast<int>(translation_limits.size()) * vectors_per_limit + rotations +
           static_cast<int>(scaling_exponents.size()) + static_cast<int>(objective_offsets.size()) +
           static_cast<int>(objective_exponents.size());
  }

  void validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (dimension < 1) fail("dimension must be >= 1");
    if (problems.empty()) fail("problems must not be empty");
    for (int p : problems)
      if (p < 1 || p > 5) fail("problem ids must lie in 1..5");
    if (sample_multiple < 1) fail("sample_multiple must be >= 1");
    if (repetitions < 10) fail("repetitions must be >= 10");
    if (vectors_per_limit < 0) fail("vectors_per_limit must be >= 0");
    if (rotations < 0) fail("rotations must be >= 0");
    for (double l : translation_limits)
      if (!(l >= 0.0)) fail("translation limits must be >= 0");
    if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
    if (threads < 1) fail("threads must be >= 1");
    if (out_dir.empty()) fail("out_dir must not be empty");
  }

  static std::vector<int> range(int lo, int hi) {
    std::vector<int> v(static_cast<std::size_t>(hi - lo + 1));
    std::iota(v.begin(), v.end(), lo);
    return v;
  }
  static std::vector<double> default_translation_limits() {
    std::vector<double> v;
    for (int l = 5; l <= 100; l += 5) v.push_back(l);
    return v;
  }
  static std::vector<double> default_objective_offsets() {
    std::vector<double> v;
    for (int o = 100; o <= 1000; o += 100) v.push_back(o);
    return v;
  }

  /// Reduced grid used for desk-scale reproduction (23 instances per problem).
  static ExperimentConfig desk() {
    ExperimentConfig c;
    c.repetitions = 20;
    c.translation_limits = {5, 50, 100};
    c.vectors_per_limit = 3;
    c.scaling_exponents = {-6, -1, 1, 6};
    c.rotations = 5;
    c.objective_offsets = {100, 1000};
    c.objective_exponents = {-6, 6};
    c.threads = 8;
    c.out_dir = "out/desk";
    return c;
  }
};

}  // namespace elab
