#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "elab/config.hpp"
#include "elab/experiment/io.hpp"
#include "elab/experiment/plots.hpp"
#include "elab/experiment/tables.hpp"
#include "elab/features/features.hpp"
#include "elab/sampling.hpp"
#include "elab/stats/compare.hpp"
#include "elab/stats/normalize.hpp"
#include "elab/stats/projection.hpp"
#include "elab/transforms.hpp"

#ifndef ELAB_VERSION
#define ELAB_VERSION "unknown"
#endif

namespace elab {

inline constexpr std::string_view kVersion = ELAB_VERSION;

/// Thread count: the explicit value if given, else ELAB_THREADS, else the config.
inline int resolve_threads(const ExperimentConfig& config, std::optional<int> explicit_threads = std::nullopt) {
  if (explicit_threads) {
    if (*explicit_threads < 1) throw std::invalid_argument("threads must be >= 1");
    return *explicit_threads;
  }
  if (const char* env = std::getenv("ELAB_THREADS"); env && *env) {
    const long long v = parse_int(env);
    if (v < 1) throw std::invalid_argument("ELAB_THREADS must be >= 1");
    return static_cast<int>(v);
  }
  return config.threads;
}

inline std::vector<int> sorted_problems(const ExperimentConfig& config) {
  std::vector<int> p = config.problems;
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

inline std::vector<InstanceDescriptor> enumerate_all(const ExperimentConfig& config) {
  std::vector<InstanceDescriptor> all;
  for (int p : sorted_problems(config)) {
    auto inst = enumerate_instances(problem_from_int(p), config);
    all.insert(all.end(), std::make_move_iterator(inst.begin()), std::make_move_iterator(inst.end()));
  }
  return all;
}

/// Creates `dir` if needed and proves it accepts a file.
inline void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "ok")) throw IoError("output directory is not writable: " + dir.string());
  }
  fs::remove(probe, ec);
}

/// Writes through a temporary so readers never see half a file.
inline void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  write_file(tmp, content);
  fs::rename(tmp, path);
}

inline Design make_design(const ExperimentConfig& c, const InstanceDescriptor& desc, int rep) {
  const auto m = static_cast<std::size_t>(c.sample_size());
  const auto d = static_cast<std::size_t>(c.dimension);
  const std::uint64_t seed = c.share_designs
                                 ? design_seed(c.base_seed, static_cast<std::uint64_t>(rep))
                                 : unshared_design_seed(c.base_seed, desc.problem, desc.instance_index,
                                                        static_cast<std::uint64_t>(rep));
  return lhs(m, d, Bounds{}, seed);
}

// ------------------------------------------------------------ features stage

struct FeatureStageOptions {
  bool resume = false;
  int threads = 1;
  /// Stop after computing this many new vectors (leaves a partial file).
  std::optional<std::size_t> max_tasks;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct FeatureStageResult {
  FeatureTable table;
  bool complete = false;
  std::size_t total = 0;
  std::size_t reused = 0;
  std::size_t computed = 0;
};

inline constexpr std::string_view kFeaturesFile = "features.csv";
inline constexpr std::string_view kPartialFile = "features.csv.partial";

/// Computes one feature vector per (problem, instance, repetition) on a pool
/// of workers. The calling thread is the only writer: it appends each finished
/// vector to the partial file, which a resumed run reads back.
inline FeatureStageResult compute_features(const ExperimentConfig& config,
                                           const std::vector<InstanceDescriptor>& instances, const fs::path& out_dir,
                                           const FeatureStageOptions& opt) {
  using Key = std::tuple<int, int, int>;
  const fs::path final_path = out_dir / kFeaturesFile, partial_path = out_dir / kPartialFile;

  std::vector<std::pair<const InstanceDescriptor*, int>> tasks;
  std::set<Key> expected;
  for (const auto& d : instances)
    for (int r = 0; r < config.repetitions; ++r) {
      tasks.emplace_back(&d, r);
      expected.insert({to_int(d.problem), d.instance_index, r});
    }

  FeatureStageResult res;
  res.total = tasks.size();

  if (!opt.resume) {
    fs::remove(final_path);
    fs::remove(partial_path);
  } else if (fs::exists(final_path)) {
    FeatureTable table = load_features_csv(final_path);
    std::set<Key> have;
    for (const auto& r : table.rows()) have.insert(FeatureTable::key(r));
    if (have != expected || table.size() != expected.size())
      throw IoError("existing " + final_path.string() + " does not match the configured run; rerun without --resume");
    res.table = std::move(table);
    res.complete = true;
    res.reused = res.total;
    return res;
  }

  std::vector<FeatureVector> done;
  std::set<Key> have;
  if (opt.resume && fs::exists(partial_path)) {
    for (auto& fv : parse_features_csv(read_file(partial_path), true))
      if (expected.count(FeatureTable::key(fv)) && have.insert(FeatureTable::key(fv)).second)
        done.push_back(std::move(fv));
  }
  res.reused = done.size();

  const InstanceCatalog catalog = make_catalog(instances);
  {
    // rewrite without any torn tail before appending
    std::string text(kFeaturesHeader);
    for (const auto& fv : done)
      text += feature_rows_text(fv, lookup(catalog, fv.provenance.problem, fv.provenance.instance_index));
    write_file(partial_path, text);
  }

  std::vector<std::pair<const InstanceDescriptor*, int>> todo;
  for (const auto& t : tasks)
    if (!have.count({to_int(t.first->problem), t.first->instance_index, t.second})) todo.push_back(t);
  const std::size_t budget = opt.max_tasks ? std::min(*opt.max_tasks, todo.size()) : todo.size();

  std::map<int, Design> shared;  // repetition -> design
  if (config.share_designs)
    for (const auto& [desc, rep] : todo)
      if (!shared.count(rep)) shared.emplace(rep, make_design(config, *desc, rep));

  std::mutex mu;
  std::condition_variable cv;
  std::deque<FeatureVector> queue;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::string error;
  int running = std::max(1, std::min<int>(opt.threads, static_cast<int>(std::max<std::size_t>(budget, 1))));

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= budget || abort.load()) break;
      const auto& [desc, rep] = todo[i];
      try {
        const Design design = config.share_designs ? shared.at(rep) : make_design(config, *desc, rep);
        const EvaluatedSample s = evaluate_design(*desc, design, rep);
        FeatureVector fv =
            compute_all(s, feature_seed(config.base_seed, to_int(desc->problem), desc->instance_index, rep));
        std::lock_guard lock(mu);
        queue.push_back(std::move(fv));
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (error.empty())
          error = "feature computation failed for problem " + std::to_string(to_int(desc->problem)) + " instance " +
                  std::to_string(desc->instance_index) + " repetition " + std::to_string(rep) + ": " + e.what();
        abort = true;
      }
      cv.notify_one();
    }
    std::lock_guard lock(mu);
    --running;
    cv.notify_one();
  };

  std::vector<std::thread> pool;
  const int nthreads = running;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);

  {
    std::ofstream partial(partial_path, std::ios::binary | std::ios::app);
    if (!partial) {
      abort = true;
      for (auto& th : pool) th.join();
      throw IoError("cannot append to " + partial_path.string());
    }
    std::unique_lock lock(mu);
    for (;;) {
      cv.wait(lock, [&] { return !queue.empty() || running == 0; });
      while (!queue.empty()) {
        FeatureVector fv = std::move(queue.front());
        queue.pop_front();
        lock.unlock();
        partial << feature_rows_text(fv, lookup(catalog, fv.provenance.problem, fv.provenance.instance_index));
        partial.flush();
        done.push_back(std::move(fv));
        ++res.computed;
        if (opt.progress) opt.progress(done.size(), res.total);
        lock.lock();
      }
      if (running == 0) break;
    }
  }
  for (auto& th : pool) th.join();
  if (!error.empty()) throw std::runtime_error(error);

  res.table = FeatureTable(std::move(done));
  res.complete = res.table.size() == res.total;
  if (res.complete) {
    write_file_atomic(final_path, features_csv(res.table, catalog));
    fs::remove(partial_path);
  }
  return res;
}

// ------------------------------------------------------------ analysis stage

struct Analysis {
  MinMaxScaler scaler;
  std::vector<ComparisonReport> reports;
  std::vector<CurveRow> curves;
  SensitivityMatrix sensitivity;
  std::vector<DiffRows> diffs;
  std::vector<std::pair<double, double>> projection;
};

/// Runs `fn(i)` for i in [0, n) on `threads` threads.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto body = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!err) err = std::current_exception();
        next = n;
      }
    }
  };
  const int k = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < k; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

/// Every transformed instance is compared against instance 0 of its problem.
inline std::vector<ComparisonReport> compare_all(const ExperimentConfig& config,
                                                 const std::vector<InstanceDescriptor>& instances,
                                                 const FeatureTable& table, const MinMaxScaler& scaler, int threads) {
  std::vector<const InstanceDescriptor*> transformed;
  for (const auto& d : instances)
    if (d.instance_index != 0) transformed.push_back(&d);
  std::vector<ComparisonReport> out(transformed.size());
  parallel_for(transformed.size(), threads, [&](std::size_t i) {
    const auto& d = *transformed[i];
    const int p = to_int(d.problem);
    const auto orig = table.instance(p, 0), trans = table.instance(p, d.instance_index);
    if (orig.empty() || trans.empty())
      throw IoError("missing feature rows for problem " + std::to_string(p) + " instance " +
                    std::to_string(orig.empty() ? 0 : d.instance_index));
    out[i] = compare(orig, trans, scaler, config.alpha, ComparisonKey{p, 0, d.instance_index, d.kind(), d.level()});
  });
  return out;
}

inline Analysis analyze(const ExperimentConfig& config, const std::vector<InstanceDescriptor>& instances,
                        const FeatureTable& table, int threads) {
  if (table.size() == 0) throw std::invalid_argument("analyze: empty feature table");
  Analysis a;
  a.scaler = MinMaxScaler::fit(table.rows());
  a.reports = compare_all(config, instances, table, a.scaler, threads);
  a.sensitivity = sensitivity(a.reports);

  for (int p : sorted_problems(config)) {
    for (TransformKind kind : kAllTransformedKinds) {
      std::vector<ComparisonReport> group;
      for (const auto& r : a.reports)
        if (r.key.problem == p && r.key.kind == kind) group.push_back(r);
      if (group.empty()) continue;
      for (const auto& pt : rejection_curve(group)) a.curves.push_back({p, kind, pt});
    }

    DiffRows dr;
    dr.problem = p;
    const FeatureMeans mean0 = feature_means(table.instance(p, 0));
    std::vector<FeatureMeans> rotated;
    for (const auto& d : instances)
      if (to_int(d.problem) == p && d.kind() == TransformKind::XRotation) {
        rotated.push_back(feature_means(table.instance(p, d.instance_index)));
        dr.rotation_index.push_back(std::get<XRotation>(d.spec).index);
      }
    if (!rotated.empty()) {
      dr.matrix = rotation_diff(rotated, mean0);
      a.diffs.push_back(std::move(dr));
    }
  }

  const std::vector<FeatureVector> normalized = a.scaler.apply(table.rows());
  std::vector<FeatureVector> originals;
  for (const auto& r : normalized)
    if (r.provenance.instance_index == 0) originals.push_back(r);
  a.projection = project_2d(normalized, originals);
  return a;
}

inline constexpr std::string_view kComparisonFile = "comparison.csv", kCurveFile = "curve.csv",
                                  kSensitivityFile = "sensitivity.csv", kDiffFile = "diff.csv",
                                  kProjectionFile = "projection.csv";

inline void write_comparisons(const fs::path& out_dir, const Analysis& a, const InstanceCatalog& catalog) {
  write_file_atomic(out_dir / kComparisonFile, comparison_csv(a.reports, catalog));
  write_file_atomic(out_dir / kCurveFile, curve_csv(a.curves));
}

inline void write_sensitivity(const fs::path& out_dir, const Analysis& a) {
  write_file_atomic(out_dir / kSensitivityFile, sensitivity_csv(a.sensitivity));
  write_file_atomic(out_dir / kDiffFile, diff_csv(a.diffs));
}

inline void write_projection(const fs::path& out_dir, const Analysis& a, const FeatureTable& table) {
  write_file_atomic(out_dir / kProjectionFile, projection_csv(table, a.projection));
}

/// Returns the names of the written SVG files.
inline std::vector<std::string> write_plots(const fs::path& out_dir, const Analysis& a) {
  std::vector<std::string> names;
  if (!a.curves.empty())
    for (const auto& [kind, svg] : plot_curves(a.curves)) {
      names.push_back("fig3_" + std::string(kind_name(kind)) + ".svg");
      write_file_atomic(out_dir / names.back(), svg);
    }
  if (!a.diffs.empty()) {
    names.emplace_back("fig6_rotation.svg");
    write_file_atomic(out_dir / names.back(), plot_rotation(a.diffs));
  }
  if (!a.sensitivity.empty()) {
    names.emplace_back("fig7_heatmap.svg");
    write_file_atomic(out_dir / names.back(), plot_heatmap(a.sensitivity));
  }
  return names;
}

// ------------------------------------------------------------------ manifest

struct RunManifest {
  ExperimentConfig config;
  std::vector<InstanceDescriptor> instances;
  std::string version{kVersion};
  std::map<std::string, std::string> checksums;  // file name -> FNV-1a
  bool complete = false;
  std::size_t tasks_total = 0;
  std::size_t tasks_reused = 0;
  std::size_t tasks_computed = 0;
};

inline Json seed_scheme_json() {
  return Json{{"mix", "splitmix64 chain over (0x6a09e667f3bcc909, parts...)"},
              {"design", "mix(base_seed, 0x4c4853, repetition); per instance when share_designs is false: "
                         "mix(base_seed, 0x4c4853, problem, instance_index, repetition)"},
              {"transform", "mix(base_seed, problem, kind, index within kind)"},
              {"feature", "mix(base_seed, 0x454c41, problem, instance_index, repetition)"},
              {"translation_vectors", "drawn independently per problem"}};
}

inline Json manifest_to_json(const RunManifest& m) {
  Json checks = Json::object();
  for (const auto& [k, v] : m.checksums) checks[k] = v;
  return Json{{"version", m.version},
              {"complete", m.complete},
              {"config", config_to_json(m.config)},
              {"seed_scheme", seed_scheme_json()},
              {"tasks", {{"total", m.tasks_total}, {"reused", m.tasks_reused}, {"computed", m.tasks_computed}}},
              {"checksums", std::move(checks)},
              {"instances", descriptors_to_json(m.instances)}};
}

inline constexpr std::string_view kManifestFile = "manifest.json", kConfigFile = "config.json",
                                  kInstancesFile = "instances.json";

struct RunOptions {
  bool resume = false;
  std::optional<int> threads;
  std::optional<std::size_t> max_tasks;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Keys that do not influence results.
inline Json result_relevant(const ExperimentConfig& c) {
  Json j = config_to_json(c);
  j.erase("threads");
  j.erase("out_dir");
  return j;
}

/// Full pipeline into config.out_dir. Feature vectors already present are
/// reused when resuming; every later stage is always regenerated.
inline RunManifest run(const ExperimentConfig& config, const RunOptions& options = {}) {
  config.validate();
  const fs::path out_dir = config.out_dir;
  ensure_writable(out_dir);
  const int threads = resolve_threads(config, options.threads);

  if (options.resume && fs::exists(out_dir / kConfigFile)) {
    const ExperimentConfig previous = load_config(out_dir / kConfigFile);
    if (result_relevant(previous) != result_relevant(config))
      throw std::invalid_argument("cannot resume: " + (out_dir / kConfigFile).string() +
                                  " was written by a different configuration");
  }

  RunManifest m;
  m.config = config;
  m.instances = enumerate_all(config);
  save_config(config, out_dir / kConfigFile);
  write_file_atomic(out_dir / kInstancesFile, descriptors_to_json(m.instances).dump(1) + "\n");

  FeatureStageOptions fopt{options.resume, threads, options.max_tasks, options.progress};
  FeatureStageResult fres = compute_features(config, m.instances, out_dir, fopt);
  m.tasks_total = fres.total;
  m.tasks_reused = fres.reused;
  m.tasks_computed = fres.computed;
  m.complete = fres.complete;

  std::vector<std::string> files{std::string(kConfigFile), std::string(kInstancesFile)};
  if (fres.complete) {
    const Analysis a = analyze(config, m.instances, fres.table, threads);
    const InstanceCatalog catalog = make_catalog(m.instances);
    write_comparisons(out_dir, a, catalog);
    write_sensitivity(out_dir, a);
    write_projection(out_dir, a, fres.table);
    for (auto name : {kFeaturesFile, kComparisonFile, kCurveFile, kSensitivityFile, kDiffFile, kProjectionFile})
      files.emplace_back(name);
    for (auto& svg : write_plots(out_dir, a)) files.push_back(std::move(svg));
  }
  for (const auto& f : files) m.checksums[f] = file_checksum(out_dir / f);
  write_file_atomic(out_dir / kManifestFile, manifest_to_json(m).dump(2) + "\n");
  return m;
}

}  // namespace elab
