// elab: instance generation, feature computation and transformation analysis.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "elab/elab.hpp"

namespace {

using namespace elab;

struct CommonFlags {
  std::string config_path;
  std::vector<int> problems;
  std::optional<int> reps;
  std::optional<int> threads;
  std::string out_dir;
  bool resume = false;
};

struct SampleFlags {
  int instance = 0;
  int rep = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_resume) {
  cmd->add_option("--config", f.config_path, "Experiment config JSON (a run manifest is accepted too)");
  cmd->add_option("--problems", f.problems, "Problem ids to include, e.g. --problems 1 3")->delimiter(',');
  cmd->add_option("--reps", f.reps, "Repetitions per instance (overrides config)");
  cmd->add_option("--threads", f.threads, "Worker threads (overrides ELAB_THREADS and config)");
  cmd->add_option("--out-dir", f.out_dir, "Output directory (overrides config)");
  if (with_resume) cmd->add_flag("--resume", f.resume, "Reuse feature vectors already computed in the output directory");
}

ExperimentConfig resolve_config(const CommonFlags& f) {
  ExperimentConfig c = f.config_path.empty() ? ExperimentConfig{} : load_config(f.config_path);
  if (!f.problems.empty()) c.problems = f.problems;
  if (f.reps) c.repetitions = *f.reps;
  if (!f.out_dir.empty()) c.out_dir = f.out_dir;
  c.validate();
  return c;
}

void print_progress(std::size_t done, std::size_t total) {
  static std::size_t last = static_cast<std::size_t>(-1);
  const std::size_t pct = total ? done * 100 / total : 100;
  if (pct / 5 != last / 5 || done == total) {
    last = pct;
    std::fprintf(stderr, "\rfeatures %zu/%zu (%zu%%)", done, total, pct);
    if (done == total) std::fputc('\n', stderr);
  }
}

FeatureTable require_features(const fs::path& dir) {
  const fs::path p = dir / kFeaturesFile;
  if (!fs::exists(p)) throw IoError(p.string() + " not found; run the features stage first");
  return load_features_csv(p);
}

int cmd_instances(const ExperimentConfig& c) {
  ensure_writable(c.out_dir);
  const auto all = enumerate_all(c);
  write_file(fs::path(c.out_dir) / kInstancesFile, descriptors_to_json(all).dump(1) + "\n");
  std::cout << "wrote " << all.size() << " descriptors to " << (fs::path(c.out_dir) / kInstancesFile).string()
            << "\n";
  return 0;
}

int cmd_sample(const ExperimentConfig& c, const SampleFlags& s) {
  const fs::path dir = c.out_dir;
  ensure_writable(dir / "samples");
  const auto all = enumerate_all(c);
  const auto catalog = make_catalog(all);
  if (s.rep < 0 || s.rep >= c.repetitions) throw std::invalid_argument("--rep must lie in [0, reps)");
  if (c.share_designs) {
    ensure_writable(dir / "designs");
    for (int r = 0; r < c.repetitions; ++r)
      write_file(dir / "designs" / ("design_rep" + std::to_string(r) + ".csv"),
                 sample_csv(make_design(c, all.front(), r)));
  }
  for (int p : sorted_problems(c)) {
    const auto& desc = lookup(catalog, p, s.instance);
    const Design design = make_design(c, desc, s.rep);
    const EvaluatedSample es = evaluate_design(desc, design, s.rep);
    const std::string name = "p" + std::to_string(p) + "_i" + std::to_string(s.instance) + "_r" +
                             std::to_string(s.rep) + ".csv";
    write_file(dir / "samples" / name, sample_csv(design, es.values));
  }
  std::cout << "wrote samples to " << (dir / "samples").string() << "\n";
  return 0;
}

int cmd_features(const ExperimentConfig& c, const CommonFlags& f) {
  ensure_writable(c.out_dir);
  const auto all = enumerate_all(c);
  FeatureStageOptions opt{f.resume, resolve_threads(c, f.threads), std::nullopt, print_progress};
  const auto res = compute_features(c, all, c.out_dir, opt);
  std::cout << "features: " << res.total << " vectors (" << res.reused << " reused, " << res.computed
            << " computed)\n";
  return 0;
}

int cmd_analysis(const std::string& stage, const ExperimentConfig& c, const CommonFlags& f) {
  const fs::path dir = c.out_dir;
  const auto all = enumerate_all(c);
  const FeatureTable table = require_features(dir);
  const Analysis a = analyze(c, all, table, resolve_threads(c, f.threads));
  if (stage == "compare") write_comparisons(dir, a, make_catalog(all));
  else if (stage == "sensitivity") write_sensitivity(dir, a);
  else if (stage == "project") write_projection(dir, a, table);
  else if (stage == "plot")
    for (const auto& name : write_plots(dir, a)) std::cout << "wrote " << (dir / name).string() << "\n";
  std::cout << stage << ": done\n";
  return 0;
}

int cmd_run_all(const ExperimentConfig& c, const CommonFlags& f) {
  RunOptions opt;
  opt.resume = f.resume;
  opt.threads = f.threads;
  opt.progress = print_progress;
  const RunManifest m = run(c, opt);
  std::cout << "run complete: " << m.tasks_total << " feature vectors (" << m.tasks_reused << " reused), outputs in "
            << c.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landscape-feature sensitivity to problem transformations"};
  app.set_version_flag("--version", std::string(elab::kVersion));
  app.require_subcommand(1);

  CommonFlags flags;
  SampleFlags sample_flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"instances", "Write the instance descriptors (instances.json)"},
      {"sample", "Write LHS designs and evaluated samples as CSV"},
      {"features", "Compute feature vectors (features.csv)"},
      {"compare", "KS/EMD comparison of every transformed instance (comparison.csv, curve.csv)"},
      {"sensitivity", "Sensitivity matrix and rotation differences (sensitivity.csv, diff.csv)"},
      {"project", "2-D projection fitted on original instances (projection.csv)"},
      {"plot", "Render the SVG figures"},
      {"run-all", "Run every stage and write the manifest"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, desc] : commands) {
    auto* cmd = app.add_subcommand(name, desc);
    add_common(cmd, flags, name == "features" || name == "run-all");
    if (name == "sample") {
      cmd->add_option("--instance", sample_flags.instance, "Instance index to evaluate (0 = original)");
      cmd->add_option("--rep", sample_flags.rep, "Repetition whose design is evaluated");
    }
    subs.push_back(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  std::string stage;
  for (auto* s : subs)
    if (s->parsed()) stage = s->get_name();

  elab::ExperimentConfig config;
  try {
    config = resolve_config(flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (stage == "instances") return cmd_instances(config);
    if (stage == "sample") return cmd_sample(config, sample_flags);
    if (stage == "features") return cmd_features(config, flags);
    if (stage == "run-all") return cmd_run_all(config, flags);
    return cmd_analysis(stage, config, flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
