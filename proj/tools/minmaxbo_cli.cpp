// Copyright 2026 The minmaxbo Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

// Command line front end: run one experiment, sweep the number of
// representative points, or aggregate existing trace files.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minmaxbo/csv.hpp"
#include "minmaxbo/harness.hpp"
#include "minmaxbo/problems.hpp"

namespace fs = std::filesystem;
using namespace minmaxbo;

namespace {

struct Settings {
  std::string acquisition = "entropy_search";
  int trials = 20;
  int parallelism = 1;
  std::string out = "runs";
  TrialConfig config;
};

// Trial options live on the top-level app so that a plain key=value config
// file maps onto them; subcommands fall through to reach them.
void add_trial_options(CLI::App& app, Settings& s) {
  TrialConfig& c = s.config;
  app.set_config("--config", "", "Read key=value settings mirroring the long flags");
  app.add_option("--problem", c.problem, "branin_star, camel_star or eggholder_star (sweep: camel_star)")
      ->check(CLI::IsMember(problem_names()))
      ->capture_default_str();
  app.add_option("--acquisition", s.acquisition,
                 "entropy_search, knowledge_gradient, thompson or wabersich (run only)")
      ->check(CLI::IsMember({"entropy_search", "knowledge_gradient", "thompson", "wabersich"}))
      ->capture_default_str();
  app.add_option("--trials", s.trials, "Number of trials (sweep: 10 per count)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--iters", c.iterations, "Iterations per trial")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--seed", c.seed, "Master seed; trial k uses seed + k")->capture_default_str();
  app.add_option("--out", s.out, "Output directory")->capture_default_str();
  app.add_option("--parallelism", s.parallelism, "Trials run concurrently")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--init-count", c.init_count, "Initial random evaluations")->capture_default_str();
  app.add_option("--acq-grid", c.acquisition_grid, "Theta points of the candidate grid")->capture_default_str();
  app.add_option("--report-grid", c.reporting_grid, "Theta points of the reporting grid")->capture_default_str();

  auto* es = app.add_option_group("entropy_search");
  es->add_option("--representatives", c.es.representative_count, "Representative points N")->capture_default_str();
  es->add_option("--argmax-samples", c.es.argmax_samples, "Argmax samples M")->capture_default_str();
  es->add_option("--quadrature-nodes", c.es.quadrature_nodes, "Gauss-Hermite nodes per fantasy")->capture_default_str();
  es->add_option("--ep-damping", c.es.ep.damping, "EP damping for the fallback run")->capture_default_str();
  es->add_option("--ep-tolerance", c.es.ep.tolerance, "EP relative convergence tolerance")->capture_default_str();
  es->add_option("--ep-max-sweeps", c.es.ep.max_sweeps, "EP sweep limit")->capture_default_str();
  es->add_option("--ep-refine", c.es.refine_consistency, "Joint EP refinement of likely minimizers")->capture_default_str();
  es->add_option("--ep-undamped-first", c.es.ep.undamped_first, "Try undamped EP first")->capture_default_str();
  es->add_option("--es-screen", c.es.screen_count, "Candidates scored in full (0 scores all)")->capture_default_str();

  auto* kg = app.add_option_group("knowledge_gradient");
  kg->add_option("--fantasies", c.kg_fantasies, "Fantasy draws J")->capture_default_str();

  auto* wab = app.add_option_group("wabersich");
  wab->add_option("--beta0", c.beta0, "Initial exploration weight")->capture_default_str();
  wab->add_option("--beta-min", c.beta_min, "Final exploration weight")->capture_default_str();
}

std::string trial_progress_label(const TrialConfig& c) {
  return c.problem + "/" + std::string(to_string(c.acquisition));
}

// Runs one experiment into `dir`; returns the number of failed trials.
int run_one(const TrialConfig& config, int trials, int parallelism, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream manifest(dir / "config.txt");
    manifest << config.canonical_text() << "trials=" << trials << "\n";
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config.hash()));
    manifest << "config-hash=" << hash << "\n";
    if (!manifest) throw std::runtime_error("cannot write " + (dir / "config.txt").string());
  }
  const std::string label = trial_progress_label(config);
  ExperimentOptions options;
  options.trial_count = trials;
  options.parallelism = parallelism;
  options.out_dir = dir;
  options.progress = [&](int done, int total) {
    std::fprintf(stderr, "[%s] %d/%d trials finished\n", label.c_str(), done, total);
  };
  const ExperimentResult result = run_experiment(config, options);
  for (const TrialFailure& f : result.failures)
    std::fprintf(stderr, "[%s] trial %d (seed %llu) failed: %s\n", label.c_str(), f.trial_index,
                 static_cast<unsigned long long>(f.seed), f.message.c_str());
  const auto rows = aggregate(result.traces);
  write_aggregate_csv(dir / "aggregate.csv", rows);
  if (!rows.empty())
    std::fprintf(stderr, "[%s] mean residual at T: %.6g\n", label.c_str(), rows.back().mean_residual);
  return static_cast<int>(result.failures.size());
}

std::vector<TrialTrace> read_traces(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind("trial_", 0) == 0 && e.path().extension() == ".csv")
      files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<TrialTrace> traces;
  for (const fs::path& f : files) {
    TrialTrace t;
    t.records = read_trace_csv(f);
    traces.push_back(std::move(t));
  }
  return traces;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian optimization for min-max problems"};
  app.require_subcommand(1);

  Settings settings;
  add_trial_options(app, settings);

  auto* run_cmd = app.add_subcommand("run", "Run one experiment and write its traces")->fallthrough();

  std::vector<int> counts{5, 10, 20};
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Entropy search over several numbers of representative points")
          ->fallthrough();
  app.add_option("--counts", counts, "Representative point counts (sweep only)")
      ->delimiter(',')
      ->capture_default_str();

  std::string agg_in, agg_out;
  auto* agg_cmd = app.add_subcommand("aggregate", "Aggregate trial_*.csv files of a directory");
  agg_cmd->add_option("--in", agg_in, "Directory holding trace files")->required()->check(CLI::ExistingDirectory);
  agg_cmd->add_option("--out", agg_out, "Aggregate CSV (default: <in>/aggregate.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      settings.config.acquisition = parse_acquisition(settings.acquisition);
      settings.config.validate();
      return run_one(settings.config, settings.trials, settings.parallelism, settings.out) == 0 ? 0 : 1;
    }
    if (*sweep_cmd) {
      if (app.get_option("--problem")->count() == 0) settings.config.problem = "camel_star";
      if (app.get_option("--trials")->count() == 0) settings.trials = 10;
      settings.config.acquisition = Acquisition::entropy_search;
      int failed = 0;
      for (int n : counts) {
        TrialConfig c = settings.config;
        c.es.representative_count = n;
        c.validate();
        failed += run_one(c, settings.trials, settings.parallelism,
                          fs::path(settings.out) / ("n" + std::to_string(n)));
      }
      return failed == 0 ? 0 : 1;
    }
    if (*agg_cmd) {
      const auto traces = read_traces(agg_in);
      if (traces.empty()) throw std::runtime_error("no trial_*.csv files in " + agg_in);
      const fs::path target = agg_out.empty() ? fs::path(agg_in) / "aggregate.csv" : fs::path(agg_out);
      write_aggregate_csv(target, aggregate(traces));
      std::fprintf(stderr, "aggregated %zu traces into %s\n", traces.size(), target.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
