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

#include "minmaxbo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "minmaxbo/baselines.hpp"
#include "minmaxbo/csv.hpp"
#include "minmaxbo/knowledge_gradient.hpp"
#include "minmaxbo/problems.hpp"

namespace minmaxbo {

namespace {

constexpr std::uint64_t kInitStream = 0x1417;
constexpr std::uint64_t kIterationStream = 0xac9;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void rethrow_trial_error(std::uint64_t seed, int iteration, const std::exception& e) {
  throw std::runtime_error("trial with seed " + std::to_string(seed) + " failed at " +
                           (iteration == 0 ? std::string("initialization")
                                           : "iteration " + std::to_string(iteration)) +
                           ": " + e.what());
}

}  // namespace

std::string_view to_string(Acquisition acquisition) {
  switch (acquisition) {
    case Acquisition::entropy_search: return "entropy_search";
    case Acquisition::knowledge_gradient: return "knowledge_gradient";
    case Acquisition::thompson: return "thompson";
    case Acquisition::wabersich: return "wabersich";
  }
  return "unknown";
}

Acquisition parse_acquisition(std::string_view name) {
  for (Acquisition a : {Acquisition::entropy_search, Acquisition::knowledge_gradient,
                        Acquisition::thompson, Acquisition::wabersich})
    if (to_string(a) == name) return a;
  throw InvalidArgument("unknown acquisition '" + std::string(name) +
                        "' (expected entropy_search, knowledge_gradient, thompson or wabersich)");
}

void TrialConfig::validate() const {
  if (iterations < 1) throw InvalidArgument("TrialConfig: iterations must be >= 1");
  if (init_count < 1) throw InvalidArgument("TrialConfig: init_count must be >= 1");
  if (acquisition_grid < 2 || reporting_grid < 2)
    throw InvalidArgument("TrialConfig: grid resolutions must be >= 2");
  if (es.representative_count < 2)
    throw InvalidArgument("TrialConfig: need at least two representative points");
  if (es.argmax_samples < 1) throw InvalidArgument("TrialConfig: argmax_samples must be >= 1");
  if (es.quadrature_nodes < 1) throw InvalidArgument("TrialConfig: quadrature_nodes must be >= 1");
  if (es.screen_count < 0) throw InvalidArgument("TrialConfig: es screen count must be >= 0");
  if (!(es.ep.damping > 0.0 && es.ep.damping <= 1.0))
    throw InvalidArgument("TrialConfig: ep damping must lie in (0, 1]");
  if (!(es.ep.tolerance > 0.0)) throw InvalidArgument("TrialConfig: ep tolerance must be > 0");
  if (es.ep.max_sweeps < 1) throw InvalidArgument("TrialConfig: ep max sweeps must be >= 1");
  if (kg_fantasies < 1) throw InvalidArgument("TrialConfig: fantasies must be >= 1");
  if (beta0 < 0.0 || beta_min < 0.0) throw InvalidArgument("TrialConfig: beta must be >= 0");
}

std::string TrialConfig::canonical_text() const {
  std::ostringstream out;
  out << "problem=" << problem << "\n"
      << "acquisition=" << to_string(acquisition) << "\n"
      << "iters=" << iterations << "\n"
      << "init-count=" << init_count << "\n"
      << "seed=" << seed << "\n"
      << "acq-grid=" << acquisition_grid << "\n"
      << "report-grid=" << reporting_grid << "\n"
      << "representatives=" << es.representative_count << "\n"
      << "argmax-samples=" << es.argmax_samples << "\n"
      << "quadrature-nodes=" << es.quadrature_nodes << "\n"
      << "ep-damping=" << format_double(es.ep.damping) << "\n"
      << "ep-tolerance=" << format_double(es.ep.tolerance) << "\n"
      << "ep-max-sweeps=" << es.ep.max_sweeps << "\n"
      << "ep-refine=" << (es.refine_consistency ? "true" : "false") << "\n"
      << "ep-undamped-first=" << (es.ep.undamped_first ? "true" : "false") << "\n"
      << "es-screen=" << es.screen_count << "\n"
      << "fantasies=" << kg_fantasies << "\n"
      << "beta0=" << format_double(beta0) << "\n"
      << "beta-min=" << format_double(beta_min) << "\n";
  return out.str();
}

std::uint64_t TrialConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

TrialTrace run_trial(const TrialConfig& config, int trial_index) {
  config.validate();
  TrialTrace trace;
  trace.seed = config.seed + static_cast<std::uint64_t>(trial_index);
  trace.config_hash = config.hash();
  const MinMaxProblem problem = [&] {
    try {
      return make_problem(config.problem);
    } catch (const std::exception& e) {
      rethrow_trial_error(trace.seed, 0, e);
    }
  }();
  const int slices = problem.slice_count();

  auto evaluate = [&](const Location& loc) {
    ++trace.evaluations;
    return problem.evaluate_scaled(loc.theta, loc.slice);
  };
  auto point = [&](const Location& loc) {
    return Eigen::Vector2d(loc.theta, static_cast<double>(loc.slice) / (slices - 1));
  };

  int iteration = 0;
  try {
    Rng init_rng(derive_seed(trace.seed, kInitStream));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::uniform_int_distribution<int> pick_slice(0, slices - 1);
    Dataset data{Eigen::MatrixXd(0, 2), Eigen::VectorXd(0)};
    for (int k = 0; k < config.init_count; ++k) {
      const double theta = uniform(init_rng);
      const Location loc{theta, pick_slice(init_rng)};
      const double y = evaluate(loc);
      trace.initial_locations.push_back(loc);
      trace.initial_observations.push_back(y);
      data = data.extended(point(loc), y);
    }
    GpPosterior gp = GpPosterior::fit(data, problem.gp_params());

    const Eigen::VectorXd acquisition_grid = uniform_grid(config.acquisition_grid);
    const Eigen::VectorXd reporting_grid = uniform_grid(config.reporting_grid);
    const RepresentativeSet repset = config.acquisition == Acquisition::entropy_search
        ? select_representative_points(config.es.representative_count, slices,
                                       config.es.dimension_cap)
        : RepresentativeSet{};
    const KgConfig kg{config.kg_fantasies, acquisition_grid, slices};
    const BetaSchedule schedule{config.beta0, config.beta_min, config.iterations};
    WabersichState wabersich;

    for (iteration = 1; iteration <= config.iterations; ++iteration) {
      Rng rng(derive_seed(trace.seed, kIterationStream, static_cast<std::uint64_t>(iteration)));
      Location next;
      switch (config.acquisition) {
        case Acquisition::entropy_search: {
          EntropySearch es(gp, repset, config.es, rng);
          next = es.select(acquisition_grid);
          trace.es_diagnostics.merge(es.diagnostics());
          break;
        }
        case Acquisition::knowledge_gradient:
          next = select_kg_candidate(gp, kg, rng).location;
          break;
        case Acquisition::thompson:
          next = thompson_step(gp, acquisition_grid, slices, rng);
          break;
        case Acquisition::wabersich:
          next = wabersich_step(gp, acquisition_grid, slices, wabersich, schedule);
          break;
      }
      const double y = evaluate(next);
      data = data.extended(point(next), y);
      gp = GpPosterior::fit(data, problem.gp_params());

      const MinMaxPoint estimate = posterior_mean_minmax(gp, reporting_grid, slices);
      const Location est{reporting_grid(estimate.theta_index), estimate.slice};
      trace.records.push_back(
          {iteration, next.theta, next.slice, y, est.theta, est.slice, problem.residual(est)});
    }
  } catch (const std::exception& e) {
    rethrow_trial_error(trace.seed, iteration, e);
  }
  return trace;
}

ExperimentResult run_experiment(const TrialConfig& config, const ExperimentOptions& options) {
  if (options.trial_count < 1) throw InvalidArgument("run_experiment: trial_count must be >= 1");
  config.validate();
  if (options.out_dir) std::filesystem::create_directories(*options.out_dir);

  const int total = options.trial_count;
  std::vector<std::optional<TrialTrace>> slots(total);
  std::vector<TrialFailure> failures;
  std::mutex mutex;
  std::atomic<int> next{0};
  int finished = 0;

  auto worker = [&] {
    for (int index = next++; index < total; index = next++) {
      std::optional<TrialTrace> trace;
      std::optional<TrialFailure> failure;
      try {
        trace = run_trial(config, index);
        if (options.out_dir) {
          char name[32];
          std::snprintf(name, sizeof name, "trial_%04d.csv", index);
          write_trace_csv(*options.out_dir / name, trace->records);
        }
      } catch (const std::exception& e) {
        failure = TrialFailure{index, config.seed + static_cast<std::uint64_t>(index), e.what()};
        trace.reset();
      }
      std::lock_guard lock(mutex);
      if (trace) slots[index] = std::move(trace);
      if (failure) failures.push_back(*failure);
      ++finished;
      if (options.progress) options.progress(finished, total);
    }
  };

  const int threads = std::max(1, std::min(options.parallelism, total));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  ExperimentResult result;
  for (int i = 0; i < total; ++i)
    if (slots[i]) {
      result.traces.push_back(std::move(*slots[i]));
      result.trial_indices.push_back(i);
    }
  std::sort(failures.begin(), failures.end(),
            [](const TrialFailure& a, const TrialFailure& b) { return a.trial_index < b.trial_index; });
  result.failures = std::move(failures);
  return result;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialTrace>& traces) {
  std::vector<AggregateRow> rows;
  if (traces.empty()) return rows;
  const std::size_t length = traces.front().records.size();
  for (const TrialTrace& t : traces)
    if (t.records.size() != length)
      throw InvalidArgument("aggregate: traces have different lengths");
  const double count = static_cast<double>(traces.size());
  for (std::size_t k = 0; k < length; ++k) {
    double mean = 0.0;
    for (const TrialTrace& t : traces) mean += t.records[k].residual;
    mean /= count;
    double var = 0.0;
    for (const TrialTrace& t : traces) {
      const double d = t.records[k].residual - mean;
      var += d * d;
    }
    rows.push_back({traces.front().records[k].iteration, mean, std::sqrt(var / count)});
  }
  return rows;
}

}  // namespace minmaxbo
