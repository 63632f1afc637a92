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

// Experiment orchestration: seeded trials, the optimization loop, residual
// tracking and aggregation over trials.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "minmaxbo/entropy_search.hpp"
#include "minmaxbo/types.hpp"

namespace minmaxbo {

enum class Acquisition { entropy_search, knowledge_gradient, thompson, wabersich };

std::string_view to_string(Acquisition acquisition);
Acquisition parse_acquisition(std::string_view name);

struct TrialConfig {
  std::string problem = "branin_star";
  Acquisition acquisition = Acquisition::entropy_search;
  int iterations = 40;
  int init_count = 5;
  std::uint64_t seed = 20260;
  /// Theta resolution of the candidate grid shared by all acquisitions.
  int acquisition_grid = 100;
  /// Theta resolution on which the min-max estimate is reported.
  int reporting_grid = 512;
  EsOptions es;
  int kg_fantasies = 32;
  double beta0 = 4.0;
  double beta_min = 0.04;

  void validate() const;
  /// key=value lines, one per setting, in a fixed order.
  std::string canonical_text() const;
  /// FNV-1a of canonical_text().
  std::uint64_t hash() const;
};

struct TrialRecord {
  int iteration = 0;
  double theta = 0.0;
  int slice = 0;
  double observation = 0.0;
  double est_theta = 0.0;
  int est_slice = 0;
  double residual = 0.0;
};

struct TrialTrace {
  std::vector<TrialRecord> records;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<Location> initial_locations;
  std::vector<double> initial_observations;
  /// Black-box evaluations, initial design included.
  long evaluations = 0;
  EsDiagnostics es_diagnostics;
};

/// Runs one trial with seed config.seed + trial_index. Errors are rethrown as
/// std::runtime_error naming the iteration and the seed.
TrialTrace run_trial(const TrialConfig& config, int trial_index = 0);

struct TrialFailure {
  int trial_index = 0;
  std::uint64_t seed = 0;
  std::string message;
};

struct ExperimentResult {
  /// Completed traces in trial order.
  std::vector<TrialTrace> traces;
  std::vector<int> trial_indices;
  std::vector<TrialFailure> failures;
};

struct ExperimentOptions {
  int trial_count = 1;
  int parallelism = 1;
  /// When set, every completed trial is written to trial_NNNN.csv here as it finishes.
  std::optional<std::filesystem::path> out_dir;
  /// Called (serialized) after each trial with (finished, total).
  std::function<void(int, int)> progress;
};

ExperimentResult run_experiment(const TrialConfig& config, const ExperimentOptions& options);

struct AggregateRow {
  int iteration = 0;
  double mean_residual = 0.0;
  double std_residual = 0.0;
};

/// Per-iteration mean and population standard deviation of the residuals.
/// Throws if the traces differ in length.
std::vector<AggregateRow> aggregate(const std::vector<TrialTrace>& traces);

}  // namespace minmaxbo
