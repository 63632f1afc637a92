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

// Exact discrete min-max on a theta grid x slices value matrix. Ties always
// resolve toward the smallest index.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "minmaxbo/types.hpp"

namespace minmaxbo {

/// Values on a theta grid (rows) times slices (columns).
struct ValueTable {
  Eigen::VectorXd theta_grid;
  Eigen::MatrixXd values;

  void validate() const;
};

struct WorstCaseProfile {
  Eigen::VectorXd max;
  std::vector<int> argmax;
};

struct MinMaxPoint {
  Eigen::Index theta_index = 0;
  int slice = 0;
  double value = 0.0;
};

WorstCaseProfile worst_case_profile(const Eigen::Ref<const Eigen::MatrixXd>& values);
WorstCaseProfile worst_case_profile(const ValueTable& table);

MinMaxPoint grid_minmax(const Eigen::Ref<const Eigen::MatrixXd>& values);
MinMaxPoint grid_minmax(const ValueTable& table);

/// Row-major (theta-major) layout of theta_count x slice_count joint locations.
struct JointLayout {
  Eigen::Index theta_count = 0;
  int slice_count = 0;

  Eigen::Index size() const { return theta_count * slice_count; }
  Eigen::Index flat(Eigen::Index theta_index, int slice) const {
    return theta_index * slice_count + slice;
  }
};

/// One argmax function g: representative index -> worst-case slice.
struct ArgmaxSample {
  std::vector<int> assignment;

  friend bool operator==(const ArgmaxSample&, const ArgmaxSample&) = default;
};

/// g(theta_i) = argmax over slices of a joint sample laid out per `layout`.
ArgmaxSample argmax_from_sample(const Eigen::Ref<const Eigen::VectorXd>& sample,
                                const JointLayout& layout);

/// Stacks grid x slices into GP input locations (theta, slice/(S-1)), row
/// order matching JointLayout.
Eigen::MatrixXd joint_locations(const Eigen::VectorXd& thetas, int slice_count);

/// Reshapes a flat vector in JointLayout order into a |thetas| x slices table.
Eigen::MatrixXd reshape_table(const Eigen::Ref<const Eigen::VectorXd>& flat, int slice_count);

}  // namespace minmaxbo
