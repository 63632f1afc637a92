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

#include "minmaxbo/minmax.hpp"

#include <string>

namespace minmaxbo {

void ValueTable::validate() const {
  if (values.rows() != theta_grid.size())
    throw InvalidArgument("ValueTable: row count does not match the theta grid");
  for (Eigen::Index i = 0; i < theta_grid.size(); ++i) {
    if (theta_grid(i) < 0.0 || theta_grid(i) > 1.0)
      throw InvalidArgument("ValueTable: theta grid outside [0,1]");
    if (i > 0 && !(theta_grid(i) > theta_grid(i - 1)))
      throw InvalidArgument("ValueTable: theta grid is not strictly increasing");
  }
}

WorstCaseProfile worst_case_profile(const Eigen::Ref<const Eigen::MatrixXd>& values) {
  if (values.rows() == 0 || values.cols() == 0)
    throw InvalidArgument("worst_case_profile: empty table");
  WorstCaseProfile out;
  out.max.resize(values.rows());
  out.argmax.resize(values.rows());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    int best = 0;
    for (Eigen::Index s = 1; s < values.cols(); ++s)
      if (values(i, s) > values(i, best)) best = static_cast<int>(s);
    out.max(i) = values(i, best);
    out.argmax[i] = best;
  }
  return out;
}

WorstCaseProfile worst_case_profile(const ValueTable& table) {
  table.validate();
  return worst_case_profile(table.values);
}

MinMaxPoint grid_minmax(const Eigen::Ref<const Eigen::MatrixXd>& values) {
  const WorstCaseProfile profile = worst_case_profile(values);
  MinMaxPoint best{0, profile.argmax[0], profile.max(0)};
  for (Eigen::Index i = 1; i < profile.max.size(); ++i) {
    if (profile.max(i) < best.value) best = {i, profile.argmax[i], profile.max(i)};
  }
  return best;
}

MinMaxPoint grid_minmax(const ValueTable& table) {
  table.validate();
  return grid_minmax(table.values);
}

ArgmaxSample argmax_from_sample(const Eigen::Ref<const Eigen::VectorXd>& sample,
                                const JointLayout& layout) {
  if (layout.slice_count < 1 || sample.size() != layout.size())
    throw InvalidArgument("argmax_from_sample: sample length " + std::to_string(sample.size()) +
                          " does not match layout " + std::to_string(layout.theta_count) + "x" +
                          std::to_string(layout.slice_count));
  ArgmaxSample g;
  g.assignment.resize(layout.theta_count);
  for (Eigen::Index i = 0; i < layout.theta_count; ++i) {
    int best = 0;
    for (int s = 1; s < layout.slice_count; ++s)
      if (sample(layout.flat(i, s)) > sample(layout.flat(i, best))) best = s;
    g.assignment[i] = best;
  }
  return g;
}

Eigen::MatrixXd joint_locations(const Eigen::VectorXd& thetas, int slice_count) {
  if (slice_count < 2) throw InvalidArgument("joint_locations: need at least two slices");
  Eigen::MatrixXd out(thetas.size() * slice_count, 2);
  for (Eigen::Index i = 0; i < thetas.size(); ++i)
    for (int s = 0; s < slice_count; ++s) {
      out(i * slice_count + s, 0) = thetas(i);
      out(i * slice_count + s, 1) = static_cast<double>(s) / (slice_count - 1);
    }
  return out;
}

Eigen::MatrixXd reshape_table(const Eigen::Ref<const Eigen::VectorXd>& flat, int slice_count) {
  if (slice_count < 1 || flat.size() % slice_count != 0)
    throw InvalidArgument("reshape_table: length is not a multiple of the slice count");
  const Eigen::Index rows = flat.size() / slice_count;
  Eigen::MatrixXd out(rows, slice_count);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (int s = 0; s < slice_count; ++s) out(i, s) = flat(i * slice_count + s);
  return out;
}

}  // namespace minmaxbo
