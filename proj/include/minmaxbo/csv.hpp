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

// CSV files for traces and aggregates. Floating-point fields use 9
// significant digits.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "minmaxbo/harness.hpp"

namespace minmaxbo {

inline constexpr const char* kTraceHeader =
    "iteration,theta,slice,observation,est_theta,est_slice,residual";
inline constexpr const char* kAggregateHeader = "iteration,mean_residual,std_residual";

void write_trace_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

/// Throws std::runtime_error naming the path on I/O failure.
void write_trace_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& records);
void write_aggregate_csv(const std::filesystem::path& path, const std::vector<AggregateRow>& rows);

std::vector<TrialRecord> read_trace_csv(std::istream& in);
std::vector<AggregateRow> read_aggregate_csv(std::istream& in);
std::vector<TrialRecord> read_trace_csv(const std::filesystem::path& path);
std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path);

}  // namespace minmaxbo
