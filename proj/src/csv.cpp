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

#include "minmaxbo/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace minmaxbo {

namespace {

std::string g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<std::string> split_row(const std::string& line, std::size_t expected) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (fields.size() != expected)
    throw std::runtime_error("CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(expected) + ": '" + line + "'");
  return fields;
}

void expect_header(std::istream& in, const char* header) {
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw std::runtime_error(std::string("CSV header mismatch, expected '") + header + "'");
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::ifstream open_for_reading(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  return in;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kTraceHeader << "\n";
  for (const TrialRecord& r : records)
    out << r.iteration << ',' << g9(r.theta) << ',' << r.slice << ',' << g9(r.observation) << ','
        << g9(r.est_theta) << ',' << r.est_slice << ',' << g9(r.residual) << "\n";
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << kAggregateHeader << "\n";
  for (const AggregateRow& r : rows)
    out << r.iteration << ',' << g9(r.mean_residual) << ',' << g9(r.std_residual) << "\n";
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& records) {
  write_file(path, [&](std::ostream& out) { write_trace_csv(out, records); });
}

void write_aggregate_csv(const std::filesystem::path& path, const std::vector<AggregateRow>& rows) {
  write_file(path, [&](std::ostream& out) { write_aggregate_csv(out, rows); });
}

std::vector<TrialRecord> read_trace_csv(std::istream& in) {
  expect_header(in, kTraceHeader);
  std::vector<TrialRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_row(line, 7);
    records.push_back({std::stoi(f[0]), std::stod(f[1]), std::stoi(f[2]), std::stod(f[3]),
                       std::stod(f[4]), std::stoi(f[5]), std::stod(f[6])});
  }
  return records;
}

std::vector<AggregateRow> read_aggregate_csv(std::istream& in) {
  expect_header(in, kAggregateHeader);
  std::vector<AggregateRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_row(line, 3);
    rows.push_back({std::stoi(f[0]), std::stod(f[1]), std::stod(f[2])});
  }
  return rows;
}

std::vector<TrialRecord> read_trace_csv(const std::filesystem::path& path) {
  auto in = open_for_reading(path);
  return read_trace_csv(in);
}

std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path) {
  auto in = open_for_reading(path);
  return read_aggregate_csv(in);
}

}  // namespace minmaxbo
