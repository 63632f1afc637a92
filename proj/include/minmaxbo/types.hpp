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

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace minmaxbo {

using Rng = std::mt19937_64;

/// A point of the sliced problem as the optimizers see it: a controllable
/// parameter scaled to [0,1] and the index of an uncontrollable slice.
struct Location {
  double theta = 0.0;
  int slice = 0;

  friend bool operator==(const Location&, const Location&) = default;
};

/// Raised when a precondition on the inputs is violated.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a matrix factorization fails even after jitter escalation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic 64-bit seed derivation (splitmix64 finalizer chained over
/// the inputs), used to split one trial seed into independent streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ b);
}

/// rows x cols matrix of independent standard normals.
inline Eigen::MatrixXd standard_normals(Eigen::Index rows, Eigen::Index cols,
                                        Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) z(r, c) = normal(rng);
  return z;
}

/// `count` uniformly spaced values on [0,1], endpoints included.
inline Eigen::VectorXd uniform_grid(Eigen::Index count) {
  if (count < 2) throw InvalidArgument("uniform_grid: need at least 2 points");
  return Eigen::VectorXd::LinSpaced(count, 0.0, 1.0);
}

}  // namespace minmaxbo
