// Copyright 2026 The esslab Authors
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

#ifndef ESSLAB_RANDOM_HPP
#define ESSLAB_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace esslab {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for a sub-stream identified by `path`.
/**
 * Splitting rule: start from `master`, and for every path element `k` replace the state with
 * `mix64(state + mix64(k + 1))`. Every worker, replicate and grid point derives its stream this
 * way, so outputs depend only on the master seed and the logical position of the work item,
 * never on which thread ran it.
 */
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// A single-owner source of randomness. Not thread-safe; give each worker its own.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }

  /// Uniform on [0, 1).
  double uniform() { return std::generate_canonical<double, 53>(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace esslab

#endif
