/*
 * Copyright 2026 The doubtset Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace doubtset {

// Portable seeded randomness.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard <random> distributions are NOT portable across
// library implementations, so every distribution used by this project is
// defined here explicitly:
//
//   uniform01()      top 53 bits of one draw, scaled by 2^-53  -> [0, 1)
//   below(n)         rejection sampling on the top bits        -> [0, n)
//   normal()         Marsaglia polar method, cached pair       -> N(0, 1)
//
// Sub-streams are derived with derive_seed(), a SplitMix64 finaliser over
// (seed, stream), so independent components never share a sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::size_t below(std::size_t n);

  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform permutation of 0..n-1 (Fisher-Yates, front to back).
std::vector<std::size_t> permutation(std::size_t n, Rng& rng);

/// First k entries of a partial Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng);

}  // namespace doubtset
