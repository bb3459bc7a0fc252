// Copyright 2026 The csgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CSG_RANDOM_H_
#define CSG_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "csg/game_model.h"

namespace csg {

// All randomness in the library runs on std::mt19937_64, whose output
// sequence is fixed by the standard. Distributions are computed here rather
// than with <random> distributions, whose algorithms are unspecified.
using Rng = std::mt19937_64;

// SplitMix64 step, used to derive independent stream seeds.
inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline Rng StreamRng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(SplitMix64(seed ^ SplitMix64(stream + 1)));
}

// Uniform on [0, 1) with 53 random bits.
inline double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int UniformInt(Rng& rng, int n) {
  return static_cast<int>(Uniform01(rng) * n);
}

// Dirichlet(1, ..., 1) via normalized exponentials.
inline Eigen::VectorXd DirichletOnes(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = -std::log(1.0 - Uniform01(rng));
  return v / v.sum();
}

inline StationaryStrategy RandomStrategy(Rng& rng,
                                         const StateActionIndex& index) {
  std::vector<Eigen::VectorXd> rows;
  for (int s = 0; s < index.num_states(); ++s) {
    rows.push_back(DirichletOnes(rng, index.num_actions(s)));
  }
  return StationaryStrategy(std::move(rows));
}

}  // namespace csg

#endif  // CSG_RANDOM_H_
