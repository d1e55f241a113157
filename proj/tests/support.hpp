// Copyright 2026 The atc-opt Authors
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

#pragma once

// Random instance generators shared by the property and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "atc/lattice.hpp"

namespace atc::testing {

constexpr double kK1 = 1.0;
constexpr double kK2 = -1.0 / 6.0;

inline std::vector<double> random_table(int n, std::mt19937_64& rng, double amplitude = 1.0) {
  std::uniform_real_distribution<double> draw(-amplitude, amplitude);
  std::vector<double> f(n + 1);
  for (auto& v : f) v = draw(rng);
  return f;
}

inline ChainModel random_chain(int n, std::mt19937_64& rng) {
  return ChainModel::build(n, kK1, kK2, ForceSpec::from_table(random_table(n, rng)));
}

/// Valid (K, L) for chain size n: K >= 2, L <= n - 2, L - K >= 4.
struct Interfaces {
  int k;
  int l;
};

inline Interfaces random_interfaces(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick_l(8, n - 2);
  const int l = pick_l(rng);
  std::uniform_int_distribution<int> pick_k(2, l - 4);
  return {pick_k(rng), l};
}

inline int random_size(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// True if every value is exactly zero.
inline bool all_zero(const DisplacementField& f) {
  for (double v : f.values())
    if (v != 0.0) return false;
  return true;
}

}  // namespace atc::testing
