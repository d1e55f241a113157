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

// Battery of invariant checks on a single instance, gathered into a scorecard.

#include <cstdint>
#include <string>
#include <vector>

#include "atc/lattice.hpp"

namespace atc {

struct Check {
  std::string name;
  bool passed = false;
  /// Measured quantity and the limit it was judged against.
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct Scorecard {
  int n = 0;
  int k = 0;
  int l = 0;
  std::vector<Check> checks;

  bool all_passed() const;
};

/// Runs every check on (chain, decomp). Random samples are drawn from `seed`.
Scorecard run_verification(const ChainModel& chain, const Decomposition& decomp,
                           std::uint64_t seed = 7);

}  // namespace atc
