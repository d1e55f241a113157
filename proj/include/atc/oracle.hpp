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

// Independent minimizer of the reduced objective. It only evaluates the
// objective through fresh subproblem solves and never touches the gram
// assembly, so agreement with solve_atc is a genuine cross-check.

#include "atc/coupling.hpp"
#include "atc/lattice.hpp"

namespace atc {

struct OracleResult {
  ControlPair controls;
  double objective = 0.0;
  int iterations = 0;
  /// Max-norm of the last Newton step.
  double last_step = 0.0;
};

/// Newton iteration from the zero control with central-difference gradient
/// and Hessian.
OracleResult minimize_objective_fd_newton(const ChainModel& chain, const Decomposition& decomp,
                                          int max_iterations = 8);

}  // namespace atc
