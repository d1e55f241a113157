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

// Optimization-based coupling with virtual Dirichlet controls.
//
// The atomistic state lives on [0, L] with controls on {L-1, L}; the
// continuum state lives on [K, N-1] with a control at K. The controls
// minimize 1/2 ||u_a - u_c||^2 over the overlap [K, L]. Both states are
// affine in the controls, so the minimizer solves a small gram system built
// from one lifting per control basis vector.

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "atc/lattice.hpp"
#include "atc/solvers.hpp"

namespace atc {

/// Virtual controls (theta_a at L-1 and L | theta_c at K).
struct ControlPair {
  double theta_a_lm1 = 0.0;
  double theta_a_l = 0.0;
  double theta_c_k = 0.0;

  std::array<double, 2> atomistic() const { return {theta_a_lm1, theta_a_l}; }
  Eigen::Vector3d as_vector() const { return {theta_a_lm1, theta_a_l, theta_c_k}; }
  static ControlPair from_vector(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }
};

/// Subdomain solutions with zero control data: u^{a,0} on [0, L], u^{c,0} on [K, N-1].
struct HomogeneousStates {
  DisplacementField atomistic;
  DisplacementField continuum;
};

HomogeneousStates homogeneous_states(const ChainModel& chain, const Decomposition& decomp);

/// Zero-force atomistic solve with zero data on {0, 1} and theta_a on {L-1, L}.
DisplacementField lift_atomistic(const ChainModel& chain, const Decomposition& decomp,
                                 std::array<double, 2> theta_a);

/// Closed form theta_c * (Nbar - i) / (Nbar - K) on [K, Nbar], Nbar = N - 1.
DisplacementField lift_continuum(const Decomposition& decomp, double theta_c);

/// Squared overlap mismatch and its split into the node K, the interior
/// K+1..L-2, and the nodes {L-1, L}.
struct MismatchSplit {
  double total = 0.0;
  double at_continuum_boundary = 0.0;
  double interior = 0.0;
  double at_atomistic_boundary = 0.0;
};

MismatchSplit mismatch_norm(const DisplacementField& u_a, const DisplacementField& u_c,
                            const Decomposition& decomp);

struct ReducedSystem {
  Eigen::Matrix3d gram;
  Eigen::Vector3d rhs;
  /// v_a(e1), v_a(e2) on [0, L] and v_c(e3) on [K, N-1]. The third gram
  /// column uses -v_c(e3).
  std::array<DisplacementField, 3> liftings;
  HomogeneousStates states;
  /// Columns v_a(e1), v_a(e2), -v_c(e3) restricted to the overlap, and the
  /// offset u^{a,0} - u^{c,0} there. The controls solve the least-squares
  /// problem on these directly.
  Eigen::MatrixXd basis;
  Eigen::VectorXd offset;
  double min_eigenvalue = 0.0;
  double condition = 0.0;
  std::vector<std::string> warnings;
};

constexpr double kGramConditionWarning = 1e12;

/// Throws Error(verification) if the gram is not positive definite.
ReducedSystem assemble_reduced_system(const ChainModel& chain, const Decomposition& decomp);

/// Least-squares solve on the stored basis, or the gram system when no basis is stored.
ControlPair solve_controls(const ReducedSystem& system);

struct AtcDiagnostics {
  double gram_condition = 0.0;
  double gram_min_eigenvalue = 0.0;
  /// max |G theta - rhs| of the control solve.
  double control_residual = 0.0;
  /// Max-norm of the finite-difference gradient of the reduced objective at
  /// the returned controls, and the scale it is judged against.
  double optimality_gradient = 0.0;
  double objective_scale = 0.0;
  std::vector<std::string> warnings;
};

struct AtcResult {
  ControlPair controls;
  DisplacementField u_a_op;
  DisplacementField u_c_op;
  DisplacementField u_atc;
  /// ||u_a_op - u_c_op||^2 over [K, L].
  double mismatch = 0.0;
  AtcDiagnostics diagnostics;
};

/// States for given controls, computed by fresh subproblem solves.
AtcResult compose_atc(const ChainModel& chain, const Decomposition& decomp,
                      const ControlPair& controls);

/// States for given controls, by superposition of the stored liftings.
AtcResult compose_atc(const ChainModel& chain, const Decomposition& decomp,
                      const ReducedSystem& system, const ControlPair& controls);

/// (u_{L-1}, u_L | u_K).
ControlPair trace(const DisplacementField& u, const Decomposition& decomp);

/// Reduced objective 1/2 ||u_a(theta_a) - u_c(theta_c)||^2 over [K, L],
/// evaluated by solving both subproblems.
double reduced_objective(const ChainModel& chain, const Decomposition& decomp,
                         const ControlPair& controls);

/// Central-difference gradient of reduced_objective.
Eigen::Vector3d objective_gradient_fd(const ChainModel& chain, const Decomposition& decomp,
                                      const ControlPair& at, double step);

/// End-to-end: homogeneous states, reduced system, controls, composition.
AtcResult solve_atc(const ChainModel& chain, const Decomposition& decomp);

/// Variant with the atomistic operator on the continuum side, two-node
/// artificial boundary {K, K+1}, and four controls. Reproduces the global
/// atomistic solution.
struct ConsistentResult {
  std::array<double, 4> controls{};  // (L-1, L | K, K+1)
  DisplacementField u_a_op;          // [0, L]
  DisplacementField u_c_op;          // [K, N]
  DisplacementField u_atc;           // [0, N]
  double mismatch = 0.0;
  double gram_min_eigenvalue = 0.0;
};

ConsistentResult solve_atc_consistent(const ChainModel& chain, const Decomposition& decomp);

}  // namespace atc
