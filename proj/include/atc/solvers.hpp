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

#include <array>

#include "atc/lattice.hpp"
#include "atc/operators.hpp"

namespace atc {

struct SolveReport {
  DisplacementField solution;  // over the system's interior range
  double residual_inf = 0.0;
  bool factorization_ok = false;
};

/// Symmetric banded LL^T factorization without pivoting. Throws
/// Error(solver) naming the pivot index if a pivot is not positive, or if
/// the residual exceeds 1e-10 * (1 + max|rhs|).
SolveReport solve_banded(const BandedSystem& system);

/// Dense LL^T reference solve.
Eigen::VectorXd solve_dense(const DenseSystem& system);

constexpr double kResidualTolerance = 1e-10;
/// Upper bound on refinement passes in the region solves.
constexpr int kRefinementPasses = 4;

/// Which data drive a subdomain solve: `included` uses the external force
/// and the outer boundary values, `excluded` zeroes both (lifting solves).
enum class Sources { included, excluded };

/// Solves A u = f on `interior` with the given Dirichlet data and returns the
/// field over [lo-2, hi+2] (boundary values included). The direct solve is
/// refined against the residual of the bond-difference stencil.
DisplacementField solve_atomistic_region(const ChainModel& chain, IndexRange interior,
                                         const DirichletData& dirichlet,
                                         ForceTerm force, DomainTag tag);
/// Same for C; result covers [lo-1, hi+1].
DisplacementField solve_continuum_region(const ChainModel& chain, IndexRange interior,
                                         const DirichletData& dirichlet,
                                         ForceTerm force, DomainTag tag);

/// Global atomistic problem on [0, N] with the chain's outer boundary data.
DisplacementField solve_full_atomistic(const ChainModel& chain);

/// Global continuum problem: C on [2, N-2] with Dirichlet data at 1 and N-1;
/// entries 0 and N carry the outer boundary values.
DisplacementField solve_full_continuum(const ChainModel& chain);

/// Atomistic subproblem on [0, L]: u = outer data on {0, 1}, u = theta_a on
/// {L-1, L}.
DisplacementField solve_atomistic_subproblem(const ChainModel& chain,
                                             const Decomposition& decomp,
                                             std::array<double, 2> theta_a,
                                             Sources sources = Sources::included);

/// Continuum subproblem on [K, N-1]: u_K = theta_c, u_{N-1} = outer data.
DisplacementField solve_continuum_subproblem(const ChainModel& chain,
                                             const Decomposition& decomp, double theta_c,
                                             Sources sources = Sources::included);

struct ModelingErrorBound {
  /// |k2| / (4 kc sin^2(pi / (2(n+1)))) * ||D1^2 u_ref||
  double bound = 0.0;
  double prefactor = 0.0;
  /// c0 * N^2 * ||D1^2 u_ref|| with c0 = |k2| / (4 kc), from sin x >= 2x/pi.
  double asymptotic_bound = 0.0;
  double asymptotic_constant = 0.0;
  /// ||D1^2 u_ref|| over the interior rows.
  double delta_norm = 0.0;
  int unknowns = 0;
};

/// Bound on ||u_a - u_c|| where u_c solves the continuum problem on `interior`
/// with the traces of u_ref as Dirichlet data. `interior` is the global
/// interior [2, N-2] or the continuum interior [K+1, N-2].
ModelingErrorBound modeling_error_bound(const ChainModel& chain,
                                        const DisplacementField& u_ref,
                                        IndexRange interior);

/// Sharp prefactor alone, for n unknowns.
double modeling_error_prefactor(const ChainModel& chain, int unknowns);

}  // namespace atc
