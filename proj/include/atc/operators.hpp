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

// Finite-difference stencils and assembly of the atomistic operator
// A = -k1*D1 - k2*D2 and the continuum operator C = -kc*D1 on an interior
// index range, with Dirichlet values eliminated into the right-hand side.

#include <map>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "atc/lattice.hpp"

namespace atc {

/// (D1 u)_i = u_{i-1} - 2u_i + u_{i+1}
double delta1(const DisplacementField& u, int i);
/// (D2 u)_i = u_{i-2} - 2u_i + u_{i+2}
double delta2(const DisplacementField& u, int i);
/// D1 applied twice; needs u on [i-2, i+2].
double delta1_squared(const DisplacementField& u, int i);

/// Stencil action of A and C at site i on an arbitrary field.
double apply_atomistic(const ChainModel& chain, const DisplacementField& u, int i);
double apply_continuum(const ChainModel& chain, const DisplacementField& u, int i);

/// Dirichlet values keyed by atom index.
using DirichletData = std::map<int, double>;

/// Whether the external load enters the right-hand side.
enum class ForceTerm { applied, none };

/// Symmetric banded matrix over `size` consecutive sites starting at global
/// index `index_offset`. bands[d][r] holds entry (r, r - d) for r >= d.
struct BandedSystem {
  int size = 0;
  int half_bandwidth = 0;
  int index_offset = 0;
  DomainTag tag = DomainTag::global;
  std::vector<std::vector<double>> bands;
  std::vector<double> rhs;

  IndexRange range() const noexcept { return {index_offset, index_offset + size - 1}; }
  double entry(int row, int col) const;
  std::vector<double> multiply(std::span<const double> x) const;
  Eigen::MatrixXd dense() const;
};

/// Pentadiagonal system for A on `interior`. Needs Dirichlet values at the
/// two sites on each side of the interior.
BandedSystem assemble_atomistic(const ChainModel& chain, IndexRange interior,
                                const DirichletData& dirichlet,
                                ForceTerm force = ForceTerm::applied,
                                DomainTag tag = DomainTag::global);

/// Tridiagonal system for C on `interior`. Needs one Dirichlet value on each side.
BandedSystem assemble_continuum(const ChainModel& chain, IndexRange interior,
                                const DirichletData& dirichlet,
                                ForceTerm force = ForceTerm::applied,
                                DomainTag tag = DomainTag::global);

/// Dense counterpart built from the Hessian of the bond energies rather than
/// the stencils. Used to cross-check the banded path on small problems.
struct DenseSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  int index_offset = 0;
};

DenseSystem assemble_atomistic_dense(const ChainModel& chain, IndexRange interior,
                                     const DirichletData& dirichlet,
                                     ForceTerm force = ForceTerm::applied);
DenseSystem assemble_continuum_dense(const ChainModel& chain, IndexRange interior,
                                     const DirichletData& dirichlet,
                                     ForceTerm force = ForceTerm::applied);

/// Result of comparing (A - C)u against -k2 * D1(D1 u) site by site.
struct OperatorDifferenceReport {
  int sites_checked = 0;
  double max_abs_deviation = 0.0;
  /// Largest deviation divided by eps * (sum of |terms| entering the evaluation).
  double max_deviation_in_eps = 0.0;
  double tolerance_in_eps = 8.0;
  bool passed = true;
};

/// Checks the identity on every global interior site where the field has
/// full [i-2, i+2] support.
OperatorDifferenceReport operator_difference(const ChainModel& chain,
                                             std::span<const DisplacementField> fields,
                                             double tolerance_in_eps = 8.0);

/// Plain-text (row, col, value) triplets using global atom indices, full
/// symmetric pattern.
void write_triplets(const BandedSystem& system, std::ostream& os);

}  // namespace atc
