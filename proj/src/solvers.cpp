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

#include "atc/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <numbers>
#include <string>
#include <vector>

#include "atc/error.hpp"

namespace atc {

namespace {

// Banded LL^T without pivoting. low[d][r] = L(r, r - d).
class BandedCholesky {
 public:
  explicit BandedCholesky(const BandedSystem& sys)
      : n_(sys.size), bw_(sys.half_bandwidth),
        low_(bw_ + 1, std::vector<double>(n_, 0.0)) {
    for (int r = 0; r < n_; ++r) {
      const int first = std::max(0, r - bw_);
      for (int c = first; c < r; ++c) {
        double s = sys.bands[r - c][r];
        for (int k = std::max(first, c - bw_); k < c; ++k) s -= at(r, k) * at(c, k);
        low_[r - c][r] = s / low_[0][c];
      }
      double s = sys.bands[0][r];
      for (int k = first; k < r; ++k) s -= at(r, k) * at(r, k);
      if (!(s > 0.0))
        throw_solver("solve_banded: non-positive pivot at row " + std::to_string(r) +
                     " (site " + std::to_string(sys.index_offset + r) + ")");
      low_[0][r] = std::sqrt(s);
    }
  }

  void solve_in_place(std::vector<double>& x) const {
    for (int r = 0; r < n_; ++r) {
      double s = x[r];
      for (int k = std::max(0, r - bw_); k < r; ++k) s -= at(r, k) * x[k];
      x[r] = s / low_[0][r];
    }
    for (int r = n_ - 1; r >= 0; --r) {
      double s = x[r];
      for (int j = r + 1; j <= std::min(n_ - 1, r + bw_); ++j) s -= at(j, r) * x[j];
      x[r] = s / low_[0][r];
    }
  }

 private:
  double at(int r, int c) const { return low_[r - c][r]; }

  int n_;
  int bw_;
  std::vector<std::vector<double>> low_;
};

SolveReport solve_factored(const BandedSystem& sys, const BandedCholesky& factor) {
  const int n = sys.size;
  std::vector<double> x(sys.rhs);
  factor.solve_in_place(x);

  const auto ax = sys.multiply(x);
  double res = 0.0;
  double rhs_max = 0.0;
  for (int r = 0; r < n; ++r) {
    res = std::max(res, std::abs(ax[r] - sys.rhs[r]));
    rhs_max = std::max(rhs_max, std::abs(sys.rhs[r]));
  }
  if (!(res <= kResidualTolerance * (1.0 + rhs_max)))
    throw_solver("solve_banded: residual " + std::to_string(res) + " above tolerance");
  return SolveReport{DisplacementField(sys.range(), sys.tag, std::move(x)), res, true};
}

void check_system(const BandedSystem& sys) {
  if (sys.size <= 0) throw_invalid("solve_banded: empty system");
  if (static_cast<int>(sys.rhs.size()) != sys.size)
    throw_invalid("solve_banded: rhs size mismatch");
}

}  // namespace

SolveReport solve_banded(const BandedSystem& sys) {
  check_system(sys);
  return solve_factored(sys, BandedCholesky(sys));
}

Eigen::VectorXd solve_dense(const DenseSystem& sys) {
  Eigen::LLT<Eigen::MatrixXd> llt(sys.matrix);
  if (llt.info() != Eigen::Success) throw_solver("solve_dense: matrix not positive definite");
  return llt.solve(sys.rhs);
}

namespace {

DisplacementField embed(const SolveReport& report, IndexRange full,
                        const DirichletData& dirichlet, DomainTag tag) {
  auto u = DisplacementField::zeros(full, tag);
  for (int i = full.lo; i <= full.hi; ++i) {
    if (report.solution.covers(i)) {
      u(i) = report.solution(i);
    } else {
      auto it = dirichlet.find(i);
      if (it == dirichlet.end())
        throw_invalid("solve: missing boundary value at site " + std::to_string(i));
      u(i) = it->second;
    }
  }
  return u;
}

}  // namespace

namespace {

// Solves -sum_m springs[m-1] D_m u = f on `interior` and refines the result
// against that residual evaluated on bond differences in extended precision.
// The stored matrix rows need not sum to zero exactly in floating point, so
// refining against the matrix alone leaves an O(cond(A) eps |u|) error that
// is visible on uniform strains of long chains.
DisplacementField solve_region(const ChainModel& chain, IndexRange interior,
                               const DirichletData& dirichlet, ForceTerm force,
                               DomainTag tag, const BandedSystem& sys,
                               std::span<const double> springs) {
  check_system(sys);
  const BandedCholesky factor(sys);
  const int reach = static_cast<int>(springs.size());
  auto u = embed(solve_factored(sys, factor), {interior.lo - reach, interior.hi + reach},
                 dirichlet, tag);

  std::vector<double> d(sys.size);
  for (int pass = 0; pass < kRefinementPasses; ++pass) {
    for (int i = interior.lo; i <= interior.hi; ++i) {
      long double r = force == ForceTerm::applied ? chain.force(i) : 0.0;
      for (int m = 1; m <= reach; ++m) {
        const long double ahead = static_cast<long double>(u(i + m)) - u(i);
        const long double behind = static_cast<long double>(u(i)) - u(i - m);
        r += springs[m - 1] * (ahead - behind);
      }
      d[i - interior.lo] = static_cast<double>(r);
    }
    factor.solve_in_place(d);
    double change = 0.0;
    double scale = 0.0;
    for (int i = interior.lo; i <= interior.hi; ++i) {
      u(i) += d[i - interior.lo];
      change = std::max(change, std::abs(d[i - interior.lo]));
      scale = std::max(scale, std::abs(u(i)));
    }
    if (change <= std::numeric_limits<double>::epsilon() * scale) break;
  }
  return u;
}

}  // namespace

DisplacementField solve_atomistic_region(const ChainModel& chain, IndexRange interior,
                                         const DirichletData& dirichlet, ForceTerm force,
                                         DomainTag tag) {
  const double springs[] = {chain.k1(), chain.k2()};
  return solve_region(chain, interior, dirichlet, force, tag,
                      assemble_atomistic(chain, interior, dirichlet, force, tag), springs);
}

DisplacementField solve_continuum_region(const ChainModel& chain, IndexRange interior,
                                         const DirichletData& dirichlet, ForceTerm force,
                                         DomainTag tag) {
  const double springs[] = {chain.kc()};
  return solve_region(chain, interior, dirichlet, force, tag,
                      assemble_continuum(chain, interior, dirichlet, force, tag), springs);
}

DisplacementField solve_full_atomistic(const ChainModel& chain) {
  const int n = chain.n();
  const auto& b = chain.outer();
  const DirichletData bc{{0, b.u0}, {1, b.u1}, {n - 1, b.u_nm1}, {n, b.u_n}};
  return solve_atomistic_region(chain, chain.interior(), bc, ForceTerm::applied,
                                DomainTag::global);
}

DisplacementField solve_full_continuum(const ChainModel& chain) {
  const int n = chain.n();
  const auto& b = chain.outer();
  const DirichletData bc{{1, b.u1}, {n - 1, b.u_nm1}};
  const auto inner = solve_continuum_region(chain, chain.interior(), bc,
                                            ForceTerm::applied, DomainTag::global);
  auto u = DisplacementField::zeros(chain.domain(), DomainTag::global);
  for (int i = 1; i <= n - 1; ++i) u(i) = inner(i);
  u(0) = b.u0;
  u(n) = b.u_n;
  return u;
}

DisplacementField solve_atomistic_subproblem(const ChainModel& chain,
                                             const Decomposition& decomp,
                                             std::array<double, 2> theta_a, Sources sources) {
  const bool with = sources == Sources::included;
  const int l = decomp.l();
  const DirichletData bc{{0, with ? chain.outer().u0 : 0.0},
                         {1, with ? chain.outer().u1 : 0.0},
                         {l - 1, theta_a[0]},
                         {l, theta_a[1]}};
  return solve_atomistic_region(chain, decomp.atomistic_interior(), bc,
                                with ? ForceTerm::applied : ForceTerm::none,
                                DomainTag::atomistic);
}

DisplacementField solve_continuum_subproblem(const ChainModel& chain,
                                             const Decomposition& decomp, double theta_c,
                                             Sources sources) {
  const bool with = sources == Sources::included;
  const DirichletData bc{{decomp.k(), theta_c},
                         {decomp.continuum_outer_boundary(),
                          with ? chain.outer().u_nm1 : 0.0}};
  return solve_continuum_region(chain, decomp.continuum_interior(), bc,
                                with ? ForceTerm::applied : ForceTerm::none,
                                DomainTag::continuum);
}

double modeling_error_prefactor(const ChainModel& chain, int unknowns) {
  if (unknowns < 1) throw_invalid("modeling_error_bound: domain too small");
  const double s = std::sin(std::numbers::pi / (2.0 * (unknowns + 1)));
  return std::abs(chain.k2()) / (4.0 * chain.kc() * s * s);
}

ModelingErrorBound modeling_error_bound(const ChainModel& chain,
                                        const DisplacementField& u_ref,
                                        IndexRange interior) {
  if (interior.size() < 1) throw_invalid("modeling_error_bound: domain too small");
  if (!u_ref.covers(IndexRange{interior.lo - 2, interior.hi + 2}))
    throw_invalid("modeling_error_bound: reference field lacks stencil support");
  ModelingErrorBound out;
  out.unknowns = interior.size();
  double acc = 0.0;
  for (int i = interior.lo; i <= interior.hi; ++i) {
    const double d = delta1_squared(u_ref, i);
    acc += d * d;
  }
  out.delta_norm = std::sqrt(acc);
  out.prefactor = modeling_error_prefactor(chain, out.unknowns);
  out.bound = out.prefactor * out.delta_norm;
  out.asymptotic_constant = std::abs(chain.k2()) / (4.0 * chain.kc());
  const double n = chain.n();
  out.asymptotic_bound = out.asymptotic_constant * n * n * out.delta_norm;
  return out;
}

}  // namespace atc
