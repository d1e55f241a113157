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

#include "atc/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "atc/error.hpp"

namespace atc {

namespace {

Eigen::VectorXd restrict_to(const DisplacementField& u, IndexRange over, double sign = 1.0) {
  Eigen::VectorXd v(over.size());
  for (int i = over.lo; i <= over.hi; ++i) v(i - over.lo) = sign * u(i);
  return v;
}

struct GramSolve {
  Eigen::MatrixXd basis;
  Eigen::MatrixXd gram;
  Eigen::VectorXd rhs;
  Eigen::VectorXd controls;
  double min_eigenvalue = 0.0;
  double condition = 0.0;
};

// Least-squares solve on the basis matrix itself. Forming the gram squares
// its condition number, which grows with N for short overlaps.
Eigen::VectorXd least_squares(const Eigen::MatrixXd& basis, const Eigen::VectorXd& offset) {
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
  if (qr.rank() < basis.cols()) throw_solver("reduced system: rank-deficient basis");
  return qr.solve(-offset);
}

// Minimizes 1/2 || sum_j c_j basis_j + offset ||^2.
GramSolve minimize_over_basis(const std::vector<Eigen::VectorXd>& basis,
                              const Eigen::VectorXd& offset) {
  const int m = static_cast<int>(basis.size());
  GramSolve out;
  out.basis.resize(offset.size(), m);
  for (int j = 0; j < m; ++j) out.basis.col(j) = basis[j];
  out.gram.resize(m, m);
  out.rhs.resize(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) out.gram(i, j) = out.gram(j, i) = basis[i].dot(basis[j]);
    out.rhs(i) = -offset.dot(basis[i]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.gram, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = eig.eigenvalues().minCoeff();
  const double max_eigenvalue = eig.eigenvalues().maxCoeff();
  if (!(out.min_eigenvalue > 0.0)) {
    std::ostringstream os;
    os << "reduced system: gram matrix is not positive definite (smallest eigenvalue "
       << out.min_eigenvalue << ")";
    throw Error(ErrorKind::verification, os.str());
  }
  out.condition = max_eigenvalue / out.min_eigenvalue;
  out.controls = least_squares(out.basis, offset);
  return out;
}

}  // namespace

HomogeneousStates homogeneous_states(const ChainModel& chain, const Decomposition& decomp) {
  return {solve_atomistic_subproblem(chain, decomp, {0.0, 0.0}, Sources::included),
          solve_continuum_subproblem(chain, decomp, 0.0, Sources::included)};
}

DisplacementField lift_atomistic(const ChainModel& chain, const Decomposition& decomp,
                                 std::array<double, 2> theta_a) {
  return solve_atomistic_subproblem(chain, decomp, theta_a, Sources::excluded);
}

DisplacementField lift_continuum(const Decomposition& decomp, double theta_c) {
  const IndexRange range = decomp.continuum();
  const double nbar = decomp.continuum_outer_boundary();
  const double width = nbar - decomp.k();
  auto v = DisplacementField::zeros(range, DomainTag::continuum);
  for (int i = range.lo; i <= range.hi; ++i) v(i) = theta_c * (nbar - i) / width;
  return v;
}

MismatchSplit mismatch_norm(const DisplacementField& u_a, const DisplacementField& u_c,
                            const Decomposition& decomp) {
  const IndexRange overlap = decomp.overlap();
  if (!u_a.covers(overlap) || !u_c.covers(overlap))
    throw_invalid("mismatch_norm: fields must cover the overlap [K, L]");
  MismatchSplit s;
  auto sq = [&](int i) {
    const double d = u_a(i) - u_c(i);
    return d * d;
  };
  s.total = distance_squared(u_a, u_c, overlap);
  s.at_continuum_boundary = sq(decomp.k());
  for (int i = decomp.overlap_interior().lo; i <= decomp.overlap_interior().hi; ++i)
    s.interior += sq(i);
  for (int i : decomp.atomistic_artificial_boundary()) s.at_atomistic_boundary += sq(i);
  return s;
}

ReducedSystem assemble_reduced_system(const ChainModel& chain, const Decomposition& decomp) {
  const IndexRange overlap = decomp.overlap();
  auto states = homogeneous_states(chain, decomp);
  std::array<DisplacementField, 3> liftings{lift_atomistic(chain, decomp, {1.0, 0.0}),
                                            lift_atomistic(chain, decomp, {0.0, 1.0}),
                                            lift_continuum(decomp, 1.0)};
  const std::vector<Eigen::VectorXd> basis{restrict_to(liftings[0], overlap),
                                           restrict_to(liftings[1], overlap),
                                           restrict_to(liftings[2], overlap, -1.0)};
  const Eigen::VectorXd offset =
      restrict_to(states.atomistic, overlap) - restrict_to(states.continuum, overlap);
  const auto solved = minimize_over_basis(basis, offset);

  ReducedSystem sys{solved.gram,      solved.rhs,       std::move(liftings),
                    std::move(states), solved.basis,     offset,
                    solved.min_eigenvalue, solved.condition, {}};
  if (sys.condition > kGramConditionWarning) {
    std::ostringstream os;
    os << "gram condition number " << sys.condition << " exceeds " << kGramConditionWarning;
    sys.warnings.push_back(os.str());
  }
  return sys;
}

ControlPair solve_controls(const ReducedSystem& system) {
  if (system.basis.cols() == 3)
    return ControlPair::from_vector(least_squares(system.basis, system.offset));
  Eigen::LLT<Eigen::Matrix3d> llt(system.gram);
  if (llt.info() != Eigen::Success) throw_solver("solve_controls: singular gram matrix");
  return ControlPair::from_vector(llt.solve(system.rhs));
}

namespace {

DisplacementField compose_field(const ChainModel& chain, const Decomposition& decomp,
                                const DisplacementField& u_a, const DisplacementField& u_c) {
  auto u = DisplacementField::zeros(chain.domain(), DomainTag::global);
  for (int i = 0; i <= decomp.l(); ++i) u(i) = u_a(i);
  for (int i = decomp.l() + 1; i <= decomp.continuum_outer_boundary(); ++i) u(i) = u_c(i);
  u(chain.n()) = chain.outer().u_n;
  return u;
}

AtcResult make_result(const ChainModel& chain, const Decomposition& decomp,
                      const ControlPair& controls, DisplacementField u_a,
                      DisplacementField u_c) {
  auto u_atc = compose_field(chain, decomp, u_a, u_c);
  const double mismatch = distance_squared(u_a, u_c, decomp.overlap());
  return AtcResult{controls, std::move(u_a), std::move(u_c), std::move(u_atc), mismatch, {}};
}

}  // namespace

AtcResult compose_atc(const ChainModel& chain, const Decomposition& decomp,
                      const ControlPair& controls) {
  return make_result(chain, decomp, controls,
                     solve_atomistic_subproblem(chain, decomp, controls.atomistic()),
                     solve_continuum_subproblem(chain, decomp, controls.theta_c_k));
}

AtcResult compose_atc(const ChainModel& chain, const Decomposition& decomp,
                      const ReducedSystem& system, const ControlPair& controls) {
  auto u_a = system.states.atomistic;
  for (int i = u_a.lo(); i <= u_a.hi(); ++i)
    u_a(i) += controls.theta_a_lm1 * system.liftings[0](i) +
              controls.theta_a_l * system.liftings[1](i);
  auto u_c = system.states.continuum;
  for (int i = u_c.lo(); i <= u_c.hi(); ++i)
    u_c(i) += controls.theta_c_k * system.liftings[2](i);
  return make_result(chain, decomp, controls, std::move(u_a), std::move(u_c));
}

ControlPair trace(const DisplacementField& u, const Decomposition& decomp) {
  const int k = decomp.k();
  const int l = decomp.l();
  if (!u.covers(k) || !u.covers(l - 1) || !u.covers(l))
    throw_invalid("trace: field does not cover {K, L-1, L}");
  return {u(l - 1), u(l), u(k)};
}

double reduced_objective(const ChainModel& chain, const Decomposition& decomp,
                         const ControlPair& controls) {
  const auto u_a = solve_atomistic_subproblem(chain, decomp, controls.atomistic());
  const auto u_c = solve_continuum_subproblem(chain, decomp, controls.theta_c_k);
  return 0.5 * distance_squared(u_a, u_c, decomp.overlap());
}

Eigen::Vector3d objective_gradient_fd(const ChainModel& chain, const Decomposition& decomp,
                                      const ControlPair& at, double step) {
  Eigen::Vector3d g;
  const Eigen::Vector3d x = at.as_vector();
  for (int j = 0; j < 3; ++j) {
    Eigen::Vector3d plus = x, minus = x;
    plus(j) += step;
    minus(j) -= step;
    g(j) = (reduced_objective(chain, decomp, ControlPair::from_vector(plus)) -
            reduced_objective(chain, decomp, ControlPair::from_vector(minus))) /
           (2.0 * step);
  }
  return g;
}

AtcResult solve_atc(const ChainModel& chain, const Decomposition& decomp) {
  const auto system = assemble_reduced_system(chain, decomp);
  const auto controls = solve_controls(system);
  auto result = compose_atc(chain, decomp, system, controls);

  auto& diag = result.diagnostics;
  diag.gram_condition = system.condition;
  diag.gram_min_eigenvalue = system.min_eigenvalue;
  diag.control_residual = (system.gram * controls.as_vector() - system.rhs).cwiseAbs().maxCoeff();
  diag.warnings = system.warnings;

  const Eigen::Vector3d x = controls.as_vector();
  const double step = 1e-3 * (1.0 + x.cwiseAbs().maxCoeff());
  diag.optimality_gradient =
      objective_gradient_fd(chain, decomp, controls, step).cwiseAbs().maxCoeff();
  for (int i = decomp.k(); i <= decomp.l(); ++i) {
    const double s = std::abs(result.u_a_op(i)) + std::abs(result.u_c_op(i));
    diag.objective_scale += 0.5 * s * s;
  }
  return result;
}

ConsistentResult solve_atc_consistent(const ChainModel& chain, const Decomposition& decomp) {
  const int n = chain.n();
  const int k = decomp.k();
  const IndexRange overlap = decomp.overlap();
  const IndexRange interior{k + 2, n - 2};
  const auto& outer = chain.outer();

  auto continuum_side = [&](double a, double b, bool with_sources) {
    const DirichletData bc{{k, a},
                           {k + 1, b},
                           {n - 1, with_sources ? outer.u_nm1 : 0.0},
                           {n, with_sources ? outer.u_n : 0.0}};
    return solve_atomistic_region(chain, interior, bc,
                                  with_sources ? ForceTerm::applied : ForceTerm::none,
                                  DomainTag::continuum);
  };

  const auto ua0 = solve_atomistic_subproblem(chain, decomp, {0.0, 0.0}, Sources::included);
  const auto uc0 = continuum_side(0.0, 0.0, true);
  const std::array<DisplacementField, 4> lift{lift_atomistic(chain, decomp, {1.0, 0.0}),
                                              lift_atomistic(chain, decomp, {0.0, 1.0}),
                                              continuum_side(1.0, 0.0, false),
                                              continuum_side(0.0, 1.0, false)};
  const std::vector<Eigen::VectorXd> basis{
      restrict_to(lift[0], overlap), restrict_to(lift[1], overlap),
      restrict_to(lift[2], overlap, -1.0), restrict_to(lift[3], overlap, -1.0)};
  const auto solved =
      minimize_over_basis(basis, restrict_to(ua0, overlap) - restrict_to(uc0, overlap));
  const Eigen::VectorXd& c = solved.controls;

  auto u_a = ua0;
  for (int i = u_a.lo(); i <= u_a.hi(); ++i) u_a(i) += c(0) * lift[0](i) + c(1) * lift[1](i);
  auto u_c = uc0;
  for (int i = u_c.lo(); i <= u_c.hi(); ++i) u_c(i) += c(2) * lift[2](i) + c(3) * lift[3](i);

  auto u_atc = DisplacementField::zeros(chain.domain(), DomainTag::global);
  for (int i = 0; i <= n; ++i) u_atc(i) = i <= decomp.l() ? u_a(i) : u_c(i);

  ConsistentResult out{{c(0), c(1), c(2), c(3)}, std::move(u_a), std::move(u_c),
                       std::move(u_atc), 0.0, solved.min_eigenvalue};
  out.mismatch = distance_squared(out.u_a_op, out.u_c_op, overlap);
  return out;
}

}  // namespace atc
