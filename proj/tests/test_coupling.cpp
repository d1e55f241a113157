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

#include <doctest.h>

#include <cmath>
#include <random>

#include "atc/analysis.hpp"
#include "atc/coupling.hpp"
#include "atc/oracle.hpp"
#include "atc/solvers.hpp"
#include "support.hpp"

using namespace atc;
using atc::testing::kK1;
using atc::testing::kK2;

TEST_CASE("liftings") {
  const auto chain = ChainModel::build(100, kK1, kK2, ForceSpec{});
  const auto d = Decomposition::decompose(chain, 10, 20);
  CHECK(atc::testing::all_zero(lift_atomistic(chain, d, {0.0, 0.0})));
  CHECK(atc::testing::all_zero(lift_continuum(d, 0.0)));

  const auto vc = lift_continuum(d, 1.0);
  CHECK(vc(10) == 1.0);
  CHECK(vc(99) == 0.0);
  CHECK(vc(54) == doctest::Approx(45.0 / 89.0));

  // Linear data on {L-1, L} with zero data on {0, 1}: i/L plus the
  // zero-force response to the missing value 1/L at site 1.
  const auto va = lift_atomistic(chain, d, {19.0 / 20.0, 1.0});
  const auto fix = solve_atomistic_region(chain, d.atomistic_interior(),
                                          {{0, 0.0}, {1, -1.0 / 20.0}, {19, 0.0}, {20, 0.0}},
                                          ForceTerm::none, DomainTag::atomistic);
  for (int i = 0; i <= 20; ++i) CHECK(va(i) == doctest::Approx(i / 20.0 + fix(i)).epsilon(1e-12));
}

TEST_CASE("mismatch norm and its split") {
  const auto chain = ChainModel::build(100, kK1, kK2, ForceSpec{});
  const auto d = Decomposition::decompose(chain, 10, 20);
  auto a = DisplacementField::zeros(d.atomistic(), DomainTag::atomistic);
  auto c = DisplacementField::zeros(d.continuum(), DomainTag::continuum);
  CHECK(mismatch_norm(a, c, d).total == 0.0);
  for (int i = 0; i <= 20; ++i) a(i) = 1.0;
  const auto s = mismatch_norm(a, c, d);
  CHECK(s.total == 11.0);
  CHECK(s.at_continuum_boundary == 1.0);
  CHECK(s.interior == 8.0);
  CHECK(s.at_atomistic_boundary == 2.0);
}

TEST_CASE("trace reads (L-1, L | K)") {
  auto u = DisplacementField::zeros({0, 100}, DomainTag::global);
  for (int i = 0; i <= 100; ++i) u(i) = i;
  const auto chain = ChainModel::build(100, kK1, kK2, ForceSpec{});
  const auto t = trace(u, Decomposition::decompose(chain, 10, 20));
  CHECK(t.theta_a_lm1 == 19.0);
  CHECK(t.theta_a_l == 20.0);
  CHECK(t.theta_c_k == 10.0);
}

TEST_CASE("zero load gives the zero solution") {
  const auto chain = ChainModel::build(100, kK1, kK2, ForceSpec{});
  const auto d = Decomposition::decompose(chain, 10, 20);
  const auto sys = assemble_reduced_system(chain, d);
  CHECK(sys.rhs.cwiseAbs().maxCoeff() == 0.0);
  const auto r = solve_atc(chain, d);
  CHECK(r.controls.as_vector().cwiseAbs().maxCoeff() == 0.0);
  CHECK(atc::testing::all_zero(r.u_atc));
  CHECK(r.mismatch == 0.0);
}

TEST_CASE("gram for (100, 10, 20) is well conditioned and positive definite") {
  const auto chain = ChainModel::build(100, kK1, kK2, ForceSpec::parse("sine:1"));
  const auto d = Decomposition::decompose(chain, 10, 20);
  const auto sys = assemble_reduced_system(chain, d);
  CHECK(sys.min_eigenvalue > 0.1);
  CHECK(sys.condition < 1e3);
  CHECK(sys.warnings.empty());
  CHECK((sys.gram - sys.gram.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("patch test configuration") {
  const double f = 0.01;
  const auto chain =
      ChainModel::build(100, kK1, kK2, ForceSpec{}).with_outer_boundary({0, f, 99 * f, 100 * f});
  const auto d = Decomposition::decompose(chain, 10, 20);
  const auto r = solve_atc(chain, d);
  for (int i = 0; i <= 100; ++i) CHECK(std::abs(r.u_atc(i) - i * f) <= 2e-12);
  CHECK(r.mismatch <= 1e-24);
  CHECK(r.controls.theta_c_k == doctest::Approx(0.1));
}

TEST_CASE("superposed and freshly solved states agree") {
  std::mt19937_64 rng(21);
  const auto chain = atc::testing::random_chain(150, rng);
  const auto d = Decomposition::decompose(chain, 20, 40);
  const auto sys = assemble_reduced_system(chain, d);
  const auto theta = solve_controls(sys);
  const auto a = compose_atc(chain, d, sys, theta);
  const auto b = compose_atc(chain, d, theta);
  for (int i = 0; i <= 150; ++i) CHECK(a.u_atc(i) == doctest::Approx(b.u_atc(i)).epsilon(1e-11));
}

TEST_CASE("exact traces as controls give the projection of the reference") {
  std::mt19937_64 rng(8);
  const auto chain = atc::testing::random_chain(120, rng);
  const auto d = Decomposition::decompose(chain, 15, 30);
  const auto ref = solve_full_atomistic(chain);
  const auto r = compose_atc(chain, d, trace(ref, d));
  const auto uc = solve_continuum_subproblem(chain, d, ref(15));
  for (int i = 0; i <= 30; ++i) CHECK(r.u_atc(i) == doctest::Approx(ref(i)).epsilon(1e-11));
  for (int i = 31; i <= 119; ++i) CHECK(r.u_atc(i) == doctest::Approx(uc(i)).epsilon(1e-12));
  CHECK(r.u_atc(120) == 0.0);
  // The composed field reports the atomistic value at K, not the continuum control.
  CHECK(trace(r.u_atc, d).theta_c_k == r.u_a_op(15));
}

TEST_CASE("sine load on (40, 10, 20): optimality and oracle") {
  const auto chain = ChainModel::build(40, kK1, kK2, ForceSpec::parse("sine:1"));
  const auto d = Decomposition::decompose(chain, 10, 20);
  const auto r = solve_atc(chain, d);
  CHECK(r.diagnostics.optimality_gradient <= 1e-8);
  CHECK(r.diagnostics.control_residual <= 1e-10);
  const auto o = minimize_objective_fd_newton(chain, d);
  CHECK((o.controls.as_vector() - r.controls.as_vector()).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(o.objective == doctest::Approx(0.5 * r.mismatch).epsilon(1e-8));
}

TEST_CASE("consistent variant reproduces the global atomistic solution") {
  std::mt19937_64 rng(13);
  const auto chain = atc::testing::random_chain(200, rng);
  const auto d = Decomposition::decompose(chain, 30, 60);
  const auto ref = solve_full_atomistic(chain);
  const auto r = solve_atc_consistent(chain, d);
  CHECK(std::sqrt(distance_squared(r.u_atc, ref, chain.domain()) /
                  norm_squared(ref, chain.domain())) <= 1e-10);
  CHECK(r.controls[0] == doctest::Approx(ref(59)).epsilon(1e-10));
  CHECK(r.controls[1] == doctest::Approx(ref(60)).epsilon(1e-10));
  CHECK(r.controls[2] == doctest::Approx(ref(30)).epsilon(1e-10));
  CHECK(r.controls[3] == doctest::Approx(ref(31)).epsilon(1e-10));
  CHECK(r.mismatch <= 1e-20 * (1.0 + norm_squared(ref, chain.domain())));

  const auto zero = ChainModel::build(200, kK1, kK2, ForceSpec{});
  CHECK(atc::testing::all_zero(solve_atc_consistent(zero, d).u_atc));
}

TEST_CASE("load outside the continuum leaves its homogeneous state at zero") {
  const auto chain = ChainModel::build(100, kK1, kK2, ForceSpec::parse("point:5:1"));
  const auto d = Decomposition::decompose(chain, 10, 20);
  CHECK(atc::testing::all_zero(homogeneous_states(chain, d).continuum));
}
