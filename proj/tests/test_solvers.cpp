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
#include <numbers>
#include <random>

#include "atc/error.hpp"
#include "atc/lattice.hpp"
#include "atc/operators.hpp"
#include "atc/solvers.hpp"
#include "support.hpp"

using namespace atc;

TEST_CASE("banded solver: diagonal system returns the rhs") {
  BandedSystem sys;
  sys.size = 4;
  sys.half_bandwidth = 0;
  sys.index_offset = 3;
  sys.bands = {{1.0, 1.0, 1.0, 1.0}};
  sys.rhs = {1.0, -2.0, 3.0, 0.5};
  const auto r = solve_banded(sys);
  for (int i = 0; i < 4; ++i) CHECK(r.solution(3 + i) == sys.rhs[i]);
}

TEST_CASE("banded solver: random SPD band matches a dense factorization") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> draw(-1.0, 1.0);
  BandedSystem sys;
  sys.size = 50;
  sys.half_bandwidth = 2;
  sys.bands.assign(3, std::vector<double>(50, 0.0));
  for (int r = 0; r < 50; ++r) {
    sys.bands[1][r] = r >= 1 ? draw(rng) : 0.0;
    sys.bands[2][r] = r >= 2 ? draw(rng) : 0.0;
  }
  // Diagonal dominance guarantees positive definiteness.
  for (int r = 0; r < 50; ++r) sys.bands[0][r] = 5.0 + draw(rng);
  sys.rhs.resize(50);
  for (auto& v : sys.rhs) v = draw(rng);

  const auto banded = solve_banded(sys).solution;
  Eigen::VectorXd rhs(50);
  for (int r = 0; r < 50; ++r) rhs(r) = sys.rhs[r];
  const Eigen::VectorXd dense = sys.dense().llt().solve(rhs);
  for (int r = 0; r < 50; ++r) CHECK(std::abs(banded(r) - dense(r)) <= 1e-12 * std::abs(dense(r)) + 1e-15);
}

TEST_CASE("banded solver: indefinite matrix names the failing pivot") {
  BandedSystem sys;
  sys.size = 2;
  sys.half_bandwidth = 1;
  sys.index_offset = 7;
  sys.bands = {{1.0, 1.0}, {0.0, 2.0}};
  sys.rhs = {0.0, 0.0};
  try {
    solve_banded(sys);
    FAIL("expected a solver error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::solver);
    CHECK(std::string(e.what()).find("site 8") != std::string::npos);
  }
}

TEST_CASE("global atomistic solves") {
  const auto zero = ChainModel::build(20, 1.0, -1.0 / 6.0, ForceSpec{});
  CHECK(atc::testing::all_zero(solve_full_atomistic(zero)));

  const auto n5 = ChainModel::build(5, 1.0, -1.0 / 6.0, ForceSpec::parse("point:2:1"));
  const auto u5 = solve_full_atomistic(n5);
  CHECK(u5(2) == doctest::Approx(15.0 / 16.0));
  CHECK(u5(3) == doctest::Approx(9.0 / 16.0));
  CHECK(u5(0) == 0.0);
  CHECK(u5(1) == 0.0);
  CHECK(u5(4) == 0.0);
  CHECK(u5(5) == 0.0);

  const auto n4 = []() { return ChainModel::build(4, 1.0, -1.0 / 6.0, ForceSpec{}); };
  CHECK_THROWS_AS(n4(), Error);

  // Unknowns u2, u3, u4 with u2 = u4 by symmetry: (11/6) u2 = u3 and
  // (19/18) u2 = 1.
  const auto n6 = ChainModel::build(6, 1.0, -1.0 / 6.0, ForceSpec::parse("point:3:1"));
  const auto u6 = solve_full_atomistic(n6);
  CHECK(u6(2) == doctest::Approx(18.0 / 19.0));
  CHECK(u6(4) == doctest::Approx(18.0 / 19.0));
  CHECK(u6(3) == doctest::Approx(33.0 / 19.0));
}

TEST_CASE("global continuum solves") {
  const auto zero = ChainModel::build(20, 1.0, -1.0 / 6.0, ForceSpec{});
  CHECK(atc::testing::all_zero(solve_full_continuum(zero)));

  // (2/3) u2 - (1/3) u3 = 0 and (2/3)(u3 - u2) = 1.
  const auto n6 = ChainModel::build(6, 1.0, -1.0 / 6.0, ForceSpec::parse("point:3:1"));
  const auto u6 = solve_full_continuum(n6);
  CHECK(u6(2) == doctest::Approx(1.5));
  CHECK(u6(3) == doctest::Approx(3.0));
  CHECK(u6(4) == doctest::Approx(1.5));
  CHECK(u6(1) == 0.0);
  CHECK(u6(5) == 0.0);

  // Inhomogeneous data with no load: linear interpolant between sites 1 and N-1.
  const auto strained = zero.with_outer_boundary({0.0, 0.1, 1.9, 2.0});
  const auto u = solve_full_continuum(strained);
  for (int i = 1; i <= 19; ++i) CHECK(u(i) == doctest::Approx(0.1 * i));
}

TEST_CASE("subproblems") {
  const auto zero = ChainModel::build(100, 1.0, -1.0 / 6.0, ForceSpec{});
  const auto d = Decomposition::decompose(zero, 10, 20);
  CHECK(atc::testing::all_zero(solve_atomistic_subproblem(zero, d, {0.0, 0.0})));
  CHECK(atc::testing::all_zero(solve_continuum_subproblem(zero, d, 0.0)));

  const auto uc = solve_continuum_subproblem(zero, d, 2.0);
  for (int i = 10; i <= 99; ++i) CHECK(uc(i) == doctest::Approx(2.0 * (99.0 - i) / 89.0));

  const double f = 0.01;
  const auto strained = zero.with_outer_boundary({0.0, f, 99 * f, 100 * f});
  const auto ua = solve_atomistic_subproblem(strained, d, {19 * f, 20 * f});
  for (int i = 0; i <= 20; ++i) CHECK(ua(i) == doctest::Approx(i * f).epsilon(1e-12));
}

TEST_CASE("subproblem with exact traces reproduces the global solution") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> draw(-1.0, 1.0);
  std::vector<double> table(81);
  for (auto& v : table) v = draw(rng);
  const auto chain = ChainModel::build(80, 1.0, -1.0 / 6.0, ForceSpec::from_table(table));
  const auto d = Decomposition::decompose(chain, 12, 30);
  const auto ref = solve_full_atomistic(chain);
  const auto ua = solve_atomistic_subproblem(chain, d, {ref(29), ref(30)});
  for (int i = 0; i <= 30; ++i) CHECK(ua(i) == doctest::Approx(ref(i)).epsilon(1e-12));
}

TEST_CASE("continuum subproblem agrees with the dense oracle") {
  const auto chain = ChainModel::build(60, 1.0, -1.0 / 6.0, ForceSpec::parse("sine:1"));
  const auto d = Decomposition::decompose(chain, 8, 20);
  const auto banded = solve_continuum_subproblem(chain, d, 0.7);
  const auto dense = solve_dense(assemble_continuum_dense(chain, {9, 58}, {{8, 0.7}, {59, 0.0}}));
  for (int i = 9; i <= 58; ++i) CHECK(std::abs(banded(i) - dense(i - 9)) <= 1e-12 * (1.0 + std::abs(dense(i - 9))));
}

TEST_CASE("modeling error prefactor") {
  const auto chain = ChainModel::build(10, 1.0, -1.0 / 6.0, ForceSpec{});
  // Three unknowns: smallest eigenvalue of the continuum matrix is (2 - sqrt 2)/3.
  const double lambda_min = (2.0 - std::numbers::sqrt2) / 3.0;
  CHECK(modeling_error_prefactor(chain, 3) == doctest::Approx((1.0 / 6.0) / lambda_min));
  CHECK(modeling_error_prefactor(chain, 3) == doctest::Approx(0.853553).epsilon(1e-6));
  Eigen::Matrix3d c;
  c << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  c /= 3.0;
  const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(c).eigenvalues();
  CHECK(ev(0) == doctest::Approx(lambda_min));
  CHECK(ev(1) == doctest::Approx(2.0 / 3.0));
  CHECK(ev(2) == doctest::Approx((2.0 + std::numbers::sqrt2) / 3.0));
}

TEST_CASE("modeling error bound: zero load and a sine load") {
  const auto zero = ChainModel::build(50, 1.0, -1.0 / 6.0, ForceSpec{});
  const auto b0 = modeling_error_bound(zero, solve_full_atomistic(zero), zero.interior());
  CHECK(b0.bound == 0.0);

  const auto chain = ChainModel::build(200, 1.0, -1.0 / 6.0, ForceSpec::parse("sine:1"));
  const auto ua = solve_full_atomistic(chain);
  const auto uc = solve_full_continuum(chain);
  const auto b = modeling_error_bound(chain, ua, chain.interior());
  CHECK(std::sqrt(distance_squared(ua, uc, chain.domain())) <= b.bound);
  CHECK(b.bound <= b.asymptotic_bound);
}
