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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "atc/lattice.hpp"
#include "atc/operators.hpp"
#include "atc/solvers.hpp"

using namespace atc;

namespace {

DisplacementField power_field(int n, int power) {
  auto u = DisplacementField::zeros({0, n}, DomainTag::global);
  for (int i = 0; i <= n; ++i) u(i) = std::pow(static_cast<double>(i), power);
  return u;
}

}  // namespace

TEST_CASE("difference stencils on polynomials") {
  const auto c = power_field(10, 0);
  const auto lin = power_field(10, 1);
  const auto sq = power_field(10, 2);
  for (int i = 2; i <= 8; ++i) {
    CHECK(delta1(c, i) == 0.0);
    CHECK(delta2(c, i) == 0.0);
    CHECK(delta1(lin, i) == 0.0);
    CHECK(delta2(lin, i) == 0.0);
    CHECK(delta1(sq, i) == 2.0);
    CHECK(delta2(sq, i) == 8.0);
  }
}

TEST_CASE("operator identity on polynomial fields") {
  const auto chain = ChainModel::build(12, 1.0, -1.0 / 6.0, ForceSpec{});
  const double k2 = chain.k2();
  const auto lin = power_field(12, 1);
  const auto sq = power_field(12, 2);
  const auto quart = power_field(12, 4);
  for (int i = 2; i <= 10; ++i) {
    CHECK(apply_atomistic(chain, lin, i) - apply_continuum(chain, lin, i) == 0.0);
    CHECK(apply_atomistic(chain, sq, i) - apply_continuum(chain, sq, i) ==
          doctest::Approx(0.0));
    CHECK(delta1_squared(quart, i) == doctest::Approx(24.0));
    CHECK(apply_atomistic(chain, quart, i) - apply_continuum(chain, quart, i) ==
          doctest::Approx(-k2 * 24.0));
  }
  const std::vector<DisplacementField> fields{lin, sq, quart};
  CHECK(operator_difference(chain, fields).passed);
}

TEST_CASE("atomistic assembly: smallest chain") {
  // Unknowns u2, u3: (5/3) u2 - u3 = 1 and -u2 + (5/3) u3 = 0.
  const auto chain = ChainModel::build(5, 1.0, -1.0 / 6.0, ForceSpec::parse("point:2:1"));
  const auto sys =
      assemble_atomistic(chain, {2, 3}, {{0, 0.0}, {1, 0.0}, {4, 0.0}, {5, 0.0}});
  REQUIRE(sys.size == 2);
  CHECK(sys.entry(0, 0) == doctest::Approx(5.0 / 3.0));
  CHECK(sys.entry(0, 1) == doctest::Approx(-1.0));
  CHECK(sys.rhs[0] == 1.0);
  CHECK(sys.rhs[1] == 0.0);
  const auto u = solve_banded(sys).solution;
  CHECK(u(2) == doctest::Approx(15.0 / 16.0));
  CHECK(u(3) == doctest::Approx(9.0 / 16.0));
}

TEST_CASE("continuum assembly: entries and Dirichlet folding") {
  const auto chain = ChainModel::build(10, 1.0, -1.0 / 6.0, ForceSpec{});
  const auto sys = assemble_continuum(chain, {2, 8}, {{1, 2.0}, {9, 5.0}});
  CHECK(sys.half_bandwidth == 1);
  CHECK(sys.entry(3, 3) == doctest::Approx(2.0 / 3.0));
  CHECK(sys.entry(3, 4) == doctest::Approx(-1.0 / 3.0));
  CHECK(sys.rhs[0] == doctest::Approx(2.0 / 3.0));
  CHECK(sys.rhs[6] == doctest::Approx(5.0 / 3.0));
  // Discrete harmonic: the linear interpolant between 2 at site 1 and 5 at site 9.
  const auto u = solve_banded(sys).solution;
  for (int i = 2; i <= 8; ++i) CHECK(u(i) == doctest::Approx(2.0 + 3.0 * (i - 1) / 8.0));
}

TEST_CASE("stencil and bond-Hessian assemblies agree") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> draw(-1.0, 1.0);
  std::vector<double> f(31);
  for (auto& v : f) v = draw(rng);
  const auto chain = ChainModel::build(30, 1.3, -0.2, ForceSpec::from_table(f));
  const DirichletData bc{{0, 0.5}, {1, -0.25}, {29, 1.0}, {30, 2.0}};
  const auto banded = assemble_atomistic(chain, {2, 28}, bc);
  const auto dense = assemble_atomistic_dense(chain, {2, 28}, bc);
  const auto m = banded.dense();
  CHECK((m - dense.matrix).cwiseAbs().maxCoeff() < 1e-14);
  for (int r = 0; r < banded.size; ++r) CHECK(banded.rhs[r] == doctest::Approx(dense.rhs(r)));

  const DirichletData cbc{{1, -0.25}, {29, 1.0}};
  const auto cb = assemble_continuum(chain, {2, 28}, cbc);
  const auto cd = assemble_continuum_dense(chain, {2, 28}, cbc);
  CHECK((cb.dense() - cd.matrix).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("assembly rejects missing boundary data") {
  const auto chain = ChainModel::build(10, 1.0, -1.0 / 6.0, ForceSpec{});
  CHECK_THROWS(assemble_atomistic(chain, {2, 8}, {{0, 0.0}, {1, 0.0}, {9, 0.0}}));
}

TEST_CASE("triplet dump uses global indices") {
  const auto chain = ChainModel::build(6, 1.0, -1.0 / 6.0, ForceSpec{});
  const auto sys = assemble_continuum(chain, {2, 4}, {{1, 0.0}, {5, 0.0}});
  std::ostringstream os;
  write_triplets(sys, os);
  const std::string text = os.str();
  CHECK(text.rfind("2 2 ", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);
}
