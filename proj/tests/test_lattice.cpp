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

#include "atc/error.hpp"
#include "atc/lattice.hpp"

using namespace atc;

namespace {

bool invalid(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == ErrorKind::invalid_argument;
  }
  return false;
}

}  // namespace

TEST_CASE("chain: zero load and continuum stiffness") {
  const auto c = ChainModel::build(10, 1.0, -1.0 / 6.0, ForceSpec{});
  CHECK(c.n() == 10);
  CHECK(c.kc() == doctest::Approx(1.0 / 3.0));
  for (double f : c.forces()) CHECK(f == 0.0);
  CHECK(c.interior() == IndexRange{2, 8});
}

TEST_CASE("chain: stability and size preconditions") {
  CHECK(invalid([] { ChainModel::build(10, 1.0, -0.25, ForceSpec{}); }));
  CHECK(invalid([] { ChainModel::build(10, 1.0, 0.1, ForceSpec{}); }));
  CHECK(invalid([] { ChainModel::build(10, -1.0, -0.1, ForceSpec{}); }));
  CHECK(invalid([] { ChainModel::build(4, 1.0, -0.1, ForceSpec{}); }));
  CHECK(invalid([] { ChainModel::build(10, 1.0, -0.1, ForceSpec::parse("point:11:1")); }));
  CHECK(invalid([] { ChainModel::build(10, 1.0, -0.1, ForceSpec::from_table({1.0, 2.0})); }));
}

TEST_CASE("chain: sine load is zeroed on the outer boundary pairs") {
  const auto c = ChainModel::build(100, 1.0, -1.0 / 6.0, ForceSpec::parse("sine:1"));
  CHECK(c.force(0) == 0.0);
  CHECK(c.force(1) == 0.0);
  CHECK(c.force(99) == 0.0);
  CHECK(c.force(100) == 0.0);
  CHECK(c.force(50) == doctest::Approx(1.0));
  CHECK(c.force(25) == doctest::Approx(std::sin(std::numbers::pi / 4)));
}

TEST_CASE("force spec: text round trip and errors") {
  const auto p = ForceSpec::parse("point:25:1.5");
  CHECK(p.kind == ForceSpec::Kind::point);
  CHECK(p.site == 25);
  CHECK(p.magnitude == 1.5);
  const auto q = ForceSpec::parse("poly:2,-12,12");
  REQUIRE(q.coefficients.size() == 3);
  CHECK(q.coefficients[1] == -12.0);
  CHECK(ForceSpec::parse(q.to_string()).coefficients == q.coefficients);
  CHECK(invalid([] { ForceSpec::parse("cosine:1"); }));
  CHECK(invalid([] { ForceSpec::parse("point:3"); }));
  CHECK(invalid([] { ForceSpec::parse("sine:x"); }));
}

TEST_CASE("poly load evaluates in x = i / N") {
  const auto c = ChainModel::build(10, 1.0, -0.1, ForceSpec::parse("poly:1,2,3"));
  const double x = 0.4;
  CHECK(c.force(4) == doctest::Approx(1.0 + 2.0 * x + 3.0 * x * x));
}

TEST_CASE("decompose: index sets for (100, 10, 20)") {
  const auto c = ChainModel::build(100, 1.0, -1.0 / 6.0, ForceSpec{});
  const auto d = Decomposition::decompose(c, 10, 20);
  CHECK(d.gamma() == 0.5);
  CHECK(d.overlap() == IndexRange{10, 20});
  CHECK(d.atomistic_artificial_boundary() == std::array<int, 2>{19, 20});
  CHECK(d.continuum_artificial_boundary() == 10);
  CHECK(d.continuum_outer_boundary() == 99);
  CHECK(d.continuum() == IndexRange{10, 99});
  CHECK(d.overlap_interior() == IndexRange{11, 18});
  CHECK(d.continuum_only() == IndexRange{21, 100});
}

TEST_CASE("decompose: rejects thin overlaps and bad placement") {
  const auto c = ChainModel::build(100, 1.0, -1.0 / 6.0, ForceSpec{});
  CHECK(invalid([&] { Decomposition::decompose(c, 18, 20); }));
  CHECK(invalid([&] { Decomposition::decompose(c, 1, 20); }));
  CHECK(invalid([&] { Decomposition::decompose(c, 10, 99); }));
  CHECK(invalid([&] { Decomposition::decompose(c, 20, 10); }));
}

TEST_CASE("assumptions: size and overlap screening") {
  const auto c40 = ChainModel::build(40, 1.0, -1.0 / 6.0, ForceSpec{});
  CHECK(validate_assumptions(Decomposition::decompose(c40, 10, 20), 2.0).overlap_ok);

  const auto c100 = ChainModel::build(100, 1.0, -1.0 / 6.0, ForceSpec{});
  const auto ok = validate_assumptions(Decomposition::decompose(c100, 10, 20), 2.0, 2.0);
  CHECK(ok.size_ok);
  CHECK(ok.size_limit == doctest::Approx(20.0));
  const auto wide = validate_assumptions(Decomposition::decompose(c100, 25, 50), 2.0, 2.0);
  CHECK_FALSE(wide.size_ok);
  CHECK_FALSE(wide.warnings.empty());

  const auto c10k = ChainModel::build(10000, 1.0, -1.0 / 6.0, ForceSpec{});
  CHECK(validate_assumptions(Decomposition::decompose(c10k, 50, 100), 2.0, 2.0).size_ok);
  CHECK(invalid([&] { validate_assumptions(Decomposition::decompose(c100, 10, 20), 1.0); }));
}

TEST_CASE("displacement field: checked access and restricted norms") {
  auto u = DisplacementField::zeros({3, 7}, DomainTag::overlap);
  for (int i = 3; i <= 7; ++i) u(i) = i;
  CHECK(u.size() == 5);
  CHECK(invalid([&] { return u(8); }));
  CHECK(invalid([&] { return u(2); }));
  CHECK(norm_squared(u, {3, 4}) == 25.0);
  auto v = DisplacementField::zeros({0, 10}, DomainTag::global);
  CHECK(distance_squared(u, v, {3, 7}) == 9 + 16 + 25 + 36 + 49);
  CHECK(dot(u, u, {5, 5}) == 25.0);
  CHECK(invalid([&] { norm_squared(u, {2, 4}); }));
}
