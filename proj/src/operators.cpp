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

#include "atc/operators.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "atc/error.hpp"

namespace atc {

double delta1(const DisplacementField& u, int i) {
  return u(i - 1) - 2.0 * u(i) + u(i + 1);
}

double delta2(const DisplacementField& u, int i) {
  return u(i - 2) - 2.0 * u(i) + u(i + 2);
}

double delta1_squared(const DisplacementField& u, int i) {
  const double left = delta1(u, i - 1);
  const double mid = delta1(u, i);
  const double right = delta1(u, i + 1);
  return left - 2.0 * mid + right;
}

double apply_atomistic(const ChainModel& chain, const DisplacementField& u, int i) {
  return -(chain.k1() * delta1(u, i) + chain.k2() * delta2(u, i));
}

double apply_continuum(const ChainModel& chain, const DisplacementField& u, int i) {
  return -chain.kc() * delta1(u, i);
}

double BandedSystem::entry(int row, int col) const {
  if (row < 0 || col < 0 || row >= size || col >= size)
    throw_invalid("banded: entry out of range");
  const int d = std::abs(row - col);
  if (d > half_bandwidth) return 0.0;
  return bands[d][std::max(row, col)];
}

std::vector<double> BandedSystem::multiply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != size) throw_invalid("banded: size mismatch in multiply");
  std::vector<double> y(size, 0.0);
  for (int r = 0; r < size; ++r) {
    double acc = bands[0][r] * x[r];
    for (int d = 1; d <= half_bandwidth; ++d) {
      if (r - d >= 0) acc += bands[d][r] * x[r - d];
      if (r + d < size) acc += bands[d][r + d] * x[r + d];
    }
    y[r] = acc;
  }
  return y;
}

Eigen::MatrixXd BandedSystem::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  for (int r = 0; r < size; ++r)
    for (int d = 0; d <= half_bandwidth && r - d >= 0; ++d) {
      m(r, r - d) = bands[d][r];
      m(r - d, r) = bands[d][r];
    }
  return m;
}

namespace {

double boundary_value(const DirichletData& dirichlet, int site) {
  auto it = dirichlet.find(site);
  if (it == dirichlet.end())
    throw_invalid("assembly: missing Dirichlet value at site " + std::to_string(site));
  return it->second;
}

void check_range(const ChainModel& chain, IndexRange interior, int reach) {
  if (interior.empty()) throw_invalid("assembly: empty interior");
  if (interior.lo - reach < 0 || interior.hi + reach > chain.n())
    throw_invalid("assembly: stencil reaches outside [0, N]");
}

// Stencil coefficients by offset 0..reach.
BandedSystem assemble_stencil(const ChainModel& chain, IndexRange interior,
                              const DirichletData& dirichlet, ForceTerm force,
                              DomainTag tag, std::span<const double> coef) {
  const int reach = static_cast<int>(coef.size()) - 1;
  check_range(chain, interior, reach);
  BandedSystem sys;
  sys.size = interior.size();
  sys.half_bandwidth = reach;
  sys.index_offset = interior.lo;
  sys.tag = tag;
  sys.bands.assign(reach + 1, std::vector<double>(sys.size, 0.0));
  sys.rhs.assign(sys.size, 0.0);
  for (int r = 0; r < sys.size; ++r) {
    const int i = interior.lo + r;
    sys.bands[0][r] = coef[0];
    for (int d = 1; d <= reach && r - d >= 0; ++d) sys.bands[d][r] = coef[d];
    double b = force == ForceTerm::applied ? chain.force(i) : 0.0;
    for (int d = 1; d <= reach; ++d) {
      for (int j : {i - d, i + d})
        if (!interior.contains(j)) b -= coef[d] * boundary_value(dirichlet, j);
    }
    sys.rhs[r] = b;
  }
  return sys;
}

// Hessian of a sum of pair springs over `region`, then Dirichlet elimination.
DenseSystem assemble_bonds(const ChainModel& chain, IndexRange interior,
                           const DirichletData& dirichlet, ForceTerm force,
                           std::span<const double> spring_by_distance) {
  const int reach = static_cast<int>(spring_by_distance.size());
  check_range(chain, interior, reach);
  const IndexRange region{interior.lo - reach, interior.hi + reach};
  const int m = region.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (int dist = 1; dist <= reach; ++dist) {
    const double k = spring_by_distance[dist - 1];
    for (int a = 0; a + dist < m; ++a) {
      const int b = a + dist;
      h(a, a) += k;
      h(b, b) += k;
      h(a, b) -= k;
      h(b, a) -= k;
    }
  }
  DenseSystem sys;
  sys.index_offset = interior.lo;
  const int n = interior.size();
  sys.matrix = h.block(reach, reach, n, n);
  sys.rhs = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < n; ++r) {
    const int i = interior.lo + r;
    double b = force == ForceTerm::applied ? chain.force(i) : 0.0;
    for (int c = 0; c < m; ++c) {
      const int j = region.lo + c;
      if (interior.contains(j) || h(reach + r, c) == 0.0) continue;
      b -= h(reach + r, c) * boundary_value(dirichlet, j);
    }
    sys.rhs(r) = b;
  }
  return sys;
}

}  // namespace

BandedSystem assemble_atomistic(const ChainModel& chain, IndexRange interior,
                                const DirichletData& dirichlet, ForceTerm force,
                                DomainTag tag) {
  const double coef[] = {2.0 * chain.k1() + 2.0 * chain.k2(), -chain.k1(), -chain.k2()};
  return assemble_stencil(chain, interior, dirichlet, force, tag, coef);
}

BandedSystem assemble_continuum(const ChainModel& chain, IndexRange interior,
                                const DirichletData& dirichlet, ForceTerm force,
                                DomainTag tag) {
  const double coef[] = {2.0 * chain.kc(), -chain.kc()};
  return assemble_stencil(chain, interior, dirichlet, force, tag, coef);
}

DenseSystem assemble_atomistic_dense(const ChainModel& chain, IndexRange interior,
                                     const DirichletData& dirichlet, ForceTerm force) {
  const double springs[] = {chain.k1(), chain.k2()};
  return assemble_bonds(chain, interior, dirichlet, force, springs);
}

DenseSystem assemble_continuum_dense(const ChainModel& chain, IndexRange interior,
                                     const DirichletData& dirichlet, ForceTerm force) {
  const double springs[] = {chain.kc()};
  return assemble_bonds(chain, interior, dirichlet, force, springs);
}

OperatorDifferenceReport operator_difference(const ChainModel& chain,
                                             std::span<const DisplacementField> fields,
                                             double tolerance_in_eps) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double k1 = std::abs(chain.k1());
  const double k2 = std::abs(chain.k2());
  const double kc = std::abs(chain.kc());
  OperatorDifferenceReport report;
  report.tolerance_in_eps = tolerance_in_eps;
  for (const auto& u : fields) {
    const IndexRange sites{std::max(chain.interior().lo, u.lo() + 2),
                           std::min(chain.interior().hi, u.hi() - 2)};
    for (int i = sites.lo; i <= sites.hi; ++i) {
      const double lhs = apply_atomistic(chain, u, i) - apply_continuum(chain, u, i);
      const double rhs = -chain.k2() * delta1_squared(u, i);
      const double dev = std::abs(lhs - rhs);
      auto a = [&](int j) { return std::abs(u(j)); };
      const double near = a(i - 1) + 2.0 * a(i) + a(i + 1);
      const double far = a(i - 2) + 2.0 * a(i) + a(i + 2);
      const double fourth = a(i - 2) + 4.0 * a(i - 1) + 6.0 * a(i) + 4.0 * a(i + 1) + a(i + 2);
      const double scale = (k1 + kc) * near + k2 * (far + fourth);
      const double in_eps = scale > 0.0 ? dev / (eps * scale) : (dev > 0.0 ? INFINITY : 0.0);
      report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
      report.max_deviation_in_eps = std::max(report.max_deviation_in_eps, in_eps);
      ++report.sites_checked;
    }
  }
  report.passed = report.max_deviation_in_eps <= tolerance_in_eps;
  return report;
}

void write_triplets(const BandedSystem& system, std::ostream& os) {
  const auto precision = os.precision(17);
  for (int r = 0; r < system.size; ++r)
    for (int c = std::max(0, r - system.half_bandwidth);
         c <= std::min(system.size - 1, r + system.half_bandwidth); ++c)
      os << system.index_offset + r << ' ' << system.index_offset + c << ' '
         << system.entry(r, c) << '\n';
  os.precision(precision);
}

}  // namespace atc
