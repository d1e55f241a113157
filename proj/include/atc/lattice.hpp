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

// Chain model, domain decomposition and displacement containers for a 1D
// lattice of atoms 0..N with first and second neighbor linear springs.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace atc {

/// Closed integer interval [lo, hi]. Empty when hi < lo.
struct IndexRange {
  int lo = 0;
  int hi = -1;

  constexpr int size() const noexcept { return hi >= lo ? hi - lo + 1 : 0; }
  constexpr bool empty() const noexcept { return hi < lo; }
  constexpr bool contains(int i) const noexcept { return lo <= i && i <= hi; }
  constexpr bool contains(IndexRange r) const noexcept {
    return r.empty() || (contains(r.lo) && contains(r.hi));
  }
  friend constexpr bool operator==(IndexRange, IndexRange) = default;
};

/// External load description. Materialized per atom by ChainModel::build.
///
/// Text form (as accepted by parse()):
///   zero | point:<site>:<magnitude> | sine:<m> | poly:<c0>,<c1>,...
/// sine gives f_i = sin(m*pi*i/N); poly gives f_i = sum_j c_j (i/N)^j.
/// Per-atom tables are built with ForceSpec::from_table.
struct ForceSpec {
  enum class Kind { zero, point, sine, poly, table };

  Kind kind = Kind::zero;
  int site = 0;
  double magnitude = 0.0;
  int mode = 1;
  std::vector<double> coefficients;
  std::vector<double> table;
  /// Uniform multiplier applied after evaluation.
  double scale = 1.0;

  static ForceSpec parse(std::string_view text);
  static ForceSpec from_table(std::vector<double> values);
  std::string to_string() const;
};

/// Dirichlet data on the outer boundary pairs {0,1} and {N-1,N}. Zero for
/// the homogeneous problem; the patch test uses (0, F, (N-1)F, NF).
struct OuterBoundary {
  double u0 = 0.0;
  double u1 = 0.0;
  double u_nm1 = 0.0;
  double u_n = 0.0;

  bool homogeneous() const noexcept {
    return u0 == 0.0 && u1 == 0.0 && u_nm1 == 0.0 && u_n == 0.0;
  }
};

class ChainModel {
 public:
  /// Validates k1 > 0, k2 < 0, k1 + 4k2 > 0, N >= 5 and materializes the load
  /// at every atom, zeroed on {0, 1, N-1, N}.
  static ChainModel build(int n, double k1, double k2, const ForceSpec& force);

  int n() const noexcept { return n_; }
  double k1() const noexcept { return k1_; }
  double k2() const noexcept { return k2_; }
  /// Cauchy-Born continuum stiffness k1 + 4k2.
  double kc() const noexcept { return k1_ + 4.0 * k2_; }
  double force(int i) const;
  std::span<const double> forces() const noexcept { return force_; }
  const OuterBoundary& outer() const noexcept { return outer_; }

  /// Interior [2, N-2] of the global problem.
  IndexRange interior() const noexcept { return {2, n_ - 2}; }
  IndexRange domain() const noexcept { return {0, n_}; }

  ChainModel with_outer_boundary(const OuterBoundary& b) const;

 private:
  ChainModel(int n, double k1, double k2, std::vector<double> force);

  int n_;
  double k1_;
  double k2_;
  std::vector<double> force_;
  OuterBoundary outer_;
};

/// Overlapping split of [0, N] into an atomistic part [0, L] and a continuum
/// part [K, N-1] (single-node continuum boundaries at K and N-1, with u_N
/// carried by the true boundary condition).
class Decomposition {
 public:
  static Decomposition decompose(const ChainModel& chain, int k, int l);

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  int l() const noexcept { return l_; }
  /// Overlap ratio (L - K) / L.
  double gamma() const noexcept { return static_cast<double>(l_ - k_) / l_; }

  IndexRange atomistic() const noexcept { return {0, l_}; }
  IndexRange continuum() const noexcept { return {k_, n_ - 1}; }
  IndexRange overlap() const noexcept { return {k_, l_}; }
  IndexRange atomistic_interior() const noexcept { return {2, l_ - 2}; }
  IndexRange continuum_interior() const noexcept { return {k_ + 1, n_ - 2}; }
  /// Overlap sites strictly between the artificial boundaries: K+1..L-2.
  IndexRange overlap_interior() const noexcept { return {k_ + 1, l_ - 2}; }
  /// Sites owned by the continuum state in the composed solution: L+1..N.
  IndexRange continuum_only() const noexcept { return {l_ + 1, n_}; }

  std::array<int, 2> atomistic_outer_boundary() const noexcept { return {0, 1}; }
  std::array<int, 2> atomistic_artificial_boundary() const noexcept {
    return {l_ - 1, l_};
  }
  int continuum_artificial_boundary() const noexcept { return k_; }
  int continuum_outer_boundary() const noexcept { return n_ - 1; }

 private:
  Decomposition(int n, int k, int l) : n_(n), k_(k), l_(l) {}

  int n_;
  int k_;
  int l_;
};

/// Advisory check of the size assumptions: L <= c N^(1/p) and 3/L < gamma < 1.
struct AssumptionReport {
  bool size_ok = false;
  double size_limit = 0.0;
  bool overlap_ok = false;
  double gamma_lower = 0.0;
  std::vector<std::string> warnings;
};

AssumptionReport validate_assumptions(const Decomposition& decomp, double p,
                                      double c = 2.0);

enum class DomainTag { global, atomistic, continuum, overlap };

std::string_view to_string(DomainTag tag);

/// Values on a contiguous index range. Access outside [lo, hi] throws.
class DisplacementField {
 public:
  DisplacementField(IndexRange range, DomainTag tag, std::vector<double> values);

  static DisplacementField zeros(IndexRange range, DomainTag tag);

  int lo() const noexcept { return range_.lo; }
  int hi() const noexcept { return range_.hi; }
  int size() const noexcept { return range_.size(); }
  IndexRange range() const noexcept { return range_; }
  DomainTag tag() const noexcept { return tag_; }
  bool covers(int i) const noexcept { return range_.contains(i); }
  bool covers(IndexRange r) const noexcept { return range_.contains(r); }

  double operator()(int i) const;
  double& operator()(int i);
  std::span<const double> values() const noexcept { return values_; }

 private:
  IndexRange range_;
  DomainTag tag_;
  std::vector<double> values_;
};

/// l2 inner product / squared norm / squared distance restricted to `over`.
double dot(const DisplacementField& a, const DisplacementField& b,
           IndexRange over);
double norm_squared(const DisplacementField& u, IndexRange over);
double distance_squared(const DisplacementField& a, const DisplacementField& b,
                        IndexRange over);

}  // namespace atc
