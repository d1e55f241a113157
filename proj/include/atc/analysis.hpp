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

// Verification instruments: closed-form mode oracles, the patch test, the
// operator norm of the control-to-field map, stability constants, error
// studies and the thermodynamic-limit sweep.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "atc/coupling.hpp"
#include "atc/lattice.hpp"

namespace atc {

// ---------------------------------------------------------------------------
// Characteristic roots of the atomistic difference operator.

struct CharacteristicRoots {
  double lambda3 = 0.0;  // > 1
  double lambda4 = 0.0;  // in (0, 1)
  /// |p(lambda)| divided by the sum of |terms| of p at lambda.
  double residual3 = 0.0;
  double residual4 = 0.0;
};

/// p(s) = -k2 s^4 - k1 s^3 + (2k1 + 2k2) s^2 - k1 s - k2
double characteristic_polynomial(double k1, double k2, double s);

/// Double root 1 plus the reciprocal pair lambda3 * lambda4 = 1.
CharacteristicRoots characteristic_roots(double k1, double k2);

// ---------------------------------------------------------------------------
// Mode expansions of the atomistic lifting.

/// 4x4 system mapping (beta1..beta4) of the basis
/// {n/L, (L-n)/L, lambda^n, lambda^(L-n)} to the values at 0, 1, L-1, L.
Eigen::Matrix4d transfer_matrix(int l, double lambda);
/// Limit of transfer_matrix as L grows.
Eigen::Matrix4d transfer_matrix_limit(double lambda);
/// Spectral norm of the inverse.
double inverse_norm(const Eigen::Matrix4d& m);

struct ModeCoefficients {
  std::array<double, 4> beta{};
  double lambda = 0.0;
  /// max_i |v_a(theta)_i - sum_j beta_j mode_j(i)| against the numeric lifting.
  double residual = 0.0;
  double condition = 0.0;
  bool near_singular = false;
};

constexpr double kTransferConditionLimit = 1e12;

ModeCoefficients mode_decomposition(const ChainModel& chain, const Decomposition& decomp,
                                    std::array<double, 2> theta_a);

/// sum_j beta_j mode_j on [0, L].
DisplacementField reconstruct_modes(const ModeCoefficients& modes, int l);

struct AlphaCoefficients {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double determinant = 0.0;
  bool singular = false;
};

/// Coefficients of the linear mode alpha1 * i/L and the exponential mode
/// alpha2 * lambda^(L-i) * sqrt(L-K) matching theta_a at {L-1, L}.
AlphaCoefficients alpha_coefficients(const Decomposition& decomp, double lambda,
                                     std::array<double, 2> theta_a);

/// v_a = linear + exponential + two corrections that restore zero data on
/// {0, 1}; residual against the numeric lifting.
struct ExponentialModeSplit {
  AlphaCoefficients alpha;
  DisplacementField linear;
  DisplacementField exponential;
  DisplacementField exponential_correction;
  DisplacementField linear_correction;
  double residual = 0.0;
};

ExponentialModeSplit exponential_mode_split(const ChainModel& chain, const Decomposition& decomp,
                                            std::array<double, 2> theta_a);

// ---------------------------------------------------------------------------
// Patch test.

struct PatchReport {
  double strain = 0.0;
  double max_deviation = 0.0;
  double mismatch = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Uniform strain F with outer data (0, F, (N-1)F, NF) and no load.
PatchReport patch_test(const ChainModel& chain, const Decomposition& decomp, double strain);

// ---------------------------------------------------------------------------
// Operator norm of the control-to-field map Q.

struct QNormReport {
  double q_norm = 0.0;
  /// gamma^-1 sqrt(N / (L - K))
  double predicted_scale = 0.0;
  double ratio = 0.0;
  Eigen::Vector3d maximizer = Eigen::Vector3d::Zero();
};

/// Q(mu): v_a(mu_a) on [0, L], v_c(mu_c) on [L+1, N].
DisplacementField apply_q(const Decomposition& decomp, const ReducedSystem& system,
                          const ControlPair& mu);

/// Exact: largest generalized eigenvalue of (Q^T Q, overlap gram) on the
/// three-dimensional control space.
QNormReport estimate_q_norm(const Decomposition& decomp, const ReducedSystem& system);
QNormReport estimate_q_norm(const ChainModel& chain, const Decomposition& decomp);

/// ||x||_* induced by the overlap gram.
double gram_norm(const ReducedSystem& system, const Eigen::Vector3d& x);

// ---------------------------------------------------------------------------
// Overlap quadratic form of the linear modes.

struct LimitForm {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double determinant = 0.0;
  double lambda_min = 0.0;
};

/// Form a x^2 - 2c xy + b y^2 in the limit N -> infinity at fixed gamma.
LimitForm limit_quadratic_form(double gamma);

struct QuadraticFormReport {
  // Direct summation over i = K..L.
  double a_sum = 0.0;
  double b_sum = 0.0;
  double c_sum = 0.0;
  // Closed forms in (K, L, Nbar), already multiplied by beta = 1 + L - K.
  double a_closed = 0.0;
  double b_closed = 0.0;
  double c_closed = 0.0;
  // Closed forms rewritten with K = (1 - gamma) L, divided by beta.
  double a_gamma = 0.0;
  double b_gamma = 0.0;
  double c_gamma = 0.0;
  /// Largest relative gap between direct sums and (K, L, Nbar) closed forms.
  double max_relative_gap = 0.0;
  /// Largest relative gap between the (K, L, Nbar) and gamma forms.
  double gamma_relative_gap = 0.0;
  double lambda_min = 0.0;  // of the finite form divided by beta
  LimitForm limit;
  double lower_bound = 0.0;  // gamma^2 / 24
};

QuadraticFormReport overlap_quadratic_form(const Decomposition& decomp);

// ---------------------------------------------------------------------------
// Stability of the liftings.

struct StabilityReport {
  int samples = 0;
  int continuum_violations = 0;
  /// max ||v_c||^2 / ((N-K) theta_c^2) over the samples.
  double continuum_max_ratio = 0.0;
  /// max ||v_a||^2 / (L ||theta_a||^2) over the samples.
  double atomistic_constant = 0.0;
  /// Supremum of the same ratio (largest eigenvalue of the 2x2 lifting gram / L).
  double atomistic_constant_exact = 0.0;
};

StabilityReport verify_stability(const ChainModel& chain, const Decomposition& decomp,
                                 int n_samples, std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Error studies.

/// Every term of the error split, computed independently.
struct ErrorEstimateTerms {
  double err_atc = 0.0;           // ||u_ref - u_atc||, whole chain
  double consistency = 0.0;       // ||u_ref - P(r(u_ref))||
  double consistency_direct = 0.0;  // ||u_ref - u_c|| on L+1..N
  double q_applied = 0.0;         // ||Q(r(u_ref) - theta_op)||
  double q_norm = 0.0;
  double trace_distance = 0.0;    // ||r(u_ref) - theta_op||_*
  double trace_bound = 0.0;       // ||u_ref - u_c|| on the overlap
  double err_model = 0.0;         // ||u_ref - u_c|| on [K, N-1]
  double model_bound = 0.0;       // sharp modeling bound on the continuum interior
  bool triangle_holds = false;    // err_atc <= consistency + q_applied
  bool operator_holds = false;    // q_applied <= q_norm * trace_distance
  bool trace_holds = false;       // trace_distance <= trace_bound
  bool model_holds = false;       // err_model <= model_bound
  bool final_holds = false;       // err_atc <= (1 + q_norm) err_model
};

struct StudyRow {
  int n = 0;
  int k = 0;
  int l = 0;
  double gamma = 0.0;
  double p = 0.0;
  double err_atc = 0.0;
  double err_model = 0.0;
  double bound_rhs = 0.0;
  double q_norm_est = 0.0;
  double mismatch = 0.0;
  double eps_scaled_err = 0.0;
};

struct ErrorStudy {
  StudyRow row;
  ErrorEstimateTerms terms;
};

/// Relative slack allowed on computed inequalities for rounding.
constexpr double kInequalitySlack = 1e-12;

bool holds_with_slack(double lhs, double rhs);

ErrorStudy error_study(const ChainModel& chain, const Decomposition& decomp, double p = 2.0);

enum class LoadScaling {
  lattice,    // force preset used as is
  continuum,  // multiplied by eps^2 = 1/N^2
};

struct SweepConfig {
  std::vector<int> n_values;
  double p = 2.0;
  double gamma = 0.5;
  double c = 2.0;
  double k1 = 1.0;
  double k2 = -1.0 / 6.0;
  ForceSpec force;
  LoadScaling scaling = LoadScaling::continuum;
  /// 0 selects from ATC_NUM_THREADS or the hardware.
  unsigned threads = 0;
};

struct SweepResult {
  std::vector<StudyRow> rows;
  std::vector<std::string> notes;
  /// Least-squares slope of log(eps-scaled error) against log(eps).
  double eps_slope = 0.0;
  /// Least-squares slope of log(||Q||) against log(N).
  double q_slope = 0.0;
};

/// L = ceil(c N^(1/p)), K = ceil((1 - gamma) L).
std::array<int, 2> sweep_interfaces(int n, double p, double gamma, double c);

SweepResult convergence_sweep(const SweepConfig& config);

/// Least-squares slope of log(y) against log(x); pairs with y <= 0 are skipped.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace atc
