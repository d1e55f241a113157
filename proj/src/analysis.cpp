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

#include "atc/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "atc/error.hpp"
#include "atc/solvers.hpp"

namespace atc {

namespace {

void require_stable(double k1, double k2) {
  if (!(k1 > 0.0) || !(k2 < 0.0) || !(k1 + 4.0 * k2 > 0.0))
    throw_invalid("characteristic_roots: need k1 > 0, k2 < 0, k1 + 4k2 > 0");
}

double relative_residual(double k1, double k2, double s) {
  const double terms = std::abs(k2) * std::pow(s, 4) + std::abs(k1) * std::pow(s, 3) +
                       std::abs(2.0 * k1 + 2.0 * k2) * s * s + std::abs(k1) * s + std::abs(k2);
  return std::abs(characteristic_polynomial(k1, k2, s)) / terms;
}

double decay_root(const ChainModel& chain) {
  return characteristic_roots(chain.k1(), chain.k2()).lambda4;
}

double norm_over(const DisplacementField& u, IndexRange over) {
  return std::sqrt(norm_squared(u, over));
}

double distance_over(const DisplacementField& a, const DisplacementField& b, IndexRange over) {
  return std::sqrt(distance_squared(a, b, over));
}

}  // namespace

double characteristic_polynomial(double k1, double k2, double s) {
  return (((-k2 * s - k1) * s + (2.0 * k1 + 2.0 * k2)) * s - k1) * s - k2;
}

CharacteristicRoots characteristic_roots(double k1, double k2) {
  require_stable(k1, k2);
  const double disc = k1 * (k1 + 4.0 * k2);
  if (!(disc > 0.0)) throw_invalid("characteristic_roots: non-positive discriminant");
  const double s = std::sqrt(disc);
  // Both forms avoid cancellation: k1 + 2k2 > 0 under the stability conditions.
  CharacteristicRoots r;
  r.lambda3 = (k1 + 2.0 * k2 + s) / (-2.0 * k2);
  r.lambda4 = (-2.0 * k2) / (k1 + 2.0 * k2 + s);
  r.residual3 = relative_residual(k1, k2, r.lambda3);
  r.residual4 = relative_residual(k1, k2, r.lambda4);
  return r;
}

Eigen::Matrix4d transfer_matrix(int l, double lambda) {
  const double inv = 1.0 / l;
  const double pl = std::pow(lambda, l);
  const double plm1 = std::pow(lambda, l - 1);
  Eigen::Matrix4d t;
  t << 0.0, 1.0, 1.0, pl,
      inv, (l - 1) * inv, lambda, plm1,
      (l - 1) * inv, inv, plm1, lambda,
      1.0, 0.0, pl, 1.0;
  return t;
}

Eigen::Matrix4d transfer_matrix_limit(double lambda) {
  Eigen::Matrix4d t;
  t << 0.0, 1.0, 1.0, 0.0,
      0.0, 1.0, lambda, 0.0,
      1.0, 0.0, 0.0, lambda,
      1.0, 0.0, 0.0, 1.0;
  return t;
}

double inverse_norm(const Eigen::Matrix4d& m) {
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(m);
  const double smin = svd.singularValues().minCoeff();
  if (!(smin > 0.0)) throw_solver("inverse_norm: singular matrix");
  return 1.0 / smin;
}

DisplacementField reconstruct_modes(const ModeCoefficients& modes, int l) {
  auto v = DisplacementField::zeros({0, l}, DomainTag::atomistic);
  const auto& b = modes.beta;
  for (int i = 0; i <= l; ++i) {
    v(i) = b[0] * i / l + b[1] * (l - i) / l + b[2] * std::pow(modes.lambda, i) +
           b[3] * std::pow(modes.lambda, l - i);
  }
  return v;
}

ModeCoefficients mode_decomposition(const ChainModel& chain, const Decomposition& decomp,
                                    std::array<double, 2> theta_a) {
  ModeCoefficients out;
  out.lambda = decay_root(chain);
  const int l = decomp.l();
  const Eigen::Matrix4d t = transfer_matrix(l, out.lambda);
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(t);
  const auto& sv = svd.singularValues();
  out.condition = sv.minCoeff() > 0.0 ? sv.maxCoeff() / sv.minCoeff()
                                      : std::numeric_limits<double>::infinity();
  out.near_singular = !(out.condition <= kTransferConditionLimit);
  const Eigen::Vector4d beta =
      t.fullPivLu().solve(Eigen::Vector4d(0.0, 0.0, theta_a[0], theta_a[1]));
  for (int j = 0; j < 4; ++j) out.beta[j] = beta(j);

  const auto numeric = lift_atomistic(chain, decomp, theta_a);
  const auto modes = reconstruct_modes(out, l);
  for (int i = 0; i <= l; ++i)
    out.residual = std::max(out.residual, std::abs(numeric(i) - modes(i)));
  return out;
}

AlphaCoefficients alpha_coefficients(const Decomposition& decomp, double lambda,
                                     std::array<double, 2> theta_a) {
  const double l = decomp.l();
  const double root = std::sqrt(static_cast<double>(decomp.l() - decomp.k()));
  // [1 - 1/L, lambda * root; 1, root] (alpha1, alpha2) = theta_a
  const double a11 = 1.0 - 1.0 / l;
  const double a12 = lambda * root;
  const double a21 = 1.0;
  const double a22 = root;
  AlphaCoefficients out;
  out.determinant = a11 * a22 - a12 * a21;
  out.singular = std::abs(out.determinant) < 1e-14;
  if (out.singular) return out;
  out.alpha1 = (theta_a[0] * a22 - a12 * theta_a[1]) / out.determinant;
  out.alpha2 = (a11 * theta_a[1] - a21 * theta_a[0]) / out.determinant;
  return out;
}

ExponentialModeSplit exponential_mode_split(const ChainModel& chain, const Decomposition& decomp,
                                            std::array<double, 2> theta_a) {
  const int l = decomp.l();
  const double lambda = decay_root(chain);
  const double root = std::sqrt(static_cast<double>(l - decomp.k()));
  const auto alpha = alpha_coefficients(decomp, lambda, theta_a);
  if (alpha.singular) throw_solver("exponential_mode_split: singular coefficient system");

  const IndexRange range{0, l};
  auto linear = DisplacementField::zeros(range, DomainTag::atomistic);
  auto exponential = DisplacementField::zeros(range, DomainTag::atomistic);
  for (int i = 0; i <= l; ++i) {
    linear(i) = alpha.alpha1 * i / l;
    exponential(i) = alpha.alpha2 * std::pow(lambda, l - i) * root;
  }
  // Zero-force corrections cancelling each mode on {0, 1}.
  auto correction = [&](const DisplacementField& mode) {
    const DirichletData bc{{0, -mode(0)}, {1, -mode(1)}, {l - 1, 0.0}, {l, 0.0}};
    return solve_atomistic_region(chain, decomp.atomistic_interior(), bc, ForceTerm::none,
                                  DomainTag::atomistic);
  };
  auto exp_corr = correction(exponential);
  auto lin_corr = correction(linear);

  const auto numeric = lift_atomistic(chain, decomp, theta_a);
  double residual = 0.0;
  for (int i = 0; i <= l; ++i) {
    const double sum = linear(i) + exponential(i) + exp_corr(i) + lin_corr(i);
    residual = std::max(residual, std::abs(numeric(i) - sum));
  }
  return {alpha, std::move(linear), std::move(exponential), std::move(exp_corr),
          std::move(lin_corr), residual};
}

PatchReport patch_test(const ChainModel& chain, const Decomposition& decomp, double strain) {
  if (!std::isfinite(strain)) throw_invalid("patch_test: strain must be finite");
  for (double f : chain.forces())
    if (f != 0.0) throw_invalid("patch_test: requires a zero external load");
  const int n = chain.n();
  const auto strained = chain.with_outer_boundary({0.0, strain, (n - 1) * strain, n * strain});
  const auto d = Decomposition::decompose(strained, decomp.k(), decomp.l());
  const auto result = solve_atc(strained, d);

  PatchReport out;
  out.strain = strain;
  for (int i = 0; i <= n; ++i)
    out.max_deviation = std::max(out.max_deviation, std::abs(result.u_atc(i) - i * strain));
  out.mismatch = result.mismatch;
  out.tolerance = 1e-12 * (1.0 + n * std::abs(strain));
  out.passed = out.max_deviation <= out.tolerance && out.mismatch <= out.tolerance;
  return out;
}

DisplacementField apply_q(const Decomposition& decomp, const ReducedSystem& system,
                          const ControlPair& mu) {
  const int n = decomp.n();
  const int l = decomp.l();
  auto u = DisplacementField::zeros({0, n}, DomainTag::global);
  for (int i = 0; i <= l; ++i)
    u(i) = mu.theta_a_lm1 * system.liftings[0](i) + mu.theta_a_l * system.liftings[1](i);
  for (int i = l + 1; i <= decomp.continuum_outer_boundary(); ++i)
    u(i) = mu.theta_c_k * system.liftings[2](i);
  return u;
}

double gram_norm(const ReducedSystem& system, const Eigen::Vector3d& x) {
  return std::sqrt(std::max(0.0, x.dot(system.gram * x)));
}

QNormReport estimate_q_norm(const Decomposition& decomp, const ReducedSystem& system) {
  const IndexRange atom = decomp.atomistic();
  const IndexRange tail{decomp.l() + 1, decomp.continuum_outer_boundary()};
  const auto& lift = system.liftings;

  // Q e1, Q e2 live on [0, L] and Q e3 on L+1..N-1, so the cross terms vanish.
  Eigen::Matrix3d full = Eigen::Matrix3d::Zero();
  full(0, 0) = norm_squared(lift[0], atom);
  full(1, 1) = norm_squared(lift[1], atom);
  full(0, 1) = full(1, 0) = dot(lift[0], lift[1], atom);
  full(2, 2) = norm_squared(lift[2], tail);

  Eigen::LLT<Eigen::Matrix3d> llt(system.gram);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::verification, "estimate_q_norm: overlap gram is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> ges(full, system.gram);
  if (ges.info() != Eigen::Success) throw_solver("estimate_q_norm: eigensolver failed");

  QNormReport out;
  out.q_norm = std::sqrt(std::max(0.0, ges.eigenvalues()(2)));
  out.maximizer = ges.eigenvectors().col(2);
  out.predicted_scale =
      std::sqrt(static_cast<double>(decomp.n()) / (decomp.l() - decomp.k())) / decomp.gamma();
  out.ratio = out.q_norm / out.predicted_scale;
  return out;
}

QNormReport estimate_q_norm(const ChainModel& chain, const Decomposition& decomp) {
  return estimate_q_norm(decomp, assemble_reduced_system(chain, decomp));
}

LimitForm limit_quadratic_form(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw_invalid("limit_quadratic_form: gamma must be in (0, 1)");
  LimitForm f;
  f.a = 1.0;
  f.b = 1.0 - gamma + gamma * gamma / 3.0;
  f.c = 1.0 - gamma / 2.0;
  f.determinant = f.a * f.b - f.c * f.c;
  const double mean = 0.5 * (f.a + f.b);
  const double half_gap = std::hypot(0.5 * (f.a - f.b), f.c);
  // lambda1 = det / lambda2 keeps full relative accuracy as gamma -> 0.
  f.lambda_min = f.determinant / (mean + half_gap);
  return f;
}

QuadraticFormReport overlap_quadratic_form(const Decomposition& decomp) {
  const double k = decomp.k();
  const double l = decomp.l();
  const double nb = decomp.continuum_outer_boundary();
  const double g = decomp.gamma();
  const double beta = 1.0 + l - k;

  QuadraticFormReport r;
  for (int i = decomp.k(); i <= decomp.l(); ++i) {
    const double vc = (nb - i) / (nb - k);
    const double v1 = i / l;
    r.a_sum += vc * vc;
    r.b_sum += v1 * v1;
    r.c_sum += vc * v1;
  }

  r.a_closed = beta *
               (6 * nb * nb + 2 * l * l + 2 * k * k - 6 * k * nb - 6 * l * nb + 2 * k * l + l - k) /
               (6 * (k - nb) * (k - nb));
  r.b_closed = beta * (2 * l * l + 2 * k * k + 2 * k * l + l - k) / (6 * l * l);
  r.c_closed = beta * (2 * l * l + 2 * k * k + 2 * k * l - 3 * k * nb - 3 * l * nb + l - k) /
               (6 * l * (k - nb));

  const double q = 1.0 - g + g * g / 3.0;
  const double den = nb - (1.0 - g) * l;
  r.a_gamma = (nb * nb + l * l * q + g * l / 6.0 - l * nb * (2.0 - g)) / (den * den);
  r.b_gamma = (l * q + g / 6.0) / l;
  r.c_gamma = (nb * (1.0 - g / 2.0) - g / 6.0 - l * q) / den;

  auto rel = [](double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); };
  r.max_relative_gap = std::max({rel(r.a_closed, r.a_sum), rel(r.b_closed, r.b_sum),
                                 rel(r.c_closed, r.c_sum)});
  r.gamma_relative_gap =
      std::max({rel(r.a_gamma, r.a_closed / beta), rel(r.b_gamma, r.b_closed / beta),
                rel(r.c_gamma, r.c_closed / beta)});

  const double a = r.a_closed / beta;
  const double b = r.b_closed / beta;
  const double c = r.c_closed / beta;
  r.lambda_min = 0.5 * (a + b) - std::hypot(0.5 * (a - b), c);
  r.limit = limit_quadratic_form(g);
  r.lower_bound = g * g / 24.0;
  return r;
}

StabilityReport verify_stability(const ChainModel& chain, const Decomposition& decomp,
                                 int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw_invalid("verify_stability: need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> draw(-1.0, 1.0);
  const IndexRange atom = decomp.atomistic();
  const IndexRange cont = decomp.continuum();
  const double width = decomp.n() - decomp.k();
  const double l = decomp.l();

  StabilityReport out;
  out.samples = n_samples;
  for (int s = 0; s < n_samples; ++s) {
    const double tc = draw(rng);
    const std::array<double, 2> ta{draw(rng), draw(rng)};
    const double vc = norm_squared(lift_continuum(decomp, tc), cont);
    if (vc > width * tc * tc) ++out.continuum_violations;
    if (tc != 0.0) out.continuum_max_ratio = std::max(out.continuum_max_ratio, vc / (width * tc * tc));
    const double va = norm_squared(lift_atomistic(chain, decomp, ta), atom);
    const double t2 = ta[0] * ta[0] + ta[1] * ta[1];
    if (t2 > 0.0) out.atomistic_constant = std::max(out.atomistic_constant, va / (l * t2));
  }

  const auto e1 = lift_atomistic(chain, decomp, {1.0, 0.0});
  const auto e2 = lift_atomistic(chain, decomp, {0.0, 1.0});
  Eigen::Matrix2d g;
  g(0, 0) = norm_squared(e1, atom);
  g(1, 1) = norm_squared(e2, atom);
  g(0, 1) = g(1, 0) = dot(e1, e2, atom);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(g, Eigen::EigenvaluesOnly);
  out.atomistic_constant_exact = eig.eigenvalues()(1) / l;
  return out;
}

bool holds_with_slack(double lhs, double rhs) {
  return lhs <= rhs + kInequalitySlack * (std::abs(lhs) + std::abs(rhs));
}

ErrorStudy error_study(const ChainModel& chain, const Decomposition& decomp, double p) {
  const IndexRange all = chain.domain();
  const IndexRange overlap = decomp.overlap();
  const int n = chain.n();

  const auto u_ref = solve_full_atomistic(chain);
  const auto system = assemble_reduced_system(chain, decomp);
  const auto theta = solve_controls(system);
  const auto atc = compose_atc(chain, decomp, system, theta);

  const auto r_ref = trace(u_ref, decomp);
  const auto projected = compose_atc(chain, decomp, system, r_ref);
  const auto u_c = solve_continuum_subproblem(chain, decomp, u_ref(decomp.k()));
  const auto q = estimate_q_norm(decomp, system);
  const Eigen::Vector3d gap = r_ref.as_vector() - theta.as_vector();

  ErrorEstimateTerms t;
  t.err_atc = distance_over(u_ref, atc.u_atc, all);
  t.consistency = distance_over(u_ref, projected.u_atc, all);
  t.consistency_direct =
      distance_over(u_ref, u_c, {decomp.l() + 1, decomp.continuum_outer_boundary()});
  t.q_applied = norm_over(apply_q(decomp, system, ControlPair::from_vector(gap)), all);
  t.q_norm = q.q_norm;
  t.trace_distance = gram_norm(system, gap);
  t.trace_bound = distance_over(u_ref, u_c, overlap);
  t.err_model = distance_over(u_ref, u_c, decomp.continuum());
  t.model_bound = modeling_error_bound(chain, u_ref, decomp.continuum_interior()).bound;
  t.triangle_holds = holds_with_slack(t.err_atc, t.consistency + t.q_applied);
  t.operator_holds = holds_with_slack(t.q_applied, t.q_norm * t.trace_distance);
  t.trace_holds = holds_with_slack(t.trace_distance, t.trace_bound);
  t.model_holds = holds_with_slack(t.err_model, t.model_bound);

  StudyRow row;
  row.n = n;
  row.k = decomp.k();
  row.l = decomp.l();
  row.gamma = decomp.gamma();
  row.p = p;
  row.err_atc = t.err_atc;
  row.err_model = t.err_model;
  row.bound_rhs = (1.0 + t.q_norm) * t.err_model;
  row.q_norm_est = t.q_norm;
  row.mismatch = atc.mismatch;
  row.eps_scaled_err = t.err_atc / std::sqrt(static_cast<double>(n));
  t.final_holds = holds_with_slack(t.err_atc, row.bound_rhs);
  return {row, t};
}

std::array<int, 2> sweep_interfaces(int n, double p, double gamma, double c) {
  if (!(p > 1.0)) throw_invalid("sweep: p must exceed 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw_invalid("sweep: gamma must be in (0, 1)");
  if (!(c > 0.0)) throw_invalid("sweep: c must be positive");
  // The relative guard keeps exact products such as 2 * sqrt(400) from rounding up.
  auto up = [](double x) { return static_cast<int>(std::ceil(x - 1e-9 * std::abs(x))); };
  const int l = up(c * std::pow(static_cast<double>(n), 1.0 / p));
  const int k = up((1.0 - gamma) * l);
  return {k, l};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw_invalid("loglog_slope: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return 0.0;
  const double m = static_cast<double>(lx.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

namespace {

unsigned sweep_threads(unsigned requested, std::size_t rows) {
  unsigned t = requested;
  if (t == 0) {
    if (const char* env = std::getenv("ATC_NUM_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) t = static_cast<unsigned>(v);
    }
  }
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(rows, 1)));
}

}  // namespace

SweepResult convergence_sweep(const SweepConfig& config) {
  if (config.n_values.empty()) throw_invalid("sweep: no N values given");

  struct Slot {
    bool feasible = false;
    std::string note;
    StudyRow row;
    std::exception_ptr error;
  };
  std::vector<Slot> slots(config.n_values.size());

  auto run_row = [&](std::size_t idx) {
    const int n = config.n_values[idx];
    Slot& slot = slots[idx];
    const auto [k, l] = sweep_interfaces(n, config.p, config.gamma, config.c);
    if (l - k < 4 || k < 2 || l > n - 2) {
      std::ostringstream os;
      os << "N=" << n << ": skipped, infeasible interfaces K=" << k << " L=" << l;
      slot.note = os.str();
      return;
    }
    ForceSpec force = config.force;
    if (config.scaling == LoadScaling::continuum)
      force.scale *= 1.0 / (static_cast<double>(n) * n);
    const auto chain = ChainModel::build(n, config.k1, config.k2, force);
    const auto decomp = Decomposition::decompose(chain, k, l);
    slot.row = error_study(chain, decomp, config.p).row;
    slot.feasible = true;
  };

  const unsigned threads = sweep_threads(config.threads, slots.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < slots.size(); i = next++) {
      try {
        run_row(i);
      } catch (...) {
        slots[i].error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  SweepResult out;
  std::vector<double> eps, err, ns, qs;
  for (auto& slot : slots) {
    if (slot.error) std::rethrow_exception(slot.error);
    if (!slot.feasible) {
      out.notes.push_back(slot.note);
      continue;
    }
    out.rows.push_back(slot.row);
    eps.push_back(1.0 / slot.row.n);
    err.push_back(slot.row.eps_scaled_err);
    ns.push_back(slot.row.n);
    qs.push_back(slot.row.q_norm_est);
  }
  out.eps_slope = loglog_slope(eps, err);
  out.q_slope = loglog_slope(ns, qs);
  return out;
}

}  // namespace atc
