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

#include "atc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "atc/analysis.hpp"
#include "atc/coupling.hpp"
#include "atc/operators.hpp"
#include "atc/oracle.hpp"
#include "atc/solvers.hpp"

namespace atc {

bool Scorecard::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

// value <= tolerance
Check at_most(std::string name, double value, double tolerance, std::string detail = {}) {
  return {std::move(name), value <= tolerance, value, tolerance, std::move(detail)};
}

// value >= tolerance
Check at_least(std::string name, double value, double tolerance, std::string detail = {}) {
  return {std::move(name), value >= tolerance, value, tolerance, std::move(detail)};
}

std::string describe(std::initializer_list<std::pair<const char*, double>> items) {
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (const auto& [key, v] : items) {
    if (!first) os << ", ";
    os << key << "=" << v;
    first = false;
  }
  return os.str();
}

DisplacementField random_field(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> draw(-1.0, 1.0);
  auto u = DisplacementField::zeros({0, n}, DomainTag::global);
  for (int i = 0; i <= n; ++i) u(i) = draw(rng);
  return u;
}

}  // namespace

Scorecard run_verification(const ChainModel& chain, const Decomposition& decomp,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> draw(-1.0, 1.0);
  const int n = chain.n();
  Scorecard card{n, decomp.k(), decomp.l(), {}};
  auto& out = card.checks;

  const auto u_ref = solve_full_atomistic(chain);

  {
    std::vector<DisplacementField> fields{u_ref, random_field(n, rng), random_field(n, rng)};
    const auto r = operator_difference(chain, fields);
    out.push_back(at_most("operator_identity", r.max_deviation_in_eps, r.tolerance_in_eps,
                          describe({{"sites", r.sites_checked},
                                    {"max_abs_deviation", r.max_abs_deviation}})));
  }

  if (n <= 2000) {
    const auto& b = chain.outer();
    const auto dense = solve_dense(assemble_atomistic_dense(
        chain, chain.interior(), {{0, b.u0}, {1, b.u1}, {n - 1, b.u_nm1}, {n, b.u_n}}));
    double gap = 0.0, scale = 0.0;
    for (int i = 2; i <= n - 2; ++i) {
      gap = std::max(gap, std::abs(dense(i - 2) - u_ref(i)));
      scale = std::max(scale, std::abs(u_ref(i)));
    }
    out.push_back(at_most("banded_vs_dense", gap, 1e-10 * (1.0 + scale)));
  }

  const auto system = assemble_reduced_system(chain, decomp);
  out.push_back(at_least("gram_positive_definite", system.min_eigenvalue,
                         std::numeric_limits<double>::min(),
                         describe({{"condition", system.condition}})));

  const auto result = solve_atc(chain, decomp);
  out.push_back(at_most("optimality_gradient", result.diagnostics.optimality_gradient, 1e-8));

  {
    const auto split = mismatch_norm(result.u_a_op, result.u_c_op, decomp);
    const double sum = split.at_continuum_boundary + split.interior + split.at_atomistic_boundary;
    out.push_back(at_most("mismatch_split", std::abs(sum - split.total),
                          1e-12 * std::max(split.total, 1e-300)));
  }

  {
    const auto oracle = minimize_objective_fd_newton(chain, decomp);
    const Eigen::Vector3d gap = oracle.controls.as_vector() - result.controls.as_vector();
    out.push_back(at_most("oracle_controls", gap.cwiseAbs().maxCoeff(), 1e-8,
                          describe({{"iterations", oracle.iterations}})));
    const auto states = compose_atc(chain, decomp, oracle.controls);
    double state_gap = 0.0;
    for (int i = 0; i <= n; ++i)
      state_gap = std::max(state_gap, std::abs(states.u_atc(i) - result.u_atc(i)));
    out.push_back(at_most("oracle_states", state_gap, 1e-8));
  }

  {
    const auto st = verify_stability(chain, decomp, 200, seed);
    out.push_back(at_most("stability_continuum_violations", st.continuum_violations, 0.0,
                          describe({{"max_ratio", st.continuum_max_ratio}})));
    out.push_back(at_most("stability_atomistic_constant", st.atomistic_constant,
                          st.atomistic_constant_exact * (1.0 + 1e-12),
                          "sampled constant cannot exceed the exact supremum"));
  }

  {
    const auto study = error_study(chain, decomp);
    const auto& t = study.terms;
    out.push_back({"trace_inequality", t.trace_holds, t.trace_distance, t.trace_bound, {}});
    out.push_back({"error_split_triangle", t.triangle_holds, t.err_atc,
                   t.consistency + t.q_applied, {}});
    out.push_back({"error_split_operator_norm", t.operator_holds, t.q_applied,
                   t.q_norm * t.trace_distance, {}});
    out.push_back({"error_bound_final", t.final_holds, t.err_atc, study.row.bound_rhs,
                   describe({{"q_norm", t.q_norm}})});
    out.push_back({"modeling_error_bound", t.model_holds, t.err_model, t.model_bound, {}});
  }

  {
    const auto roots = characteristic_roots(chain.k1(), chain.k2());
    out.push_back(at_most("characteristic_roots",
                          std::max({roots.residual3, roots.residual4,
                                    std::abs(roots.lambda3 * roots.lambda4 - 1.0)}),
                          1e-12, describe({{"lambda4", roots.lambda4}})));
  }

  {
    double worst = 0.0, worst_split = 0.0;
    bool flagged = false;
    for (int s = 0; s < 5; ++s) {
      const std::array<double, 2> theta = s == 0 ? std::array<double, 2>{1.0, 1.0}
                                                 : std::array<double, 2>{draw(rng), draw(rng)};
      const auto modes = mode_decomposition(chain, decomp, theta);
      flagged = flagged || modes.near_singular;
      worst = std::max(worst, modes.residual);
      worst_split = std::max(worst_split, exponential_mode_split(chain, decomp, theta).residual);
    }
    out.push_back(at_most("mode_decomposition", worst, 1e-10,
                          flagged ? "transfer matrix flagged near-singular" : ""));
    out.push_back(at_most("exponential_mode_split", worst_split, 1e-10));
  }

  {
    const auto q = overlap_quadratic_form(decomp);
    out.push_back(at_most("overlap_form_closed", q.max_relative_gap, 1e-12));
    out.push_back(at_most("overlap_form_gamma", q.gamma_relative_gap, 1e-12));
    out.push_back(at_least("overlap_form_limit_bound", q.limit.lambda_min, q.lower_bound));
  }

  if (decomp.k() + 2 <= n - 2) {
    const auto consistent = solve_atc_consistent(chain, decomp);
    const double ref = std::max(std::sqrt(norm_squared(u_ref, chain.domain())), 1e-14);
    out.push_back(at_most(
        "consistent_variant_equivalence",
        std::sqrt(distance_squared(consistent.u_atc, u_ref, chain.domain())) / ref, 1e-10));
  }

  {
    const auto zero = ChainModel::build(n, chain.k1(), chain.k2(), ForceSpec{});
    const auto patch = patch_test(zero, Decomposition::decompose(zero, decomp.k(), decomp.l()),
                                  0.01);
    out.push_back({"patch_test", patch.passed, patch.max_deviation, patch.tolerance,
                   describe({{"mismatch", patch.mismatch}})});
  }

  return card;
}

}  // namespace atc
