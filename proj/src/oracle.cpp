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

#include "atc/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "atc/error.hpp"

namespace atc {

namespace {

double objective(const ChainModel& chain, const Decomposition& decomp, const Eigen::Vector3d& x) {
  return reduced_objective(chain, decomp, ControlPair::from_vector(x));
}

}  // namespace

OracleResult minimize_objective_fd_newton(const ChainModel& chain, const Decomposition& decomp,
                                          int max_iterations) {
  if (max_iterations < 1) throw_invalid("oracle: need at least one iteration");
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  OracleResult out;
  for (int it = 0; it < max_iterations; ++it) {
    // The objective is quadratic, so central differences are exact up to
    // rounding for any step; a step on the scale of x keeps rounding small.
    const double h = 1.0 + x.cwiseAbs().maxCoeff();
    const double f0 = objective(chain, decomp, x);
    Eigen::Vector3d g;
    Eigen::Matrix3d hess;
    for (int i = 0; i < 3; ++i) {
      Eigen::Vector3d ei = Eigen::Vector3d::Zero();
      ei(i) = h;
      const double fp = objective(chain, decomp, x + ei);
      const double fm = objective(chain, decomp, x - ei);
      g(i) = (fp - fm) / (2.0 * h);
      hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
      for (int j = 0; j < i; ++j) {
        Eigen::Vector3d ej = Eigen::Vector3d::Zero();
        ej(j) = h;
        const double fpp = objective(chain, decomp, x + ei + ej);
        const double fpm = objective(chain, decomp, x + ei - ej);
        const double fmp = objective(chain, decomp, x - ei + ej);
        const double fmm = objective(chain, decomp, x - ei - ej);
        hess(i, j) = hess(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      }
    }
    Eigen::LDLT<Eigen::Matrix3d> ldlt(hess);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
      throw_solver("oracle: finite-difference Hessian is not positive definite");
    const Eigen::Vector3d step = -ldlt.solve(g);
    x += step;
    out.iterations = it + 1;
    out.last_step = step.cwiseAbs().maxCoeff();
    if (out.last_step <= 1e-13 * (1.0 + x.cwiseAbs().maxCoeff())) break;
  }
  out.controls = ControlPair::from_vector(x);
  out.objective = objective(chain, decomp, x);
  return out;
}

}  // namespace atc
