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

#include "atc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "atc/error.hpp"

namespace atc {

using nlohmann::json;

std::string format_double(double v) {
  if (!std::isfinite(v)) throw Error(ErrorKind::verification, "output: non-finite value");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorKind::io, "cannot open " + tmp.string() + " for writing");
    os << content;
    os.flush();
    if (!os) throw Error(ErrorKind::io, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::io, "cannot replace " + path.string());
  }
}

std::string solution_csv(const AtcResult& result, const Decomposition& decomp) {
  std::ostringstream os;
  os << "atom_index,u_atc,u_a_op,u_c_op\n";
  for (int i = 0; i <= decomp.n(); ++i) {
    os << i << ',' << format_double(result.u_atc(i)) << ',';
    if (result.u_a_op.covers(i)) os << format_double(result.u_a_op(i));
    os << ',';
    if (result.u_c_op.covers(i)) os << format_double(result.u_c_op(i));
    os << '\n';
  }
  return os.str();
}

json summary_json(const ChainModel& chain, const Decomposition& decomp, const AtcResult& result) {
  const auto split = mismatch_norm(result.u_a_op, result.u_c_op, decomp);
  const auto& d = result.diagnostics;
  const auto& c = result.controls;
  return json{
      {"model",
       {{"N", chain.n()}, {"k1", chain.k1()}, {"k2", chain.k2()}, {"kc", chain.kc()}}},
      {"decomposition", {{"K", decomp.k()}, {"L", decomp.l()}, {"gamma", decomp.gamma()}}},
      {"controls",
       {{"theta_a_lm1", c.theta_a_lm1}, {"theta_a_l", c.theta_a_l}, {"theta_c_k", c.theta_c_k}}},
      {"mismatch",
       {{"total", split.total},
        {"at_continuum_boundary", split.at_continuum_boundary},
        {"interior", split.interior},
        {"at_atomistic_boundary", split.at_atomistic_boundary}}},
      {"norms",
       {{"u_atc", std::sqrt(norm_squared(result.u_atc, result.u_atc.range()))},
        {"u_a_op", std::sqrt(norm_squared(result.u_a_op, result.u_a_op.range()))},
        {"u_c_op", std::sqrt(norm_squared(result.u_c_op, result.u_c_op.range()))}}},
      {"diagnostics",
       {{"gram_condition", d.gram_condition},
        {"gram_min_eigenvalue", d.gram_min_eigenvalue},
        {"control_residual", d.control_residual},
        {"optimality_gradient", d.optimality_gradient},
        {"objective_scale", d.objective_scale},
        {"warnings", d.warnings}}}};
}

json patch_json(const PatchReport& r, const Decomposition& decomp) {
  return json{{"N", decomp.n()},
              {"K", decomp.k()},
              {"L", decomp.l()},
              {"F", r.strain},
              {"max_deviation", r.max_deviation},
              {"mismatch", r.mismatch},
              {"tolerance", r.tolerance},
              {"passed", r.passed}};
}

json scorecard_json(const Scorecard& card) {
  json checks = json::array();
  for (const auto& c : card.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  return json{{"N", card.n},
              {"K", card.k},
              {"L", card.l},
              {"all_passed", card.all_passed()},
              {"checks", std::move(checks)}};
}

json sweep_json(const SweepResult& sweep) {
  json rows = json::array();
  for (const auto& r : sweep.rows) {
    rows.push_back({{"N", r.n},
                    {"K", r.k},
                    {"L", r.l},
                    {"gamma", r.gamma},
                    {"p", r.p},
                    {"err_atc", r.err_atc},
                    {"err_model", r.err_model},
                    {"bound_rhs", r.bound_rhs},
                    {"q_norm_est", r.q_norm_est},
                    {"mismatch", r.mismatch},
                    {"eps_scaled_err", r.eps_scaled_err}});
  }
  return json{{"rows", std::move(rows)},
              {"notes", sweep.notes},
              {"eps_slope", sweep.eps_slope},
              {"q_slope", sweep.q_slope}};
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "N,K,L,gamma,p,err_atc,err_model,bound_rhs,q_norm_est,mismatch,eps_scaled_err\n";
  for (const auto& r : sweep.rows) {
    os << r.n << ',' << r.k << ',' << r.l << ',' << format_double(r.gamma) << ','
       << format_double(r.p) << ',' << format_double(r.err_atc) << ','
       << format_double(r.err_model) << ',' << format_double(r.bound_rhs) << ','
       << format_double(r.q_norm_est) << ',' << format_double(r.mismatch) << ','
       << format_double(r.eps_scaled_err) << '\n';
  }
  return os.str();
}

std::vector<double> load_force_table(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::io, "cannot read force table " + path.string());
  std::vector<double> values;
  std::string line;
  while (std::getline(is, line)) {
    const auto comma = line.find(',');
    const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str()) continue;
    values.push_back(v);
  }
  return values;
}

}  // namespace atc
