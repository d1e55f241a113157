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

#include "atc/atc.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>

#include "atc/analysis.hpp"
#include "atc/coupling.hpp"
#include "atc/error.hpp"
#include "atc/io.hpp"
#include "atc/lattice.hpp"
#include "atc/solvers.hpp"
#include "atc/verify.hpp"

struct atc_chain {
  atc::ChainModel model;
};

struct atc_decomposition {
  atc::Decomposition decomp;
};

struct atc_result {
  atc::ChainModel chain;
  atc::Decomposition decomp;
  atc::AtcResult result;
};

namespace {

thread_local std::string last_error;

atc_status fail(atc_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

atc_status status_of(atc::ErrorKind kind) {
  switch (kind) {
    case atc::ErrorKind::invalid_argument:
      return ATC_ERR_INVALID_ARGUMENT;
    case atc::ErrorKind::solver:
      return ATC_ERR_SOLVER;
    case atc::ErrorKind::verification:
      return ATC_ERR_VERIFICATION;
    case atc::ErrorKind::io:
      return ATC_ERR_IO;
  }
  return ATC_ERR_INTERNAL;
}

// Runs body and converts exceptions into status codes.
template <class F>
atc_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return ATC_OK;
  } catch (const atc::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ATC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ATC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ATC_ERR_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* message) {
  if (!condition) atc::throw_invalid(message);
}

char* duplicate(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  if (out) *out = duplicate(s);
}

const atc::DisplacementField& field_of(const atc_result* r, atc_field which) {
  switch (which) {
    case ATC_FIELD_COUPLED:
      return r->result.u_atc;
    case ATC_FIELD_ATOMISTIC:
      return r->result.u_a_op;
    case ATC_FIELD_CONTINUUM:
      return r->result.u_c_op;
  }
  atc::throw_invalid("unknown field selector");
}

void copy_field(const atc::DisplacementField& u, double* values, size_t length) {
  require(values != nullptr, "null output buffer");
  require(length >= static_cast<size_t>(u.size()), "output buffer too small");
  const auto v = u.values();
  std::copy(v.begin(), v.end(), values);
}

}  // namespace

extern "C" {

const char* atc_version(void) { return "1.0.0"; }

const char* atc_last_error(void) { return last_error.c_str(); }

void atc_string_free(char* s) { delete[] s; }

atc_status atc_chain_create(int n, double k1, double k2, const char* force, atc_chain** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    const auto spec = atc::ForceSpec::parse(force ? force : "zero");
    *out = new atc_chain{atc::ChainModel::build(n, k1, k2, spec)};
  });
}

atc_status atc_chain_create_from_table(int n, double k1, double k2, const double* forces,
                                       size_t length, atc_chain** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(forces != nullptr || length == 0, "null force table");
    const auto spec = atc::ForceSpec::from_table(std::vector<double>(forces, forces + length));
    *out = new atc_chain{atc::ChainModel::build(n, k1, k2, spec)};
  });
}

atc_status atc_chain_create_from_file(int n, double k1, double k2, const char* path,
                                      atc_chain** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(path != nullptr, "null path");
    const auto spec = atc::ForceSpec::from_table(atc::load_force_table(path));
    *out = new atc_chain{atc::ChainModel::build(n, k1, k2, spec)};
  });
}

void atc_chain_destroy(atc_chain* chain) { delete chain; }

atc_status atc_decomposition_create(const atc_chain* chain, int k, int l,
                                    atc_decomposition** out) {
  return guarded([&] {
    require(chain != nullptr && out != nullptr, "null handle");
    *out = new atc_decomposition{atc::Decomposition::decompose(chain->model, k, l)};
  });
}

void atc_decomposition_destroy(atc_decomposition* decomp) { delete decomp; }

atc_status atc_check_assumptions(const atc_decomposition* decomp, double p, double c, int* ok,
                                 char** warnings) {
  return guarded([&] {
    require(decomp != nullptr && ok != nullptr, "null handle");
    const auto report = atc::validate_assumptions(decomp->decomp, p, c);
    *ok = report.size_ok && report.overlap_ok ? 1 : 0;
    std::string text;
    for (const auto& w : report.warnings) text += w + "\n";
    emit(warnings, text);
  });
}

atc_status atc_solve(const atc_chain* chain, const atc_decomposition* decomp, atc_result** out) {
  return guarded([&] {
    require(chain != nullptr && decomp != nullptr && out != nullptr, "null handle");
    require(decomp->decomp.n() == chain->model.n(), "decomposition built for another chain");
    *out = new atc_result{chain->model, decomp->decomp,
                          atc::solve_atc(chain->model, decomp->decomp)};
  });
}

void atc_result_destroy(atc_result* result) { delete result; }

atc_status atc_result_controls(const atc_result* result, double* controls) {
  return guarded([&] {
    require(result != nullptr && controls != nullptr, "null handle");
    const auto& c = result->result.controls;
    controls[0] = c.theta_a_lm1;
    controls[1] = c.theta_a_l;
    controls[2] = c.theta_c_k;
  });
}

atc_status atc_result_mismatch(const atc_result* result, double* mismatch) {
  return guarded([&] {
    require(result != nullptr && mismatch != nullptr, "null handle");
    *mismatch = result->result.mismatch;
  });
}

atc_status atc_result_field_range(const atc_result* result, atc_field which, int* lo, int* hi) {
  return guarded([&] {
    require(result != nullptr && lo != nullptr && hi != nullptr, "null handle");
    const auto& u = field_of(result, which);
    *lo = u.lo();
    *hi = u.hi();
  });
}

atc_status atc_result_field(const atc_result* result, atc_field which, double* values,
                            size_t length) {
  return guarded([&] {
    require(result != nullptr, "null handle");
    copy_field(field_of(result, which), values, length);
  });
}

atc_status atc_result_csv(const atc_result* result, char** csv) {
  return guarded([&] {
    require(result != nullptr && csv != nullptr, "null handle");
    *csv = duplicate(atc::solution_csv(result->result, result->decomp));
  });
}

atc_status atc_result_summary(const atc_result* result, char** json) {
  return guarded([&] {
    require(result != nullptr && json != nullptr, "null handle");
    *json = duplicate(atc::summary_json(result->chain, result->decomp, result->result).dump(2));
  });
}

atc_status atc_solve_consistent(const atc_chain* chain, const atc_decomposition* decomp,
                                double* controls, double* u_atc, size_t length) {
  return guarded([&] {
    require(chain != nullptr && decomp != nullptr, "null handle");
    const auto r = atc::solve_atc_consistent(chain->model, decomp->decomp);
    if (controls) std::copy(r.controls.begin(), r.controls.end(), controls);
    if (u_atc) copy_field(r.u_atc, u_atc, length);
  });
}

atc_status atc_solve_reference(const atc_chain* chain, double* u, size_t length) {
  return guarded([&] {
    require(chain != nullptr, "null handle");
    copy_field(atc::solve_full_atomistic(chain->model), u, length);
  });
}

atc_status atc_patch_test(const atc_chain* chain, const atc_decomposition* decomp,
                          double strain, int* passed, char** report) {
  return guarded([&] {
    require(chain != nullptr && decomp != nullptr, "null handle");
    const auto r = atc::patch_test(chain->model, decomp->decomp, strain);
    if (passed) *passed = r.passed ? 1 : 0;
    emit(report, atc::patch_json(r, decomp->decomp).dump(2));
  });
}

atc_status atc_q_norm(const atc_chain* chain, const atc_decomposition* decomp, double* q_norm) {
  return guarded([&] {
    require(chain != nullptr && decomp != nullptr && q_norm != nullptr, "null handle");
    *q_norm = atc::estimate_q_norm(chain->model, decomp->decomp).q_norm;
  });
}

atc_status atc_verify(const atc_chain* chain, const atc_decomposition* decomp, uint64_t seed,
                      int* all_passed, char** scorecard) {
  return guarded([&] {
    require(chain != nullptr && decomp != nullptr, "null handle");
    const auto card = atc::run_verification(chain->model, decomp->decomp, seed);
    if (all_passed) *all_passed = card.all_passed() ? 1 : 0;
    emit(scorecard, atc::scorecard_json(card).dump(2));
  });
}

atc_status atc_sweep(const atc_sweep_config* config, char** csv, char** report) {
  return guarded([&] {
    require(config != nullptr, "null sweep config");
    require(config->n_values != nullptr || config->n_count == 0, "null N list");
    atc::SweepConfig cfg;
    cfg.n_values.assign(config->n_values, config->n_values + config->n_count);
    cfg.p = config->p;
    cfg.gamma = config->gamma;
    cfg.c = config->c;
    cfg.k1 = config->k1;
    cfg.k2 = config->k2;
    cfg.force = atc::ForceSpec::parse(config->force ? config->force : "zero");
    cfg.scaling = config->load_scaling == ATC_LOAD_LATTICE ? atc::LoadScaling::lattice
                                                           : atc::LoadScaling::continuum;
    cfg.threads = config->threads;
    const auto sweep = atc::convergence_sweep(cfg);
    emit(csv, atc::sweep_csv(sweep));
    emit(report, atc::sweep_json(sweep).dump(2));
  });
}

atc_status atc_write_file(const char* path, const char* text) {
  return guarded([&] {
    require(path != nullptr && text != nullptr, "null argument");
    atc::write_atomic(path, text);
  });
}

}  // extern "C"
