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

// Command-line driver over the C interface.
//
// Precedence for every setting: flag, then --config JSON file, then default.
// Exit codes: 0 success, 1 invalid input or I/O, 2 failed verification,
// 3 solver or internal failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "atc/atc.h"

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kInvalid = 1, kVerification = 2, kSolver = 3 };

int exit_code(atc_status s) {
  switch (s) {
    case ATC_OK: return kOk;
    case ATC_ERR_INVALID_ARGUMENT:
    case ATC_ERR_IO: return kInvalid;
    case ATC_ERR_VERIFICATION: return kVerification;
    case ATC_ERR_SOLVER:
    case ATC_ERR_INTERNAL: return kSolver;
  }
  return kSolver;
}

// Carries an exit code out of a failed step.
struct Failure {
  int code;
  std::string message;
};

void check(atc_status s, const std::string& what) {
  if (s != ATC_OK) throw Failure{exit_code(s), what + ": " + atc_last_error()};
}

struct StringDeleter {
  void operator()(char* s) const { atc_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct ChainDeleter {
  void operator()(atc_chain* c) const { atc_chain_destroy(c); }
};
struct DecompDeleter {
  void operator()(atc_decomposition* d) const { atc_decomposition_destroy(d); }
};
struct ResultDeleter {
  void operator()(atc_result* r) const { atc_result_destroy(r); }
};
using Chain = std::unique_ptr<atc_chain, ChainDeleter>;
using Decomp = std::unique_ptr<atc_decomposition, DecompDeleter>;
using Result = std::unique_ptr<atc_result, ResultDeleter>;

struct RunConfig {
  int n = 0;
  int k = 0;
  int l = 0;
  double k1 = 1.0;
  double k2 = -1.0 / 6.0;
  std::string force = "zero";
  std::string force_table;
  double strain = 0.01;
  std::uint64_t seed = 7;
  std::vector<int> n_values;
  double p = 2.0;
  double gamma = 0.5;
  double c = 2.0;
  std::string load_scaling = "continuum";
  unsigned threads = 0;
  std::string csv = "solution.csv";
  std::string summary = "summary.json";
  std::string report = "patch_report.json";
  std::string scorecard = "scorecard.json";
  std::string sweep_csv = "sweep.csv";
};

// Flag values before merging; unset flags leave the file or default value.
struct Flags {
  std::string config;
  std::optional<int> n, k, l;
  std::optional<double> k1, k2, strain, p, gamma, c;
  std::optional<std::string> force, force_table, load_scaling;
  std::optional<std::string> csv, summary, report, scorecard, sweep_csv;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<int>> n_values;
  std::optional<unsigned> threads;
};

std::string join_params(const json& params, char sep) {
  std::ostringstream os;
  bool first = true;
  for (const auto& v : params) {
    if (!first) os << sep;
    first = false;
    if (v.is_number_integer()) {
      os << v.get<long long>();
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
      os << buf;
    }
  }
  return os.str();
}

// force.kind / force.params, or a text form under "force".
std::string force_from_json(const json& j) {
  if (j.contains("force") && j["force"].is_string()) return j["force"].get<std::string>();
  const json* node = j.contains("force") && j["force"].is_object() ? &j["force"] : &j;
  const std::string kind_key = node == &j ? "force.kind" : "kind";
  const std::string params_key = node == &j ? "force.params" : "params";
  if (!node->contains(kind_key)) return {};
  const auto kind = (*node)[kind_key].get<std::string>();
  if (!node->contains(params_key)) return kind;
  json params = (*node)[params_key];
  if (!params.is_array()) params = json::array({params});
  if (params.empty()) return kind;
  return kind + ":" + join_params(params, kind == "poly" ? ',' : ':');
}

void apply_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Failure{kInvalid, "cannot read config file " + path};
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Failure{kInvalid, "config " + path + ": " + e.what()};
  }
  if (!j.is_object()) throw Failure{kInvalid, "config " + path + ": expected a JSON object"};
  try {
    auto take = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    take("N", cfg.n);
    take("K", cfg.k);
    take("L", cfg.l);
    take("k1", cfg.k1);
    take("k2", cfg.k2);
    take("F", cfg.strain);
    take("seed", cfg.seed);
    take("n_values", cfg.n_values);
    take("p", cfg.p);
    take("gamma", cfg.gamma);
    take("c", cfg.c);
    take("load_scaling", cfg.load_scaling);
    take("threads", cfg.threads);
    take("force_table", cfg.force_table);
    take("csv", cfg.csv);
    take("summary", cfg.summary);
    take("report", cfg.report);
    take("scorecard", cfg.scorecard);
    take("sweep_csv", cfg.sweep_csv);
    const auto force = force_from_json(j);
    if (!force.empty()) cfg.force = force;
  } catch (const json::exception& e) {
    throw Failure{kInvalid, "config " + path + ": " + e.what()};
  }
}

RunConfig merge(const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) apply_file(f.config, cfg);
  auto over = [](const auto& flag, auto& field) {
    if (flag) field = *flag;
  };
  over(f.n, cfg.n);
  over(f.k, cfg.k);
  over(f.l, cfg.l);
  over(f.k1, cfg.k1);
  over(f.k2, cfg.k2);
  over(f.force, cfg.force);
  over(f.force_table, cfg.force_table);
  over(f.strain, cfg.strain);
  over(f.seed, cfg.seed);
  over(f.n_values, cfg.n_values);
  over(f.p, cfg.p);
  over(f.gamma, cfg.gamma);
  over(f.c, cfg.c);
  over(f.load_scaling, cfg.load_scaling);
  over(f.threads, cfg.threads);
  over(f.csv, cfg.csv);
  over(f.summary, cfg.summary);
  over(f.report, cfg.report);
  over(f.scorecard, cfg.scorecard);
  over(f.sweep_csv, cfg.sweep_csv);
  return cfg;
}

Chain make_chain(const RunConfig& cfg, const std::string& force) {
  atc_chain* raw = nullptr;
  if (!cfg.force_table.empty())
    check(atc_chain_create_from_file(cfg.n, cfg.k1, cfg.k2, cfg.force_table.c_str(), &raw),
          "chain");
  else
    check(atc_chain_create(cfg.n, cfg.k1, cfg.k2, force.c_str(), &raw), "chain");
  return Chain(raw);
}

Decomp make_decomposition(const atc_chain* chain, const RunConfig& cfg) {
  atc_decomposition* raw = nullptr;
  check(atc_decomposition_create(chain, cfg.k, cfg.l, &raw), "decomposition");
  Decomp d(raw);
  int ok = 1;
  char* warnings = nullptr;
  check(atc_check_assumptions(d.get(), cfg.p, cfg.c, &ok, &warnings), "assumptions");
  CString owned(warnings);
  if (!ok && warnings) {
    std::string text(warnings);
    while (!text.empty() && text.back() == '\n') text.pop_back();
    std::cerr << "warning: " << text << "\n";
  }
  return d;
}

void write(const std::string& path, const char* text) {
  check(atc_write_file(path.c_str(), text), "write " + path);
}

int run_solve(const RunConfig& cfg) {
  auto chain = make_chain(cfg, cfg.force);
  auto decomp = make_decomposition(chain.get(), cfg);
  atc_result* raw = nullptr;
  check(atc_solve(chain.get(), decomp.get(), &raw), "solve");
  Result result(raw);
  char* csv = nullptr;
  check(atc_result_csv(result.get(), &csv), "csv");
  CString csv_owned(csv);
  char* summary = nullptr;
  check(atc_result_summary(result.get(), &summary), "summary");
  CString summary_owned(summary);
  write(cfg.csv, csv);
  write(cfg.summary, summary);
  double mismatch = 0.0;
  check(atc_result_mismatch(result.get(), &mismatch), "mismatch");
  std::cout << "solve: wrote " << cfg.csv << " and " << cfg.summary << ", mismatch " << mismatch
            << "\n";
  return kOk;
}

int run_patch_test(const RunConfig& cfg) {
  auto chain = make_chain(cfg, "zero");
  auto decomp = make_decomposition(chain.get(), cfg);
  int passed = 0;
  char* report = nullptr;
  check(atc_patch_test(chain.get(), decomp.get(), cfg.strain, &passed, &report), "patch test");
  CString owned(report);
  write(cfg.report, report);
  const auto j = json::parse(report);
  std::cout << "patch-test: " << (passed ? "pass" : "FAIL") << ", max deviation "
            << j.value("max_deviation", 0.0) << " (tolerance " << j.value("tolerance", 0.0)
            << ")\n";
  if (!passed) {
    std::cerr << "patch test failed; see " << cfg.report << "\n";
    return kVerification;
  }
  return kOk;
}

int run_verify(const RunConfig& cfg) {
  auto chain = make_chain(cfg, cfg.force);
  auto decomp = make_decomposition(chain.get(), cfg);
  int all = 0;
  char* card = nullptr;
  check(atc_verify(chain.get(), decomp.get(), cfg.seed, &all, &card), "verify");
  CString owned(card);
  write(cfg.scorecard, card);
  const auto j = json::parse(card);
  int total = 0;
  int green = 0;
  for (const auto& c : j.value("checks", json::array())) {
    ++total;
    if (c.value("passed", false)) {
      ++green;
    } else {
      std::cerr << "check failed: " << c.value("name", std::string("?")) << " "
                << c.value("detail", std::string()) << "\n";
    }
  }
  std::cout << "verify: " << green << "/" << total << " checks passed, scorecard "
            << cfg.scorecard << "\n";
  return all ? kOk : kVerification;
}

int run_sweep(const RunConfig& cfg) {
  if (cfg.n_values.empty()) throw Failure{kInvalid, "sweep: --n-values is required"};
  atc_sweep_config sc{};
  sc.n_values = cfg.n_values.data();
  sc.n_count = cfg.n_values.size();
  sc.p = cfg.p;
  sc.gamma = cfg.gamma;
  sc.c = cfg.c;
  sc.k1 = cfg.k1;
  sc.k2 = cfg.k2;
  sc.force = cfg.force.c_str();
  if (cfg.load_scaling == "continuum")
    sc.load_scaling = ATC_LOAD_CONTINUUM;
  else if (cfg.load_scaling == "lattice")
    sc.load_scaling = ATC_LOAD_LATTICE;
  else
    throw Failure{kInvalid, "sweep: load scaling must be 'continuum' or 'lattice'"};
  sc.threads = cfg.threads;
  char* csv = nullptr;
  char* report = nullptr;
  check(atc_sweep(&sc, &csv, &report), "sweep");
  CString csv_owned(csv);
  CString report_owned(report);
  write(cfg.sweep_csv, csv);
  const auto j = json::parse(report);
  for (const auto& note : j.value("notes", json::array()))
    std::cerr << "note: " << note.get<std::string>() << "\n";
  std::cout << "sweep: wrote " << cfg.sweep_csv << ", eps slope " << j.value("eps_slope", 0.0)
            << ", Q slope " << j.value("q_slope", 0.0) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimization-based atomistic-to-continuum coupling for a 1D chain"};
  app.set_version_flag("--version", std::string(atc_version()));
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  app.add_option("--config", f.config, "JSON config file; flags override its values");
  app.add_option("--N", f.n, "number of bonds (atoms 0..N)");
  app.add_option("--K", f.k, "continuum interface");
  app.add_option("--L", f.l, "atomistic interface");
  app.add_option("--k1", f.k1, "nearest-neighbor spring constant (default 1)");
  app.add_option("--k2", f.k2, "next-nearest spring constant (default -1/6)");
  app.add_option("--force", f.force, "zero | point:<i>:<m> | sine:<m> | poly:<c0>,<c1>,...");
  app.add_option("--force-table", f.force_table, "per-atom loads from a CSV file");
  app.add_option("--F", f.strain, "uniform strain for patch-test (default 0.01)");
  app.add_option("--seed", f.seed, "random seed for verify (default 7)");
  app.add_option("--n-values", f.n_values, "sweep sizes, comma separated")->delimiter(',');
  app.add_option("--p", f.p, "atomistic size exponent, L ~ c N^(1/p) (default 2)");
  app.add_option("--gamma", f.gamma, "relative overlap width (default 0.5)");
  app.add_option("--c", f.c, "size constant c (default 2)");
  app.add_option("--load-scaling", f.load_scaling, "continuum (default) | lattice");
  app.add_option("--threads", f.threads, "sweep threads (default ATC_NUM_THREADS or hardware)");
  app.add_option("--csv", f.csv, "solution CSV (default solution.csv)");
  app.add_option("--summary", f.summary, "solution summary JSON (default summary.json)");
  app.add_option("--report", f.report, "patch report JSON (default patch_report.json)");
  app.add_option("--scorecard", f.scorecard, "verify scorecard JSON (default scorecard.json)");
  app.add_option("--sweep-csv", f.sweep_csv, "sweep table CSV (default sweep.csv)");

  auto* solve = app.add_subcommand("solve", "coupled solve; writes CSV and JSON summary");
  auto* patch = app.add_subcommand("patch-test", "uniform strain test on a zero-load chain");
  auto* verify = app.add_subcommand("verify", "full invariant battery; writes a scorecard");
  auto* sweep = app.add_subcommand("sweep", "convergence sweep over N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    const RunConfig cfg = merge(f);
    if (solve->parsed()) return run_solve(cfg);
    if (patch->parsed()) return run_patch_test(cfg);
    if (verify->parsed()) return run_verify(cfg);
    if (sweep->parsed()) return run_sweep(cfg);
    return kInvalid;
  } catch (const Failure& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed report: " << e.what() << "\n";
    return kSolver;
  }
}
