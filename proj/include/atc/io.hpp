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

// Serialization of results and reports. Numbers are written with 17
// significant digits; files are replaced atomically through a temporary.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "atc/analysis.hpp"
#include "atc/coupling.hpp"
#include "atc/lattice.hpp"
#include "atc/verify.hpp"

namespace atc {

/// Shortest-safe round-trip formatting ("%.17g"). Throws on non-finite input.
std::string format_double(double v);

/// Writes to `path.tmp` then renames over `path`. Throws Error(io).
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Per-atom CSV: atom_index, u_atc, u_a_op (blank off [0, L]), u_c_op
/// (blank off [K, N-1]).
std::string solution_csv(const AtcResult& result, const Decomposition& decomp);

nlohmann::json summary_json(const ChainModel& chain, const Decomposition& decomp,
                            const AtcResult& result);
nlohmann::json patch_json(const PatchReport& report, const Decomposition& decomp);
nlohmann::json scorecard_json(const Scorecard& card);
nlohmann::json sweep_json(const SweepResult& sweep);
std::string sweep_csv(const SweepResult& sweep);

/// Reads per-atom loads from a CSV with either one value per line or
/// `index,value` pairs. Lines that do not parse as numbers (headers) are
/// skipped. Throws Error(io) if the file cannot be read.
std::vector<double> load_force_table(const std::filesystem::path& path);

}  // namespace atc
