// Copyright 2026 The locclab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "locclab/analysis.hpp"
#include "locclab/locc.hpp"
#include "locclab/protocols.hpp"

namespace locclab {

using Json = nlohmann::ordered_json;

/// State files accept norms within 1 +/- kFileNormTol and renormalize them.
inline constexpr double kFileNormTol = 1e-6;

/// Complex parts are written as decimal strings with 17 significant digits;
/// readers accept strings or numbers.
Json state_to_json(const PureState& s);
PureState state_from_json(const Json& j);
PureState load_state(const std::filesystem::path& path);
void save_state(const PureState& s, const std::filesystem::path& path);

/// Party names in the script are resolved against `layout`. Nodes without an
/// "id" are named "node1", "node2", ...; the first node is the entry.
LoccProgram program_from_json(const Json& j, const RegisterLayout& layout);
Json program_to_json(const LoccProgram& prog, const RegisterLayout& layout);
/// Optional top-level "cat_budget" of a script (0 when absent).
std::size_t program_cat_budget(const Json& j);

Json read_json_file(const std::filesystem::path& path);

/// FNV-1a over party names, dims and the bit patterns of the amplitudes.
std::string state_digest(const PureState& s);

Json ledger_to_json(const ResourceLedger& l);
Json trace_to_json(const ProtocolTrace& t);
Json yield_to_json(const YieldEstimate& y);
Json audit_to_json(const AuditReport& a);
Json stages_to_json(const std::vector<StageRecord>& stages);

} // namespace locclab
