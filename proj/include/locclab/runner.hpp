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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locclab/errors.hpp"
#include "locclab/serialize.hpp"

namespace locclab {

enum class Command { Gamble, SomeEpr, PairEpr, CatToEpr, EprToCat, Synthesize, LoccqRewrite, Audit, Sample, Generate };

/// Throws InvalidArgument for unknown names.
Command parse_command(const std::string& name);
const char* command_name(Command c);

enum class Format { Json, Csv };

struct RunConfig {
    Command command = Command::Gamble;
    std::string state_path;
    std::string protocol_path;
    std::uint64_t seed = 0;
    std::size_t trials = 100000;
    /// Empty means the report is only returned.
    std::string output_path;
    Format format = Format::Json;
    /// Party names, e.g. {"A", "B"}.
    std::vector<std::string> pair;
    std::optional<std::size_t> copies;
    /// synthesize: the party that prepares the target.
    std::string site;
    /// generate
    std::string kind;
    std::size_t parties = 0;
    std::vector<std::size_t> dims;
};

/// 0 ok, 2 malformed input, 3 failed precondition, 4 resource guard.
int exit_code_for(ErrorCode code);

/// Runs one command and returns the rendered report (also written to
/// output_path when set). Throws Error.
std::string run(const RunConfig& config);

/// State for `generate`. Throws InvalidArgument for bad parameters.
PureState generate_state(const std::string& kind, std::size_t parties, const std::vector<std::size_t>& dims, std::uint64_t seed);

} // namespace locclab
