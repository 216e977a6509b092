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

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "locclab/locclab.h"

int main(int argc, char** argv) {
    CLI::App app{"Simulate LOCC entanglement protocols on multipartite pure states."};
    app.set_version_flag("--version", locclab_version());

    std::string command;
    std::string state, protocol, out, format = "json", pair, site, kind;
    std::uint64_t seed = 0;
    std::size_t trials = 100000, copies = 0, parties = 0;
    std::vector<std::size_t> dims;

    app.add_option("command", command, "gamble | some-epr | pair-epr | cat2epr | epr2cat | synthesize | loccq-rewrite | audit | sample | generate")
        ->required();
    app.add_option("--state", state, "State file (JSON)");
    app.add_option("--protocol", protocol, "Protocol script (JSON)");
    app.add_option("--seed", seed, "Sampling / generation seed");
    app.add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    app.add_option("--out", out, "Report file (default: standard output)");
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--pair", pair, "Target parties, P1,P2");
    app.add_option("--copies", copies, "Source copies (loccq-rewrite) or copy budget (pair-epr)")->check(CLI::PositiveNumber);
    app.add_option("--site", site, "synthesize: party preparing the target");
    app.add_option("--kind", kind, "generate: ghz | w | epr | random-irreducible | random-factorizable");
    app.add_option("--parties", parties, "generate / epr2cat: number of parties");
    app.add_option("--dims", dims, "generate: local dimension, one value or one per party")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    locclab_run_config config = locclab_run_config_default();
    config.command = command.c_str();
    config.state_path = state.c_str();
    config.protocol_path = protocol.c_str();
    config.seed = seed;
    config.trials = trials;
    config.output_path = out.c_str();
    config.format = format.c_str();
    config.pair = pair.c_str();
    config.copies = copies;
    config.site = site.c_str();
    config.kind = kind.c_str();
    config.parties = parties;
    config.dims = dims.data();
    config.num_dims = dims.size();

    char* report = nullptr;
    const locclab_status status = locclab_run(&config, &report);
    if (status != LOCCLAB_OK) {
        std::fprintf(stderr, "locclab: %s\n", locclab_last_error());
        return locclab_status_exit_code(status);
    }
    if (out.empty()) std::fputs(report, stdout);
    locclab_string_free(report);
    return 0;
}
