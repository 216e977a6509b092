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

#include "locclab/runner.hpp"

#include <fstream>
#include <sstream>

#include "locclab/states.hpp"

namespace locclab {

namespace {

constexpr const char* kYieldNote = "yield_per_copy = target copies x success probability / source copies consumed";
constexpr const char* kFilterNote =
    "filter amplitudes are normalized after projection: c = a1/sqrt(a1^2 + a2^2), d = a2/sqrt(a1^2 + a2^2)";
constexpr const char* kMergeNote =
    "a found pair that is not the target is fused by teleporting the non-target share qubit by qubit; "
    "each qubit needs one EPR pair, gambled for on its own fresh copy";

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Json>> rows;
};

struct Report {
    Json json;
    Table table;
};

std::string csv_cell(const Json& v) {
    std::string text = v.is_string() ? v.get<std::string>() : v.dump();
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

std::string render_csv(const Table& t) {
    std::ostringstream out;
    for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
        out << '\n';
    }
    return out.str();
}

Table flat_table(const Json& j) {
    Table t{{"key", "value"}, {}};
    const Json flat = j.flatten();
    for (const auto& [k, v] : flat.items()) t.rows.push_back({k, v});
    return t;
}

Table branch_table(const ProtocolTrace& trace) {
    Table t{{"path", "verdict", "probability", "cbits"}, {}};
    for (const auto& b : trace.branches) t.rows.push_back({b.path_string(), verdict_name(b.verdict), b.probability, b.cbits});
    return t;
}

Json base_report(const RunConfig& cfg, const PureState* s) {
    Json j;
    j["protocol"] = command_name(cfg.command);
    if (s) j["state_digest"] = state_digest(*s);
    j["seed"] = cfg.seed;
    j["trials"] = cfg.trials;
    return j;
}

PureState require_state(const RunConfig& cfg) {
    if (cfg.state_path.empty()) throw Error(ErrorCode::InvalidArgument, "--state is required");
    return load_state(cfg.state_path);
}

std::pair<PartyId, PartyId> require_pair(const RunConfig& cfg, const PureState& s) {
    if (cfg.pair.size() != 2) throw Error(ErrorCode::InvalidArgument, "--pair P1,P2 is required");
    const PartyId a = s.layout().require(cfg.pair[0]);
    const PartyId b = s.layout().require(cfg.pair[1]);
    if (a == b) throw Error(ErrorCode::InvalidArgument, "--pair needs two different parties");
    return {a, b};
}

LoccProgram require_program(const RunConfig& cfg, const RegisterLayout& layout, Json* raw = nullptr) {
    if (cfg.protocol_path.empty()) throw Error(ErrorCode::InvalidArgument, "--protocol is required");
    const Json j = read_json_file(cfg.protocol_path);
    if (raw) *raw = j;
    try {
        return program_from_json(j, layout);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("program: ") + e.what());
    }
}

Json distillation_json(const DistillationOutcome& out) {
    return {{"pair", {out.first_name, out.second_name}},
            {"success_probability", out.success_probability},
            {"min_success_fidelity", out.min_success_fidelity},
            {"stages", stages_to_json(out.stages)},
            {"ledger", ledger_to_json(out.ledger)},
            {"program_nodes", out.program.size()},
            {"trace", trace_to_json(out.trace)}};
}

Report distillation_report(const RunConfig& cfg, const PureState& s, const DistillationOutcome& out, Json analytic,
                           std::vector<std::string> notes) {
    Report r{base_report(cfg, &s), branch_table(out.trace)};
    r.json["result"] = distillation_json(out);
    analytic["enumerated_final_stage"] = out.trace.total_success_probability;
    r.json["analytic"] = analytic;
    r.json["sampled"] = yield_to_json(monte_carlo_yield(out.program, *out.final_input, cfg.trials, cfg.seed));
    notes.push_back(kYieldNote);
    r.json["notes"] = notes;
    return r;
}

Json gamble_analysis_json(const GambleAnalysis& g) {
    return {{"formula", g.total_success},     {"a1", g.a1}, {"a2", g.a2}, {"projection_probability", g.projection_probability},
            {"c", g.c},                       {"d", g.d},   {"filter_probability", g.filter_probability}};
}

Report run_gamble(const RunConfig& cfg) {
    const PureState s = require_state(cfg);
    if (s.num_parties() < 2) throw Error(ErrorCode::InvalidArgument, "gamble needs at least 2 parties");
    if (!cfg.pair.empty()) {
        const auto [a, b] = require_pair(cfg, s);
        const auto out = gamble_pair(s, a, b);
        const auto g = gamble_success_probability(schmidt(s, singleton_cut(a, s.num_parties())).coefficients);
        return distillation_report(cfg, s, out, gamble_analysis_json(g), {kFilterNote});
    }
    const Cut cut = singleton_cut(PartyId{0}, s.num_parties());
    const auto g = gamble_success_probability(schmidt(s, cut).coefficients);
    const auto out = bipartite_gamble(s, cut);
    Json analytic = gamble_analysis_json(g);
    analytic["cut"] = cut.describe(s.layout());
    return distillation_report(cfg, s, out, analytic, {kFilterNote});
}

Report run_some_epr(const RunConfig& cfg) {
    const PureState s = require_state(cfg);
    const auto out = gamble_some_epr(s);
    return distillation_report(cfg, s, out, {{"enumerated", out.success_probability}}, {kFilterNote});
}

Report run_pair_epr(const RunConfig& cfg) {
    const PureState s = require_state(cfg);
    const auto [a, b] = require_pair(cfg, s);
    const std::uint64_t budget = cfg.copies ? *cfg.copies : default_copy_budget(s);
    const auto out = epr_between_pair(s, a, b, budget);
    return distillation_report(cfg, s, out, {{"enumerated_overall", out.success_probability}, {"copy_budget", budget}},
                               {kFilterNote, kMergeNote});
}

Report run_cat_to_epr(const RunConfig& cfg) {
    const PureState s = require_state(cfg);
    std::pair<PartyId, PartyId> targets{PartyId{0}, PartyId{1}};
    if (!cfg.pair.empty()) targets = require_pair(cfg, s);
    else if (s.num_parties() < 2) throw Error(ErrorCode::NotACatState, "a cat state needs at least 2 parties");
    const auto out = cat_to_epr(s, targets.first, targets.second);
    return distillation_report(cfg, s, out, {{"enumerated", out.success_probability}}, {});
}

Report run_epr_to_cat(const RunConfig& cfg) {
    std::vector<std::string> names;
    if (!cfg.state_path.empty()) {
        for (const auto& p : require_state(cfg).layout().parties()) names.push_back(p.name);
    } else {
        names = party_names(cfg.parties ? cfg.parties : 3);
    }
    if (names.size() < 2) throw Error(ErrorCode::InvalidArgument, "epr2cat needs at least 2 parties");
    const std::vector<std::string> spokes(names.begin() + 1, names.end());
    EprSupply supply;
    for (const auto& sp : spokes) supply.add(names.front(), sp);
    const auto out = eprs_to_cat(names.front(), spokes, supply);
    Report r{base_report(cfg, &out.state), {}};
    r.json["result"] = {{"hub", names.front()}, {"spokes", spokes}, {"fidelity", out.fidelity}, {"ledger", ledger_to_json(out.ledger)},
                        {"state", state_to_json(out.state)}};
    r.table = flat_table(r.json["result"]["ledger"]);
    return r;
}

Report run_synthesize(const RunConfig& cfg) {
    const PureState s = require_state(cfg);
    const std::string site = cfg.site.empty() ? s.layout().party(PartyId{0}).name : cfg.site;
    EprSupply supply;
    for (const auto& p : s.layout().parties())
        if (p.name != site) supply.add(site, p.name, p.dims.size());
    const auto out = synthesize_from_eprs(s, site, supply);
    Report r{base_report(cfg, &s), {}};
    r.json["result"] = {{"site", site}, {"fidelity", out.fidelity}, {"ledger", ledger_to_json(out.ledger)}};
    r.table = flat_table(r.json["result"]);
    return r;
}

Report run_rewrite(const RunConfig& cfg) {
    const PureState source = require_state(cfg);
    if (cfg.protocol_path.empty()) throw Error(ErrorCode::InvalidArgument, "--protocol is required");
    const Json raw = read_json_file(cfg.protocol_path);
    const std::size_t k = program_cat_budget(raw);
    const std::size_t n = cfg.copies ? *cfg.copies : 1;
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "--copies must be positive");
    if (!is_irreducible(source)) throw Error(ErrorCode::NotIrreducible, "source factorizes across some cut");
    const PureState input = cat_assisted_input(source, k, n);
    LoccProgram prog;
    try {
        prog = program_from_json(raw, input.layout());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("program: ") + e.what());
    }
    const auto rw = loccq_to_locc_rewrite(prog, k, source, n);
    Report r{base_report(cfg, &source), branch_table(rw.rewritten)};
    r.json["result"] = {{"cat_budget", rw.cat_budget},
                        {"copies", rw.copies},
                        {"extra_copies", rw.extra_copies},
                        {"cat_source", rw.cat_source},
                        {"stages", stages_to_json(rw.stages)},
                        {"distillation_probability", rw.distillation_probability},
                        {"min_cat_fidelity", rw.min_cat_fidelity},
                        {"original_success", rw.original_success},
                        {"rewritten_success", rw.rewritten_success},
                        {"overall_success", rw.overall_success},
                        {"min_success_fidelity", rw.min_success_fidelity},
                        {"max_probability_gap", rw.max_probability_gap},
                        {"original_ledger", ledger_to_json(rw.original_ledger)},
                        {"rewritten_ledger", ledger_to_json(rw.rewritten_ledger)},
                        {"original_trace", trace_to_json(rw.original)},
                        {"rewritten_trace", trace_to_json(rw.rewritten)}};
    r.json["sampled"] = yield_to_json(monte_carlo_yield(prog, input, cfg.trials, cfg.seed));
    r.json["notes"] = {"extra_copies counts the source copies spent distilling hub-spoke EPR pairs for the cats",
                       "overall_success = distillation_probability x rewritten_success", kYieldNote};
    return r;
}

Report run_audit(const RunConfig& cfg) {
    const PureState s = require_state(cfg);
    const LoccProgram prog = require_program(cfg, s.layout());
    const auto mono = monotone_audit(prog, s);
    Report r{base_report(cfg, &s), {}};
    Json per_cut = audit_to_json(mono)["per_cut"];
    Json fact = Json::array();
    bool pass = mono.pass;
    double worst = mono.max_violation;
    for (const auto& cut : enumerate_cuts(s.layout())) {
        if (!is_factorizable(s, cut)) continue;
        const auto f = factorizability_audit(prog, s, cut);
        pass = pass && f.pass;
        worst = std::max(worst, f.max_violation);
        fact.push_back({{"cut", cut.describe(s.layout())}, {"pass", f.pass}, {"max_violation", f.max_violation}, {"branches", audit_to_json(f)["per_cut"]}});
    }
    r.json["per_cut"] = per_cut;
    r.json["pass"] = pass;
    r.json["max_violation"] = worst;
    r.json["monotone"] = {{"pass", mono.pass}, {"max_violation", mono.max_violation}, {"tolerance", mono.tolerance}};
    r.json["factorizability"] = fact;
    r.json["sampled"] = yield_to_json(monte_carlo_yield(prog, s, cfg.trials, cfg.seed));
    r.table.header = {"node", "path", "cut", "probability", "pre", "post", "violation"};
    for (const auto& row : mono.per_cut) r.table.rows.push_back({row.node, row.path, row.cut, row.probability, row.pre, row.post, row.violation});
    return r;
}

Report run_sample(const RunConfig& cfg) {
    const PureState s = require_state(cfg);
    const LoccProgram prog = require_program(cfg, s.layout());
    const auto trace = run_program(prog, s);
    const auto sample = sample_program(prog, s, cfg.seed, cfg.trials);
    std::map<std::string, const Branch*> by_path;
    for (const auto& b : trace.branches) by_path[b.path_string()] = &b;
    Report r{base_report(cfg, &s), {{"path", "verdict", "probability", "count", "frequency"}, {}}};
    Json rows = Json::array();
    double tv = 0.0;
    std::map<std::string, bool> seen;
    for (const auto& b : trace.branches) {
        auto it = sample.histogram.find(b.path_string());
        const std::size_t count = it == sample.histogram.end() ? 0 : it->second;
        const double freq = static_cast<double>(count) / static_cast<double>(sample.trials);
        tv += std::abs(freq - b.probability);
        seen[b.path_string()] = true;
        rows.push_back({{"path", b.path_string()}, {"verdict", verdict_name(b.verdict)}, {"probability", b.probability}, {"count", count}, {"frequency", freq}});
        r.table.rows.push_back({b.path_string(), verdict_name(b.verdict), b.probability, count, freq});
    }
    for (const auto& [path, count] : sample.histogram) {
        if (seen.count(path)) continue;
        const double freq = static_cast<double>(count) / static_cast<double>(sample.trials);
        tv += freq;
        rows.push_back({{"path", path}, {"verdict", "unknown"}, {"probability", 0.0}, {"count", count}, {"frequency", freq}});
        r.table.rows.push_back({path, "unknown", 0.0, count, freq});
    }
    r.json["analytic"] = {{"success_probability", trace.total_success_probability}, {"dropped_mass", trace.dropped_mass}};
    r.json["sampled"] = yield_to_json(yield_from_counts(sample.success_count, sample.trials, cfg.seed));
    r.json["total_variation"] = tv / 2.0;
    r.json["histogram"] = rows;
    return r;
}

Report run_generate(const RunConfig& cfg) {
    const PureState s = generate_state(cfg.kind, cfg.parties, cfg.dims, cfg.seed);
    Report r{state_to_json(s), {{"index", "re", "im"}, {}}};
    for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) {
        const auto& amp = r.json["amplitudes"][static_cast<std::size_t>(i)];
        r.table.rows.push_back({i, amp[0], amp[1]});
    }
    return r;
}

} // namespace

Command parse_command(const std::string& name) {
    static const std::pair<const char*, Command> names[] = {
        {"gamble", Command::Gamble},       {"some-epr", Command::SomeEpr},       {"pair-epr", Command::PairEpr},
        {"cat2epr", Command::CatToEpr},    {"epr2cat", Command::EprToCat},       {"synthesize", Command::Synthesize},
        {"loccq-rewrite", Command::LoccqRewrite}, {"audit", Command::Audit},    {"sample", Command::Sample},
        {"generate", Command::Generate}};
    for (const auto& [n, c] : names)
        if (name == n) return c;
    throw Error(ErrorCode::InvalidArgument, "unknown command '" + name + "'");
}

const char* command_name(Command c) {
    switch (c) {
    case Command::Gamble: return "gamble";
    case Command::SomeEpr: return "some-epr";
    case Command::PairEpr: return "pair-epr";
    case Command::CatToEpr: return "cat2epr";
    case Command::EprToCat: return "epr2cat";
    case Command::Synthesize: return "synthesize";
    case Command::LoccqRewrite: return "loccq-rewrite";
    case Command::Audit: return "audit";
    case Command::Sample: return "sample";
    case Command::Generate: return "generate";
    }
    return "unknown";
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotEntangled:
    case ErrorCode::NotIrreducible:
    case ErrorCode::NotFactorizable:
    case ErrorCode::NotACatState:
    case ErrorCode::NoEprAvailable:
    case ErrorCode::UnsupportedDimension:
    case ErrorCode::InvalidSubset:
    case ErrorCode::BasisSearchExhausted:
        return 3;
    case ErrorCode::DimensionLimit:
    case ErrorCode::BranchExplosion:
    case ErrorCode::CopyBudgetExceeded:
        return 4;
    default:
        return 2;
    }
}

PureState generate_state(const std::string& kind, std::size_t parties, const std::vector<std::size_t>& dims, std::uint64_t seed) {
    const std::size_t m = parties ? parties : (kind == "epr" ? 2 : 3);
    if (m < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 parties");
    const bool qubits_only = kind == "ghz" || kind == "w" || kind == "epr";
    for (auto d : dims) {
        if (d < 2) throw Error(ErrorCode::InvalidArgument, "dims must be at least 2");
        if (qubits_only && d != 2) throw Error(ErrorCode::InvalidArgument, kind + " states are defined on qubits");
    }
    if (kind == "ghz") return make_ghz(m);
    if (kind == "w") return make_w(m);
    if (kind == "epr") {
        if (m != 2) throw Error(ErrorCode::InvalidArgument, "an EPR pair has 2 parties");
        return make_epr();
    }
    if (kind != "random-irreducible" && kind != "random-factorizable") throw Error(ErrorCode::InvalidArgument, "unknown kind '" + kind + "'");
    if (dims.size() > 1 && dims.size() != m) throw Error(ErrorCode::InvalidArgument, "--dims takes one value or one per party");
    std::vector<Party> list;
    const auto names = party_names(m);
    for (std::size_t i = 0; i < m; ++i) list.push_back({names[i], {dims.empty() ? std::size_t{2} : dims[dims.size() == 1 ? 0 : i]}});
    const RegisterLayout layout(std::move(list));
    return kind == "random-irreducible" ? random_irreducible(layout, seed) : random_factorizable(layout, seed);
}

std::string run(const RunConfig& config) {
    Report report;
    switch (config.command) {
    case Command::Gamble: report = run_gamble(config); break;
    case Command::SomeEpr: report = run_some_epr(config); break;
    case Command::PairEpr: report = run_pair_epr(config); break;
    case Command::CatToEpr: report = run_cat_to_epr(config); break;
    case Command::EprToCat: report = run_epr_to_cat(config); break;
    case Command::Synthesize: report = run_synthesize(config); break;
    case Command::LoccqRewrite: report = run_rewrite(config); break;
    case Command::Audit: report = run_audit(config); break;
    case Command::Sample: report = run_sample(config); break;
    case Command::Generate: report = run_generate(config); break;
    }
    std::string text = config.format == Format::Csv ? render_csv(report.table) : report.json.dump(2) + "\n";
    if (!config.output_path.empty()) {
        std::ofstream out(config.output_path, std::ios::binary);
        if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + config.output_path + "'");
        out << text;
    }
    return text;
}

} // namespace locclab
