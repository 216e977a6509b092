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

#include "locclab/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace locclab {

namespace {

struct MonotoneWalker {
    const LoccProgram& prog;
    std::vector<Cut> cuts;
    std::vector<std::string> cut_names;
    std::size_t guard;
    std::size_t leaves = 0;
    AuditReport report;

    void visit(const Next& next, const PureState& s, double probability, const std::string& path) {
        if (std::holds_alternative<Halt>(next)) {
            if (++leaves > guard) throw Error(ErrorCode::BranchExplosion, "more than " + std::to_string(guard) + " branches");
            return;
        }
        const auto& node = prog.nodes()[std::get<NodeRef>(next).index];
        if (node.instrument.party.value >= s.num_parties())
            throw Error(ErrorCode::LayoutMismatch, "node '" + node.id + "' acts on a missing party");
        const auto result = apply_local(s, node.instrument);
        for (std::size_t c = 0; c < cuts.size(); ++c) {
            CutAuditRow row{node.id, path.empty() ? "-" : path, cut_names[c], probability, entropy_across_cut(s, cuts[c]), 0.0, 0.0};
            for (const auto& o : result.outcomes) row.post += o.probability * entropy_across_cut(o.state, cuts[c]);
            row.violation = std::max(0.0, row.post - row.pre);
            report.max_violation = std::max(report.max_violation, row.violation);
            if (row.violation > report.tolerance) report.violations.push_back(row);
            report.per_cut.push_back(std::move(row));
        }
        for (const auto& o : result.outcomes) {
            auto it = node.branches.find(o.label);
            const Next succ = it == node.branches.end() ? Next{Halt{}} : it->second;
            visit(succ, o.state, probability * o.probability, path.empty() ? o.label : path + "/" + o.label);
        }
    }
};

} // namespace

YieldEstimate yield_from_counts(std::size_t successes, std::size_t trials, std::uint64_t seed) {
    if (trials < kMinYieldTrials)
        throw Error(ErrorCode::InvalidArgument, "need at least " + std::to_string(kMinYieldTrials) + " trials, got " + std::to_string(trials));
    YieldEstimate y;
    y.trials = trials;
    y.successes = successes;
    y.seed = seed;
    y.point = static_cast<double>(successes) / static_cast<double>(trials);
    const double half = 1.96 * std::sqrt(y.point * (1.0 - y.point) / static_cast<double>(trials));
    y.ci_low = std::clamp(y.point - half, 0.0, 1.0);
    y.ci_high = std::clamp(y.point + half, 0.0, 1.0);
    return y;
}

YieldEstimate monte_carlo_yield(const LoccProgram& prog, const PureState& s, std::size_t trials, std::uint64_t seed) {
    if (trials < kMinYieldTrials)
        throw Error(ErrorCode::InvalidArgument, "need at least " + std::to_string(kMinYieldTrials) + " trials, got " + std::to_string(trials));
    const auto sample = sample_program(prog, s, seed, trials);
    return yield_from_counts(sample.success_count, trials, seed);
}

AuditReport monotone_audit(const LoccProgram& prog, const PureState& s, std::size_t branch_guard) {
    MonotoneWalker walker{prog, enumerate_cuts(s.layout()), {}, branch_guard, 0, {}};
    walker.report.kind = "monotone";
    for (const auto& c : walker.cuts) walker.cut_names.push_back(c.describe(s.layout()));
    walker.visit(prog.entry(), s, 1.0, "");
    walker.report.pass = walker.report.max_violation <= walker.report.tolerance;
    return walker.report;
}

AuditReport factorizability_audit(const LoccProgram& prog, const PureState& s, const Cut& cut) {
    if (cut.num_parties() != s.num_parties()) throw Error(ErrorCode::LayoutMismatch, "cut does not match the state");
    if (!is_factorizable(s, cut)) throw Error(ErrorCode::NotFactorizable, "state is entangled across " + cut.describe(s.layout()));
    AuditReport report;
    report.kind = "factorizability";
    const double pre = entropy_across_cut(s, cut);
    const std::string name = cut.describe(s.layout());
    const auto trace = run_program(prog, s);
    for (const auto& b : trace.branches) {
        const double h = entropy_across_cut(b.state, cut);
        CutAuditRow row{"", b.path_string(), name, b.probability, pre, h, h};
        report.max_violation = std::max(report.max_violation, h);
        if (h > report.tolerance) report.violations.push_back(row);
        report.per_cut.push_back(std::move(row));
    }
    report.pass = report.max_violation <= report.tolerance;
    return report;
}

} // namespace locclab
