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

#include "locclab/locc.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <memory>
#include <random>

namespace locclab {

const char* verdict_name(Verdict v) { return v == Verdict::Success ? "success" : "failure"; }

// ---------------------------------------------------------------------------
// Program

LoccProgram::LoccProgram(std::vector<ProgramNode> nodes) : nodes_(std::move(nodes)) {
    for (const auto& node : nodes_) {
        validate_instrument(node.instrument);
        for (const auto& e : node.instrument.elements)
            if (!node.branches.count(e.label))
                throw Error(ErrorCode::InvalidProgram, "node '" + node.id + "' does not map outcome '" + e.label + "'");
        for (const auto& [label, next] : node.branches) {
            const bool known = std::any_of(node.instrument.elements.begin(), node.instrument.elements.end(),
                                           [&](const KrausElement& e) { return e.label == label; });
            if (!known) throw Error(ErrorCode::InvalidProgram, "node '" + node.id + "' maps unknown outcome '" + label + "'");
            if (const auto* ref = std::get_if<NodeRef>(&next); ref && ref->index >= nodes_.size())
                throw Error(ErrorCode::InvalidProgram, "node '" + node.id + "' points past the last node");
        }
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    std::vector<int> color(nodes_.size(), 0);
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
        color[i] = 1;
        for (const auto& [label, next] : nodes_[i].branches) {
            const auto* ref = std::get_if<NodeRef>(&next);
            if (!ref) continue;
            if (color[ref->index] == 1) throw Error(ErrorCode::InvalidProgram, "program contains a cycle through '" + nodes_[i].id + "'");
            if (color[ref->index] == 0) visit(ref->index);
        }
        color[i] = 2;
    };
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (color[i] == 0) visit(i);
}

std::size_t LoccProgram::max_party() const {
    std::size_t m = 0;
    for (const auto& n : nodes_) m = std::max(m, n.instrument.party.value);
    return m;
}

Plan make_step(LocalInstrument inst, const Plan& then, const std::vector<std::string>& fail) {
    auto node = std::make_shared<PlanNode>();
    for (const auto& e : inst.elements) {
        const bool failing = std::find(fail.begin(), fail.end(), e.label) != fail.end();
        node->next.emplace_back(e.label, failing ? Plan{Verdict::Failure} : then);
    }
    node->instrument = std::move(inst);
    return node;
}

LoccProgram flatten(const Plan& plan) {
    std::vector<ProgramNode> nodes;
    std::function<Next(const Plan&)> emit = [&](const Plan& p) -> Next {
        if (const auto* v = std::get_if<Verdict>(&p)) return Halt{*v};
        const auto& pn = *std::get<std::shared_ptr<PlanNode>>(p);
        const std::size_t index = nodes.size();
        nodes.push_back(ProgramNode{"n" + std::to_string(index + 1), pn.instrument, {}});
        for (const auto& [label, sub] : pn.next) {
            Next n = emit(sub);
            nodes[index].branches.emplace(label, n);
        }
        return NodeRef{index};
    };
    emit(plan);
    return LoccProgram(std::move(nodes));
}

// ---------------------------------------------------------------------------
// Execution

std::string Branch::path_string() const {
    if (path.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) out += (i ? "/" : "") + path[i];
    return out;
}

std::vector<const Branch*> ProtocolTrace::success_branches() const {
    std::vector<const Branch*> out;
    for (const auto& b : branches)
        if (b.verdict == Verdict::Success) out.push_back(&b);
    return out;
}

namespace {

struct SampleNode {
    bool expanded = false;
    LocalResult result;
    std::vector<std::unique_ptr<SampleNode>> children;
    std::string path;
    std::size_t hits = 0;
};

void collect_hits(const SampleNode& n, std::map<std::string, std::size_t>& histogram) {
    if (n.hits) histogram[n.path.empty() ? "-" : n.path] += n.hits;
    for (const auto& c : n.children)
        if (c) collect_hits(*c, histogram);
}

// SplitMix64 finalizer over (seed, trial): one independent generator seed per trial.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t z = seed + (trial + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void check_parties(const LoccProgram& prog, const PureState& s) {
    if (!prog.empty() && prog.max_party() >= s.num_parties())
        throw Error(ErrorCode::LayoutMismatch, "program addresses party " + std::to_string(prog.max_party()) +
                                                   " but the state has " + std::to_string(s.num_parties()) + " parties");
}

std::size_t cbit_cost(const LocalInstrument& inst) { return inst.elements.size() > 1 ? 1 : 0; }

} // namespace

ProtocolTrace run_program(const LoccProgram& prog, const PureState& s, std::size_t branch_guard) {
    check_parties(prog, s);
    ProtocolTrace trace;
    std::vector<std::string> path;
    std::function<void(const Next&, const PureState&, double, std::size_t)> explore =
        [&](const Next& next, const PureState& state, double prob, std::size_t cbits) {
            if (const auto* halt = std::get_if<Halt>(&next)) {
                if (trace.branches.size() >= branch_guard)
                    throw Error(ErrorCode::BranchExplosion, "more than " + std::to_string(branch_guard) + " branches");
                trace.branches.push_back(Branch{path, prob, state, halt->verdict, cbits});
                if (halt->verdict == Verdict::Success) trace.total_success_probability += prob;
                trace.max_cbits = std::max(trace.max_cbits, cbits);
                return;
            }
            const auto& node = prog.nodes()[std::get<NodeRef>(next).index];
            const auto result = apply_local(state, node.instrument);
            trace.dropped_mass += prob * result.dropped_mass;
            const std::size_t cost = cbit_cost(node.instrument);
            for (const auto& outcome : result.outcomes) {
                path.push_back(outcome.label);
                explore(node.branches.at(outcome.label), outcome.state, prob * outcome.probability, cbits + cost);
                path.pop_back();
            }
        };
    explore(prog.entry(), s, 1.0, 0);
    return trace;
}

SampleResult sample_program(const LoccProgram& prog, const PureState& s, std::uint64_t seed, std::size_t trials) {
    check_parties(prog, s);
    SampleResult result{seed, trials, 0, {}};
    // Outcome distributions are cached per visited path. The state reached by a
    // path is fixed, so caching does not change the law of any trajectory.
    SampleNode root;
    std::size_t cached_amplitudes = 0;
    const std::size_t cache_limit = std::size_t{1} << 24;

    for (std::size_t t = 0; t < trials; ++t) {
        std::mt19937_64 gen(substream_seed(seed, t));
        Next next = prog.entry();
        SampleNode* cur = &root;
        std::string path;
        const PureState* state = &s;
        std::optional<PureState> owned;
        while (const auto* ref = std::get_if<NodeRef>(&next)) {
            const auto& node = prog.nodes()[ref->index];
            if (cur && !cur->expanded && cached_amplitudes < cache_limit) {
                cur->result = apply_local(*state, node.instrument);
                cur->children.resize(cur->result.outcomes.size());
                cur->expanded = true;
                cached_amplitudes += cur->result.outcomes.size() * state->dim();
            }
            LocalResult scratch;
            if (cur && !cur->expanded) {
                path = cur->path;
                cur = nullptr;
            }
            if (!cur) scratch = apply_local(*state, node.instrument);
            const LocalResult& res = cur ? cur->result : scratch;
            if (res.outcomes.empty()) throw Error(ErrorCode::InvalidProgram, "node '" + node.id + "' has no possible outcome");
            double total = 0.0;
            for (const auto& o : res.outcomes) total += o.probability;
            const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53 * total;
            std::size_t pick = res.outcomes.size() - 1;
            double cum = 0.0;
            for (std::size_t k = 0; k < res.outcomes.size(); ++k) {
                cum += res.outcomes[k].probability;
                if (u < cum) {
                    pick = k;
                    break;
                }
            }
            const std::string& label = res.outcomes[pick].label;
            next = node.branches.at(label);
            if (cur) {
                auto& child = cur->children[pick];
                if (!child) {
                    child = std::make_unique<SampleNode>();
                    child->path = cur->path.empty() ? label : cur->path + "/" + label;
                }
                state = &res.outcomes[pick].state;
                cur = child.get();
            } else {
                path += (path.empty() ? "" : "/") + label;
                owned = std::move(scratch.outcomes[pick].state);
                state = &*owned;
            }
        }
        if (std::get<Halt>(next).verdict == Verdict::Success) ++result.success_count;
        if (cur)
            ++cur->hits;
        else
            ++result.histogram[path.empty() ? "-" : path];
    }
    collect_hits(root, result.histogram);
    return result;
}

// ---------------------------------------------------------------------------
// Ledger

PartyPair party_pair(const std::string& a, const std::string& b) { return a < b ? PartyPair{a, b} : PartyPair{b, a}; }

void ResourceLedger::charge_epr(const std::string& a, const std::string& b, std::uint64_t n) { epr_consumed[party_pair(a, b)] += n; }

void ResourceLedger::credit_epr(const std::string& a, const std::string& b, std::uint64_t n) { epr_produced[party_pair(a, b)] += n; }

std::uint64_t ResourceLedger::total_epr_consumed() const {
    std::uint64_t n = 0;
    for (const auto& [k, v] : epr_consumed) n += v;
    return n;
}

std::uint64_t ResourceLedger::total_epr_produced() const {
    std::uint64_t n = 0;
    for (const auto& [k, v] : epr_produced) n += v;
    return n;
}

double ResourceLedger::yield_per_copy() const {
    if (copies_consumed == 0) return 0.0;
    return static_cast<double>(target_copies) * success_probability / static_cast<double>(copies_consumed);
}

ResourceLedger& ResourceLedger::operator+=(const ResourceLedger& other) {
    copies_consumed += other.copies_consumed;
    for (const auto& [k, v] : other.epr_consumed) epr_consumed[k] += v;
    for (const auto& [k, v] : other.epr_produced) epr_produced[k] += v;
    cats_consumed += other.cats_consumed;
    cats_produced += other.cats_produced;
    cbits_sent += other.cbits_sent;
    return *this;
}

std::uint64_t teleport_cost(std::size_t local_dim) {
    std::uint64_t k = 0;
    while ((std::size_t{1} << k) < local_dim) ++k;
    return k;
}

PureState merge_parties(const PureState& s, PartyId a, PartyId b, ResourceLedger& ledger) {
    const auto& layout = s.layout();
    layout.check(a);
    layout.check(b);
    if (a == b) throw Error(ErrorCode::InvalidSubset, "cannot merge a party with itself");
    const Party& pa = layout.party(a);
    const Party& pb = layout.party(b);
    const std::size_t host = std::min(a.value, b.value);
    std::vector<Party> parties;
    std::vector<std::size_t> order;
    for (std::size_t p = 0; p < layout.num_parties(); ++p) {
        if (p == a.value || p == b.value) {
            if (p != host) continue;
            Party fused{pa.name + "+" + pb.name, pa.dims};
            fused.dims.insert(fused.dims.end(), pb.dims.begin(), pb.dims.end());
            parties.push_back(std::move(fused));
            for (auto id : {a, b}) {
                auto subs = layout.subsystems_of(id);
                order.insert(order.end(), subs.begin(), subs.end());
            }
            continue;
        }
        parties.push_back(layout.parties()[p]);
        auto subs = layout.subsystems_of(PartyId{p});
        order.insert(order.end(), subs.begin(), subs.end());
    }
    const std::uint64_t cost = teleport_cost(pb.local_dim());
    ledger.charge_epr(pa.name, pb.name, cost);
    ledger.cbits_sent += 2 * cost;
    return permute_subsystems(s, order, RegisterLayout(std::move(parties)));
}

} // namespace locclab
