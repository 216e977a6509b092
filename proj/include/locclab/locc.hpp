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
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "locclab/qstate.hpp"

namespace locclab {

inline constexpr std::size_t kDefaultBranchGuard = std::size_t{1} << 16;

enum class Verdict { Success, Failure };
const char* verdict_name(Verdict v);

struct Halt {
    Verdict verdict = Verdict::Failure;
};
struct NodeRef {
    std::size_t index = 0;
};
using Next = std::variant<NodeRef, Halt>;

struct ProgramNode {
    std::string id;
    LocalInstrument instrument;
    /// outcome label -> successor
    std::map<std::string, Next> branches;
};

/// Classically controlled tree of local instruments. Execution starts at node 0;
/// an empty program halts immediately with success.
class LoccProgram {
public:
    LoccProgram() = default;
    /// Validates every instrument, the branch maps and acyclicity.
    explicit LoccProgram(std::vector<ProgramNode> nodes);

    const std::vector<ProgramNode>& nodes() const { return nodes_; }
    bool empty() const { return nodes_.empty(); }
    std::size_t size() const { return nodes_.size(); }
    Next entry() const { return nodes_.empty() ? Next{Halt{Verdict::Success}} : Next{NodeRef{0}}; }
    std::size_t max_party() const;

private:
    std::vector<ProgramNode> nodes_;
};

/// Incremental tree construction used by the protocol builders. A plan is either
/// a verdict or a node whose outcomes lead to sub-plans.
struct PlanNode;
using Plan = std::variant<std::shared_ptr<PlanNode>, Verdict>;
struct PlanNode {
    LocalInstrument instrument;
    std::vector<std::pair<std::string, Plan>> next;
};

/// Convenience: a node whose outcomes all lead to `then` except those listed in `fail`.
Plan make_step(LocalInstrument inst, const Plan& then, const std::vector<std::string>& fail = {});
/// Flattens a plan into a program (pre-order numbering, ids "n1", "n2", ...).
LoccProgram flatten(const Plan& plan);

struct Branch {
    std::vector<std::string> path;
    double probability = 0.0;
    PureState state;
    Verdict verdict = Verdict::Failure;
    /// Classical symbols broadcast along the path.
    std::size_t cbits = 0;

    std::string path_string() const;
};

struct ProtocolTrace {
    std::vector<Branch> branches;
    double total_success_probability = 0.0;
    /// Mass of branches dropped as impossible (each below kDropTol).
    double dropped_mass = 0.0;
    std::size_t max_cbits = 0;

    std::vector<const Branch*> success_branches() const;
};

/// Exact enumeration of every branch.
ProtocolTrace run_program(const LoccProgram& prog, const PureState& s, std::size_t branch_guard = kDefaultBranchGuard);

struct SampleResult {
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::size_t success_count = 0;
    /// path string -> count
    std::map<std::string, std::size_t> histogram;
};

/// Independent trajectories; trial t draws from a generator seeded with (seed, t),
/// so the histogram does not depend on execution order.
SampleResult sample_program(const LoccProgram& prog, const PureState& s, std::uint64_t seed, std::size_t trials);

using PartyPair = std::pair<std::string, std::string>;
/// Pair key with names sorted.
PartyPair party_pair(const std::string& a, const std::string& b);

/// Finite accounting of consumed resources.
struct ResourceLedger {
    std::uint64_t copies_consumed = 0;
    std::map<PartyPair, std::uint64_t> epr_consumed;
    std::map<PartyPair, std::uint64_t> epr_produced;
    std::uint64_t cats_consumed = 0;
    std::uint64_t cats_produced = 0;
    std::uint64_t cbits_sent = 0;
    /// Target copies delivered on success.
    std::uint64_t target_copies = 0;
    double success_probability = 0.0;

    void charge_epr(const std::string& a, const std::string& b, std::uint64_t n = 1);
    void credit_epr(const std::string& a, const std::string& b, std::uint64_t n = 1);
    std::uint64_t total_epr_consumed() const;
    std::uint64_t total_epr_produced() const;
    /// target_copies * success_probability / copies_consumed (0 when nothing consumed).
    double yield_per_copy() const;

    /// Adds counts; success probability and target copies are left untouched.
    ResourceLedger& operator+=(const ResourceLedger& other);
};

/// Qubit-teleportations needed to move a d-dimensional share: ceil(log2 d).
std::uint64_t teleport_cost(std::size_t local_dim);

/// Fuses b into a (dims of a, then b) at the position of the lower index; the
/// fused party is named "a+b". Charges the EPR pairs and cbits that the
/// teleportation of b's share to a would use.
PureState merge_parties(const PureState& s, PartyId a, PartyId b, ResourceLedger& ledger);

} // namespace locclab
