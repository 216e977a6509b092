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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locclab/decomp.hpp"
#include "locclab/locc.hpp"

namespace locclab {

/// Two-term entanglement gamble: project onto the two largest Schmidt vectors,
/// then equalize them with a Procrustean filter on one side.
struct GambleAnalysis {
    double a1 = 0.0;
    double a2 = 0.0;
    /// a1^2 + a2^2
    double projection_probability = 0.0;
    /// Normalized post-projection coefficients, c = a1/sqrt(p), d = a2/sqrt(p).
    double c = 0.0;
    double d = 0.0;
    /// Filter success 2 c^2 d^2.
    double filter_probability = 0.0;
    /// 2 a1^2 a2^2 / (a1^2 + a2^2)
    double total_success = 0.0;
};

/// `coeffs` need not be sorted; the two largest are used. Throws NotEntangled
/// with fewer than two nonzero coefficients.
GambleAnalysis gamble_success_probability(std::span<const double> coeffs);

/// One distillation stage of a multi-copy protocol.
struct StageRecord {
    std::string description;
    std::string first;
    std::string second;
    double probability = 0.0;
    std::uint64_t copies = 0;
};

struct DistillationOutcome {
    PartyId first;
    PartyId second;
    /// Party names in the final layout (composites read "A+B").
    std::string first_name;
    std::string second_name;
    double success_probability = 0.0;
    /// State of the first success branch.
    PureState success_state;
    /// Minimum EPR fidelity over success branches.
    double min_success_fidelity = 0.0;
    LoccProgram program;
    ProtocolTrace trace;
    ResourceLedger ledger;
    std::vector<StageRecord> stages;
    /// State the final-stage program runs on.
    std::optional<PureState> final_input = std::nullopt;
};

/// <Phi|rho_{p1 p2}|Phi> with Phi = (|0,0> + |1,1>)/sqrt(2) on the two parties'
/// local computational bases.
double epr_fidelity(const PureState& s, PartyId p1, PartyId p2);

/// Gamble across `cut`. Sides with several parties are merged first (ledger charged).
DistillationOutcome bipartite_gamble(const PureState& s, const Cut& cut);

/// Gamble between two parties whose joint state factors off the other parties.
/// Success branches hold the EPR pair on the parties' computational |0>,|1>.
DistillationOutcome gamble_pair(const PureState& s, PartyId p1, PartyId p2);

struct AssistResult {
    EoaCase eoa = EoaCase::Nonzero;
    /// Set only for the Nonzero case.
    std::optional<LocalInstrument> instrument;
    std::string basis;
    /// Probability of outcomes whose residual is entangled across {b | rest}.
    double entangled_probability = 0.0;
    /// Post-measurement states with the helper removed from the layout.
    std::vector<Outcome> residuals;
    std::vector<double> residual_entropies;
};

inline constexpr std::size_t kRandomBasisAttempts = 32;
inline constexpr double kAssistEntropyThreshold = 1e-6;

/// The helper measures in the computational basis, then the Fourier basis,
/// then up to 32 Haar-random bases seeded from `seed`, stopping at the first
/// basis with an outcome whose residual is entangled across {b | rest}.
AssistResult assisted_entangle(const PureState& s, PartyId helper, PartyId b, std::uint64_t seed = 0);

/// Single-copy procedure producing an EPR pair between some two parties.
DistillationOutcome gamble_some_epr(const PureState& s);

/// Multi-copy procedure for a designated pair: gamble for some pair on a fresh
/// copy and fuse that pair into a composite party until the pair is the target.
DistillationOutcome epr_between_pair(const PureState& source, PartyId p1, PartyId p2, std::uint64_t max_copies);

/// Default copy budget: (m - 1) levels times the teleportations a merge needs.
std::uint64_t default_copy_budget(const PureState& source);

/// EPR pairs available between named parties.
class EprSupply {
public:
    void add(const std::string& a, const std::string& b, std::uint64_t n = 1);
    std::uint64_t available(const std::string& a, const std::string& b) const;
    /// Throws NoEprAvailable.
    void take(const std::string& a, const std::string& b);

private:
    std::map<PartyPair, std::uint64_t> pairs_;
};

struct TeleportResult {
    PureState state;
    std::vector<double> branch_probabilities;
    /// Fidelity of each branch to the input with the qubit relocated.
    std::vector<double> branch_fidelities;
    ResourceLedger ledger;
};

/// Teleports qubit `slot` of `sender` to `receiver` through one EPR pair from
/// `supply`. The qubit lands at the end of the receiver's qudit list.
TeleportResult teleport(const PureState& s, PartyId sender, PartyId receiver, std::size_t slot, EprSupply& supply);
/// Same, with the receiver named; it is appended to the layout when absent.
TeleportResult teleport_to(const PureState& s, PartyId sender, std::size_t slot, const std::string& receiver,
                           EprSupply& supply);

/// Parties other than p1, p2 measure in |+>,|->; p1 applies Z on odd parity of "-".
DistillationOutcome cat_to_epr(const PureState& cat, PartyId p1, PartyId p2);

struct SynthesisResult {
    PureState state;
    /// Fidelity to the requested target.
    double fidelity = 0.0;
    ResourceLedger ledger;
};

/// The hub prepares an m-party cat locally and teleports one share to each spoke.
SynthesisResult eprs_to_cat(const std::string& hub, const std::vector<std::string>& spokes, EprSupply& supply);

/// `site` prepares the target and teleports every share that is entangled with
/// the rest; parties holding a pure factor prepare it locally instead.
SynthesisResult synthesize_from_eprs(const PureState& target, const std::string& site, EprSupply& supply);

/// State a cat-assisted protocol acts on: k cats followed by n source copies,
/// coalesced by party name.
PureState cat_assisted_input(const PureState& source, std::size_t cats, std::size_t copies);

struct RewriteReport {
    std::size_t cat_budget = 0;
    std::size_t copies = 0;
    /// Extra source copies spent manufacturing the cats.
    std::uint64_t extra_copies = 0;
    bool cat_source = false;
    /// One record per distilled hub-spoke EPR pair (per cat).
    std::vector<StageRecord> stages;
    double distillation_probability = 1.0;
    double min_cat_fidelity = 1.0;
    LoccProgram program;
    ProtocolTrace original;
    ProtocolTrace rewritten;
    double original_success = 0.0;
    /// Success of the final stage given that the cats were obtained.
    double rewritten_success = 0.0;
    double overall_success = 0.0;
    double min_success_fidelity = 1.0;
    double max_probability_gap = 0.0;
    ResourceLedger original_ledger;
    ResourceLedger rewritten_ledger;
};

/// Replaces the k cats consumed by `prog` with cats distilled from extra source
/// copies and compares the two runs branch by branch.
RewriteReport loccq_to_locc_rewrite(const LoccProgram& prog, std::size_t cat_budget, const PureState& source,
                                    std::size_t copies);

} // namespace locclab
