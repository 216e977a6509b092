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

#include "locclab/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "locclab/states.hpp"

namespace locclab {

namespace {

constexpr double kCatTol = 1e-9;

Matrix projector(const std::vector<Vector>& vecs, Eigen::Index d) {
    Matrix p = Matrix::Zero(d, d);
    for (const auto& v : vecs) p += v * v.adjoint();
    return p;
}

// Unitary U with U * vecs[k] = |k>, completed over the computational basis.
Matrix rotation_to_computational(const std::vector<Vector>& vecs, Eigen::Index d) {
    std::vector<Vector> cols = vecs;
    for (Eigen::Index j = 0; j < d && static_cast<Eigen::Index>(cols.size()) < d; ++j) {
        Vector e = Vector::Zero(d);
        e[j] = 1.0;
        for (const auto& c : cols) e -= c * c.dot(e);
        const double n = e.norm();
        if (n > 1e-6) cols.push_back(e / n);
    }
    Matrix basis(d, d);
    for (Eigen::Index k = 0; k < d; ++k) basis.col(k) = cols[static_cast<std::size_t>(k)];
    return basis.adjoint();
}

Matrix fourier_basis(Eigen::Index d) {
    Matrix f(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index k = 0; k < d; ++k)
            f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                                 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(d));
    return f;
}

Matrix pauli_x() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = m(1, 0) = 1.0;
    return m;
}

Matrix pauli_z() {
    Matrix m = Matrix::Identity(2, 2);
    m(1, 1) = -1.0;
    return m;
}

Matrix hadamard() {
    Matrix m(2, 2);
    m << 1.0, 1.0, 1.0, -1.0;
    return m / std::sqrt(2.0);
}

// Joint pure state of two parties whose share factors off everyone else,
// on the layout restricted to the pair (ascending order).
PureState pair_state(const PureState& s, PartyId p1, PartyId p2) {
    const auto& layout = s.layout();
    if (layout.num_parties() == 2) return s;
    const PartyId ids[] = {p1, p2};
    const Cut cut(ids, layout.num_parties());
    const auto d = schmidt(s, cut);
    if (d.rank() != 1 || d.coefficients.front() < 1.0 - kFactorizableTol)
        throw Error(ErrorCode::InvalidSubset, "parties " + layout.party(p1).name + "," + layout.party(p2).name +
                                                  " are entangled with the rest of the register");
    const bool left = cut.contains(p1);
    return PureState::normalized(left ? d.left_layout : d.right_layout, left ? d.left_basis.front() : d.right_basis.front());
}

struct GamblePlan {
    Plan plan;
    GambleAnalysis analysis;
};

GamblePlan gamble_plan(const PureState& s, PartyId p1, PartyId p2) {
    const auto& layout = s.layout();
    layout.check(p1);
    layout.check(p2);
    if (p1 == p2) throw Error(ErrorCode::InvalidSubset, "gamble needs two distinct parties");
    const PureState pair = pair_state(s, p1, p2);
    const auto d = schmidt(pair, Cut::from_mask(1, 2));
    if (d.rank() < 2)
        throw Error(ErrorCode::NotEntangled, "Schmidt rank 1 between " + layout.party(p1).name + " and " + layout.party(p2).name);
    const GambleAnalysis g = gamble_success_probability(d.coefficients);

    const bool p1_low = p1 < p2;
    const std::vector<Vector> u = {(p1_low ? d.left_basis : d.right_basis)[0], (p1_low ? d.left_basis : d.right_basis)[1]};
    const std::vector<Vector> v = {(p1_low ? d.right_basis : d.left_basis)[0], (p1_low ? d.right_basis : d.left_basis)[1]};
    const auto d1 = static_cast<Eigen::Index>(layout.local_dim(p1));
    const auto d2 = static_cast<Eigen::Index>(layout.local_dim(p2));

    const Matrix proj1 = projector(u, d1);
    const Matrix proj2 = projector(v, d2);
    const Matrix id1 = Matrix::Identity(d1, d1);
    const Matrix id2 = Matrix::Identity(d2, d2);
    const Matrix u0 = u[0] * u[0].adjoint();
    const Matrix u1 = u[1] * u[1].adjoint();
    const Matrix a1 = g.d * u0 + g.c * u1;
    const Matrix a2 = std::sqrt(std::max(0.0, 1.0 - g.d * g.d)) * u0 + std::sqrt(std::max(0.0, 1.0 - g.c * g.c)) * u1 + (id1 - proj1);

    Plan plan = make_step(unitary_instrument(p2, "rot", rotation_to_computational(v, d2)), Verdict::Success);
    plan = make_step(unitary_instrument(p1, "rot", rotation_to_computational(u, d1)), plan);
    plan = make_step(LocalInstrument{p1, {{"a1", a1}, {"a2", a2}}}, plan, {"a2"});
    plan = make_step(LocalInstrument{p2, {{"keep", proj2}, {"discard", id2 - proj2}}}, plan, {"discard"});
    plan = make_step(LocalInstrument{p1, {{"keep", proj1}, {"discard", id1 - proj1}}}, plan, {"discard"});
    return {plan, g};
}

void finish_outcome(DistillationOutcome& out, const PureState& s) {
    out.final_input = s;
    out.trace = run_program(out.program, s);
    out.success_probability = out.trace.total_success_probability;
    const auto wins = out.trace.success_branches();
    out.min_success_fidelity = wins.empty() ? 0.0 : 1.0;
    for (const auto* b : wins) out.min_success_fidelity = std::min(out.min_success_fidelity, epr_fidelity(b->state, out.first, out.second));
    out.success_state = wins.empty() ? s : wins.front()->state;
    out.first_name = s.layout().party(out.first).name;
    out.second_name = s.layout().party(out.second).name;
    out.ledger.copies_consumed = 1;
    out.ledger.target_copies = 1;
    out.ledger.success_probability = out.success_probability;
    out.ledger.cbits_sent += out.trace.max_cbits;
    out.ledger.credit_epr(out.first_name, out.second_name);
}

bool is_entangled_somewhere(const PureState& s, const std::vector<PartyId>& active) {
    for (auto id : active)
        if (!is_factorizable(s, singleton_cut(id, s.num_parties()))) return true;
    return false;
}

struct SomeEprPlan {
    Plan plan = Verdict::Failure;
    std::optional<std::pair<PartyId, PartyId>> pair;
    double probability = 0.0;
};

// Parties outside `active` are in a pure product state with everyone else.
SomeEprPlan plan_some_epr(const PureState& s, std::vector<PartyId> active) {
    const std::size_t m = s.num_parties();
    if (active.size() < 2 || !is_entangled_somewhere(s, active)) return {};
    if (active.size() == 2) {
        auto g = gamble_plan(s, active[0], active[1]);
        return {g.plan, std::make_pair(active[0], active[1]), g.analysis.total_success};
    }
    std::size_t first = 0;
    while (is_factorizable(s, singleton_cut(active[first], m))) ++first;
    const PartyId helper = active[first];

    bool exhausted = false;
    for (std::size_t step = 1; step < active.size(); ++step) {
        const PartyId b = active[(first + step) % active.size()];
        const EoaCase eoa = eoa_zero_check(s, helper, b);
        if (eoa == EoaCase::ZeroCaseCPure) {
            auto g = gamble_plan(s, std::min(helper, b), std::max(helper, b));
            return {g.plan, std::make_pair(std::min(helper, b), std::max(helper, b)), g.analysis.total_success};
        }
        if (eoa == EoaCase::ZeroCaseBPure) {
            std::vector<PartyId> rest;
            for (auto id : active)
                if (id != b) rest.push_back(id);
            return plan_some_epr(s, rest);
        }
        AssistResult assist;
        try {
            assist = assisted_entangle(s, helper, b);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BasisSearchExhausted) throw;
            exhausted = true;
            continue;
        }
        std::vector<PartyId> rest;
        for (auto id : active)
            if (id != helper) rest.push_back(id);
        const auto result = apply_local(s, *assist.instrument);
        std::vector<std::pair<std::string, SomeEprPlan>> subs;
        std::map<std::pair<std::size_t, std::size_t>, double> weight;
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (const auto& o : result.outcomes) {
            auto sub = plan_some_epr(o.state, rest);
            if (sub.pair) {
                const auto key = std::make_pair(sub.pair->first.value, sub.pair->second.value);
                weight[key] += o.probability * sub.probability;
                if (!best || weight[key] > weight[*best]) best = key;
            }
            subs.emplace_back(o.label, std::move(sub));
        }
        if (!best) continue;
        auto node = std::make_shared<PlanNode>();
        node->instrument = *assist.instrument;
        for (const auto& e : node->instrument.elements) {
            Plan next = Verdict::Failure;
            for (const auto& [label, sub] : subs)
                if (label == e.label && sub.pair && sub.pair->first.value == best->first && sub.pair->second.value == best->second)
                    next = sub.plan;
            node->next.emplace_back(e.label, next);
        }
        return {node, std::make_pair(PartyId{best->first}, PartyId{best->second}), weight[*best]};
    }
    if (exhausted) throw Error(ErrorCode::BasisSearchExhausted, "no helper basis produced an entangled residual");
    return {};
}

} // namespace

// ---------------------------------------------------------------------------

GambleAnalysis gamble_success_probability(std::span<const double> coeffs) {
    std::vector<double> a;
    for (double x : coeffs)
        if (x >= kSchmidtCutoff) a.push_back(x);
    if (a.size() < 2) throw Error(ErrorCode::NotEntangled, "fewer than two nonzero Schmidt coefficients");
    std::partial_sort(a.begin(), a.begin() + 2, a.end(), std::greater<>());
    GambleAnalysis g;
    g.a1 = a[0];
    g.a2 = a[1];
    g.projection_probability = g.a1 * g.a1 + g.a2 * g.a2;
    const double root = std::sqrt(g.projection_probability);
    g.c = g.a1 / root;
    g.d = g.a2 / root;
    g.filter_probability = 2.0 * g.c * g.c * g.d * g.d;
    g.total_success = 2.0 * g.a1 * g.a1 * g.a2 * g.a2 / g.projection_probability;
    return g;
}

double epr_fidelity(const PureState& s, PartyId p1, PartyId p2) {
    const auto& layout = s.layout();
    layout.check(p1);
    layout.check(p2);
    if (p1 == p2) throw Error(ErrorCode::InvalidSubset, "EPR fidelity needs two distinct parties");
    const PartyId lo = std::min(p1, p2), hi = std::max(p1, p2);
    const auto d2 = static_cast<Eigen::Index>(layout.local_dim(hi));
    Vector phi = Vector::Zero(static_cast<Eigen::Index>(layout.local_dim(lo)) * d2);
    phi[0] = phi[d2 + 1] = 1.0 / std::sqrt(2.0);
    if (layout.num_parties() == 2) return std::clamp(std::norm(phi.dot(s.amplitudes())), 0.0, 1.0);
    const PartyId ids[] = {lo, hi};
    const auto rho = partial_trace(s, ids);
    return std::clamp(phi.dot(rho.matrix() * phi).real(), 0.0, 1.0);
}

DistillationOutcome gamble_pair(const PureState& s, PartyId p1, PartyId p2) {
    auto g = gamble_plan(s, p1, p2);
    DistillationOutcome out{p1, p2, "", "", 0.0, s, 0.0, flatten(g.plan), {}, {}, {}};
    finish_outcome(out, s);
    out.stages.push_back({"bipartite gamble", out.first_name, out.second_name, out.success_probability, 1});
    return out;
}

DistillationOutcome bipartite_gamble(const PureState& s, const Cut& cut) {
    if (cut.num_parties() != s.num_parties()) throw Error(ErrorCode::LayoutMismatch, "cut does not match the state");
    auto left = cut.side();
    auto right = cut.other_side();
    if (left.size() == 1 && right.size() == 1) return gamble_pair(s, left[0], right[0]);

    // Fuse each side into one composite lab, highest index first so lower ids stay valid.
    ResourceLedger merges;
    PureState merged = s;
    std::vector<std::string> left_names, right_names;
    for (auto id : left) left_names.push_back(s.layout().party(id).name);
    for (auto id : right) right_names.push_back(s.layout().party(id).name);
    auto fuse = [&](const std::vector<std::string>& names) {
        std::string host = names.front();
        for (std::size_t i = 1; i < names.size(); ++i) {
            const auto& l = merged.layout();
            merged = merge_parties(merged, l.require(host), l.require(names[i]), merges);
            host += "+" + names[i];
        }
        return host;
    };
    const std::string a = fuse(left_names);
    const std::string b = fuse(right_names);
    auto out = gamble_pair(merged, merged.layout().require(a), merged.layout().require(b));
    out.ledger += merges;
    return out;
}

AssistResult assisted_entangle(const PureState& s, PartyId helper, PartyId b, std::uint64_t seed) {
    const auto& layout = s.layout();
    if (layout.num_parties() < 3) throw Error(ErrorCode::InvalidSubset, "assistance needs at least 3 parties");
    AssistResult out;
    out.eoa = eoa_zero_check(s, helper, b);
    if (out.eoa != EoaCase::Nonzero) return out;

    const auto d = static_cast<Eigen::Index>(layout.local_dim(helper));
    const std::size_t b_in_residual = b.value - (helper < b ? 1 : 0);
    const std::size_t residual_parties = layout.num_parties() - 1;
    const auto helper_subs = layout.subsystems_of(helper);
    const auto dims = layout.subsystem_dims();
    const std::vector<std::size_t> zeros(helper_subs.size(), 0);
    RandomSource rng(seed);

    for (std::size_t attempt = 0; attempt < 2 + kRandomBasisAttempts; ++attempt) {
        Matrix basis;
        std::string prefix;
        if (attempt == 0) {
            basis = Matrix::Identity(d, d);
            prefix = "Z";
        } else if (attempt == 1) {
            basis = fourier_basis(d);
            prefix = "F";
        } else {
            basis = rng.unitary(static_cast<std::size_t>(d));
            prefix = "R" + std::to_string(attempt - 2) + "_";
        }
        LocalInstrument inst = basis_measurement(helper, basis, prefix);
        const auto result = apply_local(s, inst);
        AssistResult candidate{out.eoa, inst, prefix == "Z" ? "computational" : prefix == "F" ? "fourier" : "random", 0.0, {}, {}};
        for (const auto& o : result.outcomes) {
            // contract the helper with its post-measurement vector
            const auto k = static_cast<Eigen::Index>(std::stoul(o.label.substr(prefix.size())));
            Matrix contract = Matrix::Zero(d, d);
            contract.row(0) = basis.col(k).adjoint();
            const Vector w = apply_on_subsystems(dims, o.state.amplitudes(), contract, helper_subs);
            PureState residual = discard_subsystems(PureState::normalized(layout, w), helper_subs, zeros);
            const double h = entropy_across_cut(residual, singleton_cut(PartyId{b_in_residual}, residual_parties));
            if (h > kAssistEntropyThreshold) candidate.entangled_probability += o.probability;
            candidate.residual_entropies.push_back(h);
            candidate.residuals.push_back({o.label, o.probability, std::move(residual)});
        }
        if (candidate.entangled_probability > 0.0) return candidate;
    }
    throw Error(ErrorCode::BasisSearchExhausted, "no helper basis among " + std::to_string(2 + kRandomBasisAttempts) +
                                                     " candidates left an entangled residual");
}

DistillationOutcome gamble_some_epr(const PureState& s) {
    if (s.num_parties() < 2) throw Error(ErrorCode::InvalidSubset, "need at least 2 parties");
    std::vector<PartyId> all;
    for (std::size_t p = 0; p < s.num_parties(); ++p) all.push_back(PartyId{p});
    if (!is_entangled_somewhere(s, all)) throw Error(ErrorCode::NotEntangled, "every party is in a pure product state");
    auto plan = plan_some_epr(s, all);
    if (!plan.pair || !(plan.probability > 0.0)) throw Error(ErrorCode::NotEntangled, "no pair could be distilled");
    DistillationOutcome out{plan.pair->first, plan.pair->second, "", "", 0.0, s, 0.0, flatten(plan.plan), {}, {}, {}};
    finish_outcome(out, s);
    out.stages.push_back({"single-copy gamble for some pair", out.first_name, out.second_name, out.success_probability, 1});
    return out;
}

std::uint64_t default_copy_budget(const PureState& source) {
    const std::uint64_t m = source.num_parties();
    return std::max<std::uint64_t>(1, (m - 1) * std::max<std::uint64_t>(1, teleport_cost(source.layout().total_dim())));
}

DistillationOutcome epr_between_pair(const PureState& source, PartyId p1, PartyId p2, std::uint64_t max_copies) {
    const auto& layout = source.layout();
    layout.check(p1);
    layout.check(p2);
    if (p1 == p2) throw Error(ErrorCode::InvalidSubset, "target parties must differ");
    if (!is_irreducible(source)) throw Error(ErrorCode::NotIrreducible, "source factorizes across some cut");

    std::string t1 = layout.party(p1).name, t2 = layout.party(p2).name;
    std::vector<std::pair<std::string, std::string>> merges;
    ResourceLedger ledger;
    std::vector<StageRecord> stages;
    double overall = 1.0;
    std::uint64_t copies = 0;

    for (std::size_t level = 0;; ++level) {
        PureState copy = source;
        ResourceLedger scratch;
        for (const auto& [host, guest] : merges)
            copy = merge_parties(copy, copy.layout().require(host), copy.layout().require(guest), scratch);
        if (copies + 1 > max_copies)
            throw Error(ErrorCode::CopyBudgetExceeded, "needs more than " + std::to_string(max_copies) + " source copies");
        auto out = gamble_some_epr(copy);
        copies += 1;
        ledger.cbits_sent += out.ledger.cbits_sent;
        const std::string x = out.first_name, y = out.second_name;
        const bool done = (x == t1 && y == t2) || (x == t2 && y == t1);
        if (done) {
            overall *= out.success_probability;
            stages.push_back({"level " + std::to_string(level) + ": target pair", x, y, out.success_probability, 1});
            ledger.credit_epr(x, y);
            out.ledger = ledger;
            out.ledger.copies_consumed = copies;
            out.ledger.target_copies = 1;
            out.ledger.success_probability = overall;
            out.success_probability = overall;
            out.stages = std::move(stages);
            return out;
        }
        const bool x_target = x == t1 || x == t2;
        const bool y_target = y == t1 || y == t2;
        const auto& cl = copy.layout();
        bool x_hosts = x_target || (!y_target && cl.local_dim(cl.require(x)) >= cl.local_dim(cl.require(y)));
        const std::string host = x_hosts ? x : y;
        const std::string guest = x_hosts ? y : x;
        // every qubit of the guest's share needs its own EPR pair, hence its own copy
        const std::uint64_t needed = std::max<std::uint64_t>(1, teleport_cost(cl.local_dim(cl.require(guest))));
        if (copies + needed - 1 > max_copies)
            throw Error(ErrorCode::CopyBudgetExceeded, "needs more than " + std::to_string(max_copies) + " source copies");
        copies += needed - 1;
        ledger.cbits_sent += (needed - 1) * out.ledger.cbits_sent;
        overall *= std::pow(out.success_probability, static_cast<double>(needed));
        stages.push_back({"level " + std::to_string(level) + ": merge " + guest + " into " + host, host, guest,
                          out.success_probability, needed});
        ledger.credit_epr(host, guest, needed);
        PureState charged = merge_parties(copy, cl.require(host), cl.require(guest), ledger);
        (void)charged;
        const std::string fused = host + "+" + guest;
        if (t1 == host || t1 == guest) t1 = fused;
        if (t2 == host || t2 == guest) t2 = fused;
        merges.emplace_back(host, guest);
    }
}

// ---------------------------------------------------------------------------
// Teleportation and cat states

void EprSupply::add(const std::string& a, const std::string& b, std::uint64_t n) { pairs_[party_pair(a, b)] += n; }

std::uint64_t EprSupply::available(const std::string& a, const std::string& b) const {
    auto it = pairs_.find(party_pair(a, b));
    return it == pairs_.end() ? 0 : it->second;
}

void EprSupply::take(const std::string& a, const std::string& b) {
    auto it = pairs_.find(party_pair(a, b));
    if (it == pairs_.end() || it->second == 0) throw Error(ErrorCode::NoEprAvailable, "no EPR pair between " + a + " and " + b);
    --it->second;
}

TeleportResult teleport_to(const PureState& s, PartyId sender, std::size_t slot, const std::string& receiver,
                           EprSupply& supply) {
    const auto& layout = s.layout();
    const Party& from = layout.party(sender);
    if (slot >= from.dims.size()) throw Error(ErrorCode::InvalidArgument, "qudit slot out of range");
    if (from.dims[slot] != 2) throw Error(ErrorCode::UnsupportedDimension, "only qubits can be teleported");
    if (from.name == receiver) throw Error(ErrorCode::InvalidSubset, "sender and receiver coincide");
    supply.take(from.name, receiver);

    const PureState expected = relocate_subsystem(s, sender, slot, receiver);
    const PureState work = coalesce_parties(tensor(s, make_epr(from.name, receiver)));
    const auto& wl = work.layout();
    const PartyId ps = wl.require(from.name);
    const PartyId pr = wl.require(receiver);
    const std::size_t epr_slot = wl.party(ps).dims.size() - 1;
    const std::size_t recv_slot = wl.party(pr).dims.size() - 1;

    Matrix cnot = Matrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
    Matrix h_id = Matrix::Zero(4, 4);
    h_id.topLeftCorner(2, 2) = h_id.topRightCorner(2, 2) = h_id.bottomLeftCorner(2, 2) = Matrix::Identity(2, 2) / std::sqrt(2.0);
    h_id.bottomRightCorner(2, 2) = -Matrix::Identity(2, 2) / std::sqrt(2.0);
    const std::size_t bell_slots[] = {slot, epr_slot};
    const std::size_t recv_slots[] = {recv_slot};

    auto node = std::make_shared<PlanNode>();
    node->instrument.party = ps;
    for (int m1 = 0; m1 < 2; ++m1)
        for (int m2 = 0; m2 < 2; ++m2) {
            Matrix proj = Matrix::Zero(4, 4);
            proj(2 * m1 + m2, 2 * m1 + m2) = 1.0;
            const std::string label = std::to_string(m1) + std::to_string(m2);
            node->instrument.elements.push_back({label, embed_in_party(wl.party(ps), proj * h_id * cnot, bell_slots)});
            Matrix fix = Matrix::Identity(2, 2);
            if (m2) fix = pauli_x() * fix;
            if (m1) fix = pauli_z() * fix;
            node->next.emplace_back(label, make_step(unitary_instrument(pr, "fix", embed_in_party(wl.party(pr), fix, recv_slots)),
                                                     Verdict::Success));
        }
    const auto trace = run_program(flatten(Plan{node}), work);

    TeleportResult out{expected, {}, {}, {}};
    const std::size_t base = wl.first_subsystem(ps);
    const std::size_t subs[] = {base + slot, base + epr_slot};
    bool first = true;
    for (const auto& br : trace.branches) {
        const std::size_t digits[] = {static_cast<std::size_t>(br.path[0][0] - '0'), static_cast<std::size_t>(br.path[0][1] - '0')};
        PureState after = discard_subsystems(br.state, subs, digits);
        if (!(after.layout() == expected.layout())) throw Error(ErrorCode::LayoutMismatch, "teleported layout differs from relocation");
        out.branch_probabilities.push_back(br.probability);
        out.branch_fidelities.push_back(fidelity(after, expected));
        if (first) out.state = std::move(after);
        first = false;
    }
    out.ledger.charge_epr(from.name, receiver);
    out.ledger.cbits_sent = 2;
    return out;
}

TeleportResult teleport(const PureState& s, PartyId sender, PartyId receiver, std::size_t slot, EprSupply& supply) {
    return teleport_to(s, sender, slot, s.layout().party(receiver).name, supply);
}

DistillationOutcome cat_to_epr(const PureState& cat, PartyId p1, PartyId p2) {
    const auto& layout = cat.layout();
    layout.check(p1);
    layout.check(p2);
    if (p1 == p2) throw Error(ErrorCode::InvalidSubset, "target parties must differ");
    std::vector<std::string> names;
    for (const auto& p : layout.parties()) {
        if (p.local_dim() != 2) throw Error(ErrorCode::NotACatState, "party '" + p.name + "' is not a single qubit");
        names.push_back(p.name);
    }
    if (fidelity(cat, make_ghz(names)) < 1.0 - kCatTol) throw Error(ErrorCode::NotACatState, "state is not the cat state");

    std::vector<PartyId> others;
    for (std::size_t p = 0; p < layout.num_parties(); ++p)
        if (PartyId{p} != p1 && PartyId{p} != p2) others.push_back(PartyId{p});
    const Matrix h = hadamard();
    std::function<Plan(std::size_t, int)> build = [&](std::size_t i, int parity) -> Plan {
        if (i == others.size())
            return parity ? make_step(unitary_instrument(p1, "Z", pauli_z()), Verdict::Success) : Plan{Verdict::Success};
        auto node = std::make_shared<PlanNode>();
        node->instrument = LocalInstrument{others[i], {{"+", h.col(0) * h.col(0).adjoint()}, {"-", h.col(1) * h.col(1).adjoint()}}};
        node->next.emplace_back("+", build(i + 1, parity));
        node->next.emplace_back("-", build(i + 1, parity ^ 1));
        return node;
    };
    DistillationOutcome out{p1, p2, "", "", 0.0, cat, 0.0, flatten(build(0, 0)), {}, {}, {}};
    finish_outcome(out, cat);
    out.ledger.cats_consumed = 1;
    out.stages.push_back({"cat to EPR", out.first_name, out.second_name, out.success_probability, 1});
    return out;
}

SynthesisResult eprs_to_cat(const std::string& hub, const std::vector<std::string>& spokes, EprSupply& supply) {
    if (spokes.empty()) throw Error(ErrorCode::InvalidArgument, "cat synthesis needs at least one spoke");
    std::vector<std::string> names{hub};
    for (const auto& s : spokes) {
        if (std::find(names.begin(), names.end(), s) != names.end()) throw Error(ErrorCode::InvalidArgument, "duplicate party '" + s + "'");
        names.push_back(s);
    }
    for (const auto& s : spokes)
        if (supply.available(hub, s) == 0) throw Error(ErrorCode::NoEprAvailable, "no EPR pair between " + hub + " and " + s);

    const PureState ideal = make_ghz(names);
    PureState state(RegisterLayout({Party{hub, std::vector<std::size_t>(names.size(), 2)}}), ideal.amplitudes());
    SynthesisResult out{state, 0.0, {}};
    for (const auto& spoke : spokes) {
        auto t = teleport_to(state, state.layout().require(hub), 1, spoke, supply);
        out.ledger += t.ledger;
        state = std::move(t.state);
    }
    out.fidelity = fidelity(state, ideal);
    out.state = std::move(state);
    out.ledger.cats_produced = 1;
    return out;
}

SynthesisResult synthesize_from_eprs(const PureState& target, const std::string& site, EprSupply& supply) {
    const auto& layout = target.layout();
    const std::size_t m = layout.num_parties();

    // Parties holding a pure factor prepare it themselves.
    std::vector<bool> local(m, false);
    std::vector<PureState> factors;
    for (std::size_t p = 0; p < m; ++p) {
        const auto& party = layout.parties()[p];
        if (party.name == site) continue;
        if (m == 1) {
            local[p] = true;
            continue;
        }
        const auto d = schmidt(target, singleton_cut(PartyId{p}, m));
        if (d.coefficients.front() >= 1.0 - kFactorizableTol) local[p] = true;
    }
    std::vector<PartyId> remote_ids, local_ids;
    for (std::size_t p = 0; p < m; ++p) (local[p] ? local_ids : remote_ids).push_back(PartyId{p});

    std::optional<PureState> remaining;
    if (local_ids.empty()) {
        remaining = target;
    } else {
        for (auto id : local_ids) {
            if (m == 1) {
                factors.push_back(target);
                break;
            }
            const auto d = schmidt(target, singleton_cut(id, m));
            const bool left = singleton_cut(id, m).contains(id);
            factors.push_back(PureState::normalized(left ? d.left_layout : d.right_layout, left ? d.left_basis.front() : d.right_basis.front()));
        }
        if (!remote_ids.empty()) {
            const Cut cut(local_ids, m);
            const auto d = schmidt(target, cut);
            const bool local_left = cut.contains(local_ids.front());
            remaining = PureState::normalized(local_left ? d.right_layout : d.left_layout,
                                              local_left ? d.right_basis.front() : d.left_basis.front());
        }
    }

    SynthesisResult out{target, 0.0, {}};
    std::optional<PureState> built;
    if (remaining) {
        const auto& rl = remaining->layout();
        std::size_t site_qudits = 0;
        bool site_seen = false;
        std::vector<std::size_t> all_dims;
        for (const auto& p : rl.parties()) {
            all_dims.insert(all_dims.end(), p.dims.begin(), p.dims.end());
            if (p.name == site) continue;
            for (auto dim : p.dims)
                if (dim != 2) throw Error(ErrorCode::UnsupportedDimension, "party '" + p.name + "' holds a non-qubit share");
            if (supply.available(site, p.name) < p.dims.size())
                throw Error(ErrorCode::NoEprAvailable, "need " + std::to_string(p.dims.size()) + " EPR pairs between " + site + " and " + p.name);
        }
        PureState state(RegisterLayout({Party{site, all_dims}}), remaining->amplitudes());
        for (const auto& p : rl.parties()) {
            if (p.name == site) {
                site_qudits = p.dims.size();
                site_seen = true;
                continue;
            }
            const std::size_t slot = site_seen ? site_qudits : 0;
            for (std::size_t q = 0; q < p.dims.size(); ++q) {
                auto t = teleport_to(state, state.layout().require(site), slot, p.name, supply);
                out.ledger += t.ledger;
                state = std::move(t.state);
            }
        }
        built = std::move(state);
    }
    for (auto& f : factors) built = built ? tensor(*built, f) : f;

    std::vector<PartyId> order;
    for (const auto& p : layout.parties()) order.push_back(built->layout().require(p.name));
    out.state = reorder_parties(*built, order);
    if (!(out.state.layout() == layout)) throw Error(ErrorCode::LayoutMismatch, "synthesized layout differs from the target");
    out.fidelity = fidelity(out.state, target);
    return out;
}

// ---------------------------------------------------------------------------
// Cat-assisted protocol rewrite

PureState cat_assisted_input(const PureState& source, std::size_t cats, std::size_t copies) {
    if (copies == 0) throw Error(ErrorCode::InvalidArgument, "need at least one source copy");
    std::vector<std::string> names;
    for (const auto& p : source.layout().parties()) names.push_back(p.name);
    std::optional<PureState> out;
    if (cats > 0) {
        const PureState cat = make_ghz(names);
        for (std::size_t i = 0; i < cats; ++i) out = out ? tensor(*out, cat) : cat;
    }
    for (std::size_t i = 0; i < copies; ++i) out = out ? tensor(*out, source) : source;
    return coalesce_parties(*out);
}

RewriteReport loccq_to_locc_rewrite(const LoccProgram& prog, std::size_t cat_budget, const PureState& source,
                                    std::size_t copies) {
    if (!is_irreducible(source)) throw Error(ErrorCode::NotIrreducible, "source factorizes across some cut");
    RewriteReport r;
    r.cat_budget = cat_budget;
    r.copies = copies;
    r.program = prog;
    const auto& layout = source.layout();
    const std::size_t m = layout.num_parties();
    std::vector<std::string> names;
    for (const auto& p : layout.parties()) names.push_back(p.name);

    const PureState input = cat_assisted_input(source, cat_budget, copies);
    r.original = run_program(prog, input);
    r.original_success = r.original.total_success_probability;
    r.original_ledger.copies_consumed = copies;
    r.original_ledger.cats_consumed = cat_budget;
    r.original_ledger.cbits_sent = r.original.max_cbits;
    r.original_ledger.success_probability = r.original_success;

    bool qubits = true;
    for (const auto& p : layout.parties()) qubits = qubits && p.local_dim() == 2;
    r.cat_source = qubits && fidelity(source, make_ghz(names)) >= 1.0 - kCatTol;

    std::vector<PureState> cats;
    if (cat_budget > 0 && r.cat_source) {
        r.extra_copies = cat_budget;
        r.min_cat_fidelity = fidelity(source, make_ghz(names));
        for (std::size_t i = 0; i < cat_budget; ++i) {
            cats.push_back(source);
            r.stages.push_back({"source copy used as cat", names.front(), names.back(), 1.0, 1});
        }
    } else if (cat_budget > 0) {
        std::uint64_t copies_per_cat = 0;
        double prob_per_cat = 1.0;
        ResourceLedger per_cat;
        for (std::size_t j = 1; j < m; ++j) {
            auto d = epr_between_pair(source, PartyId{0}, PartyId{j}, default_copy_budget(source));
            copies_per_cat += d.ledger.copies_consumed;
            prob_per_cat *= d.success_probability;
            per_cat += d.ledger;
            r.stages.push_back({"distill EPR " + names[0] + "-" + names[j], names[0], names[j], d.success_probability,
                                d.ledger.copies_consumed});
        }
        r.extra_copies = copies_per_cat * cat_budget;
        r.distillation_probability = std::pow(prob_per_cat, static_cast<double>(cat_budget));
        EprSupply supply;
        const std::vector<std::string> spokes(names.begin() + 1, names.end());
        for (const auto& s : spokes) supply.add(names.front(), s, cat_budget);
        for (std::size_t i = 0; i < cat_budget; ++i) {
            auto syn = eprs_to_cat(names.front(), spokes, supply);
            r.min_cat_fidelity = std::min(r.min_cat_fidelity, syn.fidelity);
            r.rewritten_ledger += per_cat;
            r.rewritten_ledger += syn.ledger;
            cats.push_back(std::move(syn.state));
        }
    }

    std::optional<PureState> assembled;
    for (const auto& c : cats) assembled = assembled ? tensor(*assembled, c) : c;
    for (std::size_t i = 0; i < copies; ++i) assembled = assembled ? tensor(*assembled, source) : source;
    const PureState rewritten_input = coalesce_parties(*assembled);
    if (!(rewritten_input.layout() == input.layout())) throw Error(ErrorCode::LayoutMismatch, "rewritten input layout differs");

    r.rewritten = run_program(prog, rewritten_input);
    r.rewritten_success = r.rewritten.total_success_probability;
    r.overall_success = r.distillation_probability * r.rewritten_success;

    std::map<std::string, const Branch*> original_by_path;
    for (const auto& b : r.original.branches) original_by_path[b.path_string()] = &b;
    r.min_success_fidelity = 1.0;
    for (const auto& b : r.rewritten.branches) {
        auto it = original_by_path.find(b.path_string());
        if (it == original_by_path.end()) {
            if (b.verdict == Verdict::Success) r.min_success_fidelity = 0.0;
            r.max_probability_gap = std::max(r.max_probability_gap, b.probability);
            continue;
        }
        r.max_probability_gap = std::max(r.max_probability_gap, std::abs(b.probability - it->second->probability));
        if (b.verdict == Verdict::Success) r.min_success_fidelity = std::min(r.min_success_fidelity, fidelity(b.state, it->second->state));
    }

    r.rewritten_ledger.copies_consumed = copies + r.extra_copies;
    r.rewritten_ledger.cats_produced = r.cat_source ? 0 : cat_budget;
    r.rewritten_ledger.cbits_sent += r.rewritten.max_cbits;
    r.rewritten_ledger.success_probability = r.overall_success;
    return r;
}

} // namespace locclab
