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

// Acceptance suite: one PASS/FAIL line per criterion. Expected values are
// recomputed here from closed forms and from the Jacobi oracle in support/.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "locclab/analysis.hpp"
#include "locclab/protocols.hpp"
#include "locclab/serialize.hpp"
#include "support.hpp"

using namespace locclab;
using namespace locclab::testing;

namespace {

constexpr std::uint64_t kSeed = 20261016;

PureState two_term(double x, double y) {
    Vector v = Vector::Zero(4);
    v[0] = x;
    v[3] = y;
    return PureState(RegisterLayout::qubits({"A", "B"}), v);
}

template <class F>
bool raises(ErrorCode code, F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

Json gambling_formula() {
    const auto s = two_term(0.6, 0.8);
    const double oracle = 2 * 0.36 * 0.64 / (0.36 + 0.64);
    const auto out = bipartite_gamble(s, singleton_cut(PartyId{0}, 2));
    const auto y = monte_carlo_yield(out.program, s, 100000, kSeed);
    const bool pass = std::abs(oracle - 0.4608) <= 1e-12 && std::abs(out.success_probability - 0.4608) <= 1e-9 &&
                      std::abs(y.point - 0.4608) <= 0.005;
    return {{"pass", pass}, {"enumerated", out.success_probability}, {"monte_carlo", y.point}, {"trials", y.trials}};
}

Json success_state_quality() {
    std::mt19937_64 rng(kSeed + 2);
    double worst_fidelity = 1.0, worst_formula_gap = 0.0;
    for (int t = 0; t < 500; ++t) {
        const auto layout = random_layout(2, 4, rng);
        const auto s = RandomSource(rng()).state(layout);
        const Cut cut = singleton_cut(PartyId{0}, 2);
        const auto out = bipartite_gamble(s, cut);
        worst_fidelity = std::min(worst_fidelity, out.min_success_fidelity);
        worst_formula_gap = std::max(worst_formula_gap,
                                     std::abs(out.success_probability - oracle_gamble_probability(oracle_schmidt_coefficients(s, cut))));
    }
    return {{"pass", worst_fidelity >= 1 - 1e-9 && worst_formula_gap <= 1e-9}, {"states", 500},
            {"min_fidelity", worst_fidelity}, {"max_formula_gap", worst_formula_gap}};
}

Json some_pair_suite() {
    std::mt19937_64 rng(kSeed + 3);
    double min_p = 1.0, min_f = 1.0;
    for (int t = 0; t < 200; ++t) {
        PureState s = make_ghz(3);
        if (t < 100)
            s = RandomSource(rng()).state(random_layout(3, 3, rng));
        else if (t < 160)
            s = RandomSource(rng()).state(uniform_layout(4, 2));
        else
            s = random_factorizable(random_layout(3 + t % 2, 3, rng), rng());
        const auto out = gamble_some_epr(s);
        min_p = std::min(min_p, out.success_probability);
        min_f = std::min(min_f, out.min_success_fidelity);
    }
    const auto ghz = gamble_some_epr(make_ghz(3));
    const bool pass = min_p > 0 && min_f >= 1 - 1e-6 && ghz.success_probability >= 0.5 - 1e-12 && ghz.ledger.copies_consumed == 1;
    return {{"pass", pass}, {"states", 200}, {"min_probability", min_p}, {"min_fidelity", min_f},
            {"ghz3_probability", ghz.success_probability}, {"ghz3_copies", ghz.ledger.copies_consumed}};
}

Json distillation_check(const PureState& s, std::uint64_t max_copies, bool& ok) {
    double min_p = 1.0, min_f = 1.0;
    std::uint64_t max_used = 0;
    const std::size_t m = s.num_parties();
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            const auto out = epr_between_pair(s, PartyId{a}, PartyId{b}, default_copy_budget(s));
            min_p = std::min(min_p, out.success_probability);
            min_f = std::min(min_f, out.min_success_fidelity);
            max_used = std::max<std::uint64_t>(max_used, out.ledger.copies_consumed);
        }
    ok = min_p > 0 && min_f >= 1 - 1e-6 && max_used <= max_copies;
    return {{"min_probability", min_p}, {"min_fidelity", min_f}, {"max_copies", max_used}};
}

Json designated_pair_suite() {
    double min_p = 1.0, min_f = 1.0;
    std::uint64_t max_used = 0;
    bool all = true;
    for (std::uint64_t i = 0; i < 50; ++i) {
        bool ok = false;
        const auto r = distillation_check(random_irreducible(3, 2, kSeed + 100 + i), 2, ok);
        all = all && ok;
        min_p = std::min(min_p, r["min_probability"].get<double>());
        min_f = std::min(min_f, r["min_fidelity"].get<double>());
        max_used = std::max(max_used, r["max_copies"].get<std::uint64_t>());
    }
    bool rejected = true;
    for (std::uint64_t i = 0; i < 10; ++i) {
        const auto s = random_factorizable(3, 2, kSeed + 200 + i);
        rejected = rejected && raises(ErrorCode::NotIrreducible, [&] { epr_between_pair(s, PartyId{0}, PartyId{1}, 10); });
    }
    return {{"pass", all && rejected}, {"states", 50}, {"pairs", 150}, {"min_probability", min_p}, {"min_fidelity", min_f},
            {"max_copies", max_used}, {"reducible_rejected", rejected}};
}

Json factorizability_suite() {
    std::mt19937_64 rng(kSeed + 5);
    double worst_branch = 0.0, worst_monotone = 0.0;
    bool pass = true;
    for (int t = 0; t < 100; ++t) {
        const auto layout = random_layout(3, 3, rng);
        const auto s = random_factorizable(layout, rng());
        const auto prog = random_program(layout, rng, {5, 2, 2, 0.0});
        for (const auto& cut : enumerate_cuts(layout)) {
            if (!is_factorizable(s, cut)) continue;
            const auto f = factorizability_audit(prog, s, cut);
            worst_branch = std::max(worst_branch, f.max_violation);
            pass = pass && f.pass;
        }
        const auto m = monotone_audit(prog, s);
        worst_monotone = std::max(worst_monotone, m.max_violation);
        pass = pass && m.pass;
    }
    return {{"pass", pass}, {"states", 100}, {"max_branch_entropy", worst_branch}, {"max_monotone_violation", worst_monotone}};
}

Json cat_conversions() {
    const auto g3 = cat_to_epr(make_ghz(3), PartyId{0}, PartyId{1});
    bool pass = g3.trace.branches.size() == 2 && g3.min_success_fidelity >= 1 - 1e-9;
    for (const auto& b : g3.trace.branches) pass = pass && std::abs(b.probability - 0.5) <= 1e-9;
    const auto g4 = cat_to_epr(make_ghz(4), PartyId{0}, PartyId{1});
    pass = pass && g4.trace.branches.size() == 4 && g4.min_success_fidelity >= 1 - 1e-9;
    for (const auto& b : g4.trace.branches) pass = pass && std::abs(b.probability - 0.25) <= 1e-9;
    EprSupply supply;
    supply.add("A", "B");
    supply.add("A", "C");
    const auto cat = eprs_to_cat("A", {"B", "C"}, supply);
    const double f = overlap(cat.state.amplitudes(), make_ghz(3).amplitudes());
    pass = pass && cat.ledger.total_epr_consumed() == 2 && f >= 1 - 1e-9;
    return {{"pass", pass}, {"ghz3_branches", g3.trace.branches.size()}, {"ghz3_fidelity", g3.min_success_fidelity},
            {"ghz4_branches", g4.trace.branches.size()}, {"epr_consumed", cat.ledger.total_epr_consumed()}, {"cat_fidelity", f}};
}

// A protocol that consumes one cat: C measures its cat qubit in the +/- basis,
// A undoes the phase, then A and B act on their shares with random instruments.
LoccProgram cat_consuming_program(const RegisterLayout& layout, std::mt19937_64& rng) {
    const Eigen::Index d = 4;
    Matrix plus(2, 2), minus(2, 2), z = Matrix::Identity(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    minus << 0.5, -0.5, -0.5, 0.5;
    z(1, 1) = -1;
    const Party& pc = layout.party(PartyId{2});
    const Party& pa = layout.party(PartyId{0});
    const std::size_t cat_slot[] = {0};
    std::vector<ProgramNode> nodes;
    nodes.push_back({"measure", {PartyId{2}, {{"+", embed_in_party(pc, plus, cat_slot)}, {"-", embed_in_party(pc, minus, cat_slot)}}}, {}});
    nodes.push_back({"fix", unitary_instrument(PartyId{0}, "z", embed_in_party(pa, z, cat_slot)), {}});
    nodes.push_back({"a", random_instrument(PartyId{0}, static_cast<std::size_t>(d), 2, rng, "a"), {}});
    nodes.push_back({"b", random_instrument(PartyId{1}, static_cast<std::size_t>(d), 2, rng, "b"), {}});
    nodes[0].branches["+"] = NodeRef{2};
    nodes[0].branches["-"] = NodeRef{1};
    nodes[1].branches["z"] = NodeRef{2};
    nodes[2].branches["a0"] = NodeRef{3};
    nodes[2].branches["a1"] = Halt{Verdict::Failure};
    nodes[3].branches["b0"] = Halt{Verdict::Success};
    nodes[3].branches["b1"] = Halt{Verdict::Failure};
    return LoccProgram(std::move(nodes));
}

Json rewrite_soundness() {
    std::mt19937_64 rng(kSeed + 7);
    double min_f = 1.0, max_gap = 0.0;
    std::uint64_t max_delta = 0;
    bool pass = true;
    for (std::uint64_t i = 0; i < 5; ++i) {
        const auto src = random_irreducible(3, 2, kSeed + 300 + i);
        const auto layout = cat_assisted_input(src, 1, 1).layout();
        for (const auto& prog : {cat_consuming_program(layout, rng), random_program(layout, rng, {3, 2, 2, 0.3})}) {
            const auto r = loccq_to_locc_rewrite(prog, 1, src, 1);
            min_f = std::min(min_f, r.min_success_fidelity);
            max_gap = std::max(max_gap, r.max_probability_gap);
            max_delta = std::max(max_delta, r.extra_copies);
            pass = pass && !r.cat_source && r.extra_copies > 0 && r.min_cat_fidelity >= 1 - 1e-9;
        }
    }
    pass = pass && min_f >= 1 - 1e-9;
    Json ghz_delta = Json::array();
    for (std::size_t k = 1; k <= 2; ++k) {
        const auto ghz = make_ghz(3);
        const auto prog = random_program(cat_assisted_input(ghz, k, 1).layout(), rng, {2, 2, 2, 0.3});
        const auto r = loccq_to_locc_rewrite(prog, k, ghz, 1);
        ghz_delta.push_back(r.extra_copies);
        pass = pass && r.cat_source && r.extra_copies == k && r.min_success_fidelity >= 1 - 1e-9;
    }
    return {{"pass", pass}, {"sources", 5}, {"min_success_fidelity", min_f}, {"max_probability_gap", max_gap},
            {"max_extra_copies", max_delta}, {"ghz_extra_copies_for_k_1_2", ghz_delta}};
}

Json decomposition_oracle() {
    std::mt19937_64 rng(kSeed + 8);
    double worst_sq = 0.0, worst_root = 0.0, worst_fid = 1.0;
    for (int t = 0; t < 1000; ++t) {
        const auto layout = t % 4 == 3 ? RegisterLayout(std::vector<Party>{{"A", {2, 2}}, {"B", {2, 4}}}) : random_layout(2, 8, rng);
        const auto s = RandomSource(rng()).state(layout);
        const Cut cut = singleton_cut(PartyId{0}, 2);
        const auto d = schmidt(s, cut);
        const auto oracle = oracle_schmidt_coefficients(s, cut);
        for (std::size_t i = 0; i < oracle.size(); ++i) {
            const double mine = i < d.rank() ? d.coefficients[i] : 0.0;
            worst_root = std::max(worst_root, std::abs(mine - oracle[i]));
            worst_sq = std::max(worst_sq, std::abs(mine * mine - oracle[i] * oracle[i]));
        }
        worst_fid = std::min(worst_fid, overlap(reconstruct(d, layout).amplitudes(), s.amplitudes()));
    }
    return {{"pass", worst_root <= 1e-9 && worst_sq <= 1e-9 && worst_fid >= 1 - 1e-9}, {"states", 1000},
            {"max_coefficient_error", worst_root}, {"max_squared_coefficient_error", worst_sq},
            {"min_reconstruction_fidelity", worst_fid}};
}

Json classifier_consistency() {
    const auto corpus = labeled_corpus(kSeed + 9);
    std::size_t mismatches = 0, distilled = 0, irreducible = 0;
    bool distill_ok = true;
    for (const auto& e : corpus) {
        const bool got = is_irreducible(e.state);
        if (got != e.irreducible) ++mismatches;
        if (!got) continue;
        ++irreducible;
        bool ok = false;
        distillation_check(e.state, 2, ok);
        distill_ok = distill_ok && ok;
        if (ok) ++distilled;
    }
    return {{"pass", mismatches == 0 && distill_ok && irreducible == 50}, {"corpus", corpus.size()}, {"mismatches", mismatches},
            {"irreducible", irreducible}, {"distilled", distilled}};
}

struct Criterion {
    int id;
    const char* title;
    std::function<Json()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "gambling formula 0.6|00>+0.8|11>", gambling_formula},
        {2, "gamble success branches are EPR pairs", success_state_quality},
        {3, "some-pair EPR from one copy", some_pair_suite},
        {4, "EPR for every designated pair", designated_pair_suite},
        {5, "factorizability preserved, entropy monotone", factorizability_suite},
        {6, "cat <-> EPR conversions", cat_conversions},
        {7, "cat-assisted protocol rewrite", rewrite_soundness},
        {8, "Schmidt decomposition vs eigen oracle", decomposition_oracle},
        {9, "irreducibility classifier on labeled corpus", classifier_consistency},
    };
    bool all = true;
    std::vector<std::string> first_reports;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Json report;
        try {
            report = c.run();
        } catch (const std::exception& e) {
            report = {{"pass", false}, {"error", e.what()}};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool pass = report["pass"].get<bool>();
        all = all && pass;
        first_reports.push_back(report.dump());
        std::printf("criterion %2d %-46s %s  %s  (%.1fs)\n", c.id, c.title, pass ? "PASS" : "FAIL", report.dump().c_str(), secs);
        std::fflush(stdout);
    }

    const auto start = std::chrono::steady_clock::now();
    std::size_t identical = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Json again;
        try {
            again = criteria[i].run();
        } catch (const std::exception& e) {
            again = {{"pass", false}, {"error", e.what()}};
        }
        if (again.dump() == first_reports[i]) ++identical;
    }
    const bool deterministic = identical == criteria.size();
    all = all && deterministic;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion 10 %-46s %s  {\"identical_reports\":%zu,\"criteria\":%zu}  (%.1fs)\n", "same seed gives byte-identical reports",
                deterministic ? "PASS" : "FAIL", identical, criteria.size(), secs);
    std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
    return all ? 0 : 1;
}
