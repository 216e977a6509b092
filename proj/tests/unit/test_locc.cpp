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

#include <cmath>

#include <gtest/gtest.h>

#include "locclab/protocols.hpp"
#include "support.hpp"

using namespace locclab;
using namespace locclab::testing;

namespace {

Matrix proj(Eigen::Index d, Eigen::Index k) {
    Matrix p = Matrix::Zero(d, d);
    p(k, k) = 1.0;
    return p;
}

LoccProgram fair_measurement() {
    ProgramNode n{"m", {PartyId{0}, {{"0", proj(2, 0)}, {"1", proj(2, 1)}}}, {}};
    n.branches["0"] = Halt{Verdict::Success};
    n.branches["1"] = Halt{Verdict::Failure};
    return LoccProgram({n});
}

PureState plus_state() { return PureState::normalized(RegisterLayout::qubits({"A"}), Vector::Ones(2)); }

struct Suite {
    std::vector<LoccProgram> programs;
    std::vector<PureState> states;
};

const Suite& program_suite() {
    static const Suite suite = [] {
        Suite s;
        std::mt19937_64 rng(500);
        for (int i = 0; i < 500; ++i) {
            const auto layout = random_layout(2 + i % 2, 3, rng);
            s.states.push_back(RandomSource(rng()).state(layout));
            s.programs.push_back(random_program(layout, rng));
        }
        return s;
    }();
    return suite;
}

} // namespace

TEST(Instrument, CompletenessChecks) {
    EXPECT_NO_THROW(validate_instrument({PartyId{0}, {{"0", proj(2, 0)}, {"1", proj(2, 1)}}}));
    const double c = 0.8, d = 0.6;
    Matrix a1 = Matrix::Zero(2, 2), a2 = Matrix::Zero(2, 2);
    a1(0, 0) = d;
    a1(1, 1) = c;
    a2(0, 0) = std::sqrt(1 - d * d);
    a2(1, 1) = std::sqrt(1 - c * c);
    EXPECT_NO_THROW(validate_instrument({PartyId{0}, {{"a1", a1}, {"a2", a2}}}));
    try {
        validate_instrument({PartyId{0}, {{"a1", a1}}});
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IncompleteInstrument);
    }
    EXPECT_THROW(validate_instrument({PartyId{0}, {}}), Error);
    EXPECT_THROW(validate_instrument({PartyId{0}, {{"x", proj(2, 0)}, {"x", proj(2, 1)}}}), Error);
}

TEST(Program, ValidatesStructure) {
    ProgramNode n{"m", {PartyId{0}, {{"0", proj(2, 0)}, {"1", proj(2, 1)}}}, {}};
    n.branches["0"] = Halt{};
    EXPECT_THROW(LoccProgram({n}), Error);  // unmapped "1"
    n.branches["1"] = NodeRef{0};
    EXPECT_THROW(LoccProgram({n}), Error);  // cycle
    n.branches["1"] = NodeRef{4};
    EXPECT_THROW(LoccProgram({n}), Error);  // dangling
    n.branches["1"] = Halt{};
    n.branches["2"] = Halt{};
    EXPECT_THROW(LoccProgram({n}), Error);  // unknown label
}

TEST(Run, EmptyProgramIsIdentity) {
    const auto s = make_ghz(3);
    const auto t = run_program(LoccProgram{}, s);
    ASSERT_EQ(t.branches.size(), 1u);
    EXPECT_DOUBLE_EQ(t.branches[0].probability, 1.0);
    EXPECT_EQ(t.branches[0].path_string(), "-");
    EXPECT_NEAR(fidelity(t.branches[0].state, s), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(t.total_success_probability, 1.0);
}

TEST(Run, FairMeasurement) {
    const auto t = run_program(fair_measurement(), plus_state());
    ASSERT_EQ(t.branches.size(), 2u);
    EXPECT_NEAR(t.branches[0].probability, 0.5, 1e-12);
    EXPECT_NEAR(t.total_success_probability, 0.5, 1e-12);
    EXPECT_EQ(t.max_cbits, 1u);
}

TEST(Run, ProbabilitiesSumToOneOnRandomSuite) {
    const auto& suite = program_suite();
    for (std::size_t i = 0; i < suite.programs.size(); ++i) {
        const auto t = run_program(suite.programs[i], suite.states[i]);
        double total = t.dropped_mass;
        for (const auto& b : t.branches) total += b.probability;
        EXPECT_NEAR(total, 1.0, 1e-9) << "program " << i;
    }
}

TEST(Run, BranchGuard) {
    std::mt19937_64 rng(1);
    const auto layout = uniform_layout(2, 2);
    const auto prog = random_program(layout, rng, {5, 3, 3, 0.0});
    try {
        run_program(prog, RandomSource(2).state(layout), 16);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BranchExplosion);
    }
}

TEST(Run, GambleProgramMatchesFormula) {
    Vector v = Vector::Zero(4);
    v[0] = 0.8;
    v[3] = 0.6;
    const PureState s(RegisterLayout::qubits({"A", "B"}), v);
    const auto out = gamble_pair(s, PartyId{0}, PartyId{1});
    EXPECT_NEAR(run_program(out.program, s).total_success_probability, oracle_gamble_probability({0.8, 0.6}), 1e-12);
}

TEST(Sample, FairCoinAndDeterminism) {
    const auto a = sample_program(fair_measurement(), plus_state(), 42, 100000);
    EXPECT_NEAR(static_cast<double>(a.success_count) / 1e5, 0.5, 0.01);
    const auto b = sample_program(fair_measurement(), plus_state(), 42, 100000);
    EXPECT_EQ(a.histogram, b.histogram);
    EXPECT_EQ(a.success_count, b.success_count);
    const auto c = sample_program(fair_measurement(), plus_state(), 43, 100000);
    EXPECT_NE(a.histogram, c.histogram);
}

TEST(Sample, DeterministicProgramHasOnePath) {
    const auto s = PureState::basis(RegisterLayout::qubits({"A"}), 1);
    const auto r = sample_program(fair_measurement(), s, 0, 1000);
    ASSERT_EQ(r.histogram.size(), 1u);
    EXPECT_EQ(r.histogram.begin()->first, "1");
}

TEST(Sample, GambleFrequency) {
    Vector v = Vector::Zero(4);
    v[0] = 0.8;
    v[3] = 0.6;
    const PureState s(RegisterLayout::qubits({"A", "B"}), v);
    const auto out = gamble_pair(s, PartyId{0}, PartyId{1});
    const auto r = sample_program(out.program, s, 7, 100000);
    EXPECT_NEAR(static_cast<double>(r.success_count) / 1e5, 0.4608, 0.005);
}

TEST(Sample, TotalVariationOnRandomSuite) {
    const auto& suite = program_suite();
    const std::size_t trials = 100000;
    const double bound = 4.0 / std::sqrt(static_cast<double>(trials));
    double worst = 0.0;
    for (std::size_t i = 0; i < suite.programs.size(); ++i) {
        const auto t = run_program(suite.programs[i], suite.states[i]);
        const auto r = sample_program(suite.programs[i], suite.states[i], i, trials);
        double tv = 0.0;
        std::size_t matched = 0;
        for (const auto& b : t.branches) {
            auto it = r.histogram.find(b.path_string());
            const double f = it == r.histogram.end() ? 0.0 : static_cast<double>(it->second) / trials;
            if (it != r.histogram.end()) matched += it->second;
            tv += std::abs(f - b.probability);
        }
        tv += static_cast<double>(trials - matched) / trials;
        worst = std::max(worst, tv / 2);
        EXPECT_LE(tv / 2, bound) << "program " << i;
    }
    RecordProperty("worst_tv", std::to_string(worst));
}

TEST(Merge, ProductGhzAndLedger) {
    const auto prod = random_product(uniform_layout(3, 2), 9);
    ResourceLedger ledger;
    const auto merged = merge_parties(prod, PartyId{1}, PartyId{2}, ledger);
    ASSERT_EQ(merged.num_parties(), 2u);
    EXPECT_EQ(merged.layout().party(PartyId{1}).name, "B+C");
    EXPECT_NEAR(fidelity(PureState(prod.layout(), merged.amplitudes()), prod), 1.0, 1e-12);
    EXPECT_EQ(ledger.epr_consumed[party_pair("B", "C")], 1u);
    EXPECT_EQ(ledger.cbits_sent, 2u);

    const auto ghz = merge_parties(make_ghz(3), PartyId{1}, PartyId{2}, ledger);
    EXPECT_NEAR(oracle_entropy(ghz, singleton_cut(PartyId{0}, 2)), 1.0, 1e-9);
    EXPECT_THROW(merge_parties(ghz, PartyId{0}, PartyId{0}, ledger), Error);

    // A qutrit share needs two teleported qubits.
    ResourceLedger q;
    merge_parties(RandomSource(1).state(RegisterLayout({{"A", {2}}, {"B", {3}}, {"C", {2}}})), PartyId{0}, PartyId{1}, q);
    EXPECT_EQ(q.total_epr_consumed(), 2u);
}

TEST(Ledger, YieldConvention) {
    ResourceLedger l;
    EXPECT_DOUBLE_EQ(l.yield_per_copy(), 0.0);
    l.copies_consumed = 4;
    l.target_copies = 2;
    l.success_probability = 0.5;
    EXPECT_DOUBLE_EQ(l.yield_per_copy(), 0.25);
}
