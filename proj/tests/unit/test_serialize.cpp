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
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "locclab/serialize.hpp"
#include "support.hpp"

using namespace locclab;
using namespace locclab::testing;

namespace {

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / ("locclab_serialize_" + name); }

ErrorCode parse_error(const std::string& text) {
    try {
        state_from_json(Json::parse(text));
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "accepted: " << text;
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST(StateJson, RoundTripIsBitExact) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 30; ++t) {
        const auto s = RandomSource(rng()).state(random_layout(3, 3, rng));
        const auto path = temp_file("rt.json");
        save_state(s, path);
        const auto back = load_state(path);
        EXPECT_EQ(back.layout(), s.layout());
        EXPECT_EQ(back.amplitudes(), s.amplitudes());
        EXPECT_GE(fidelity(back, s), 1 - 1e-12);
    }
}

TEST(StateJson, NumbersAndStringsAccepted) {
    const auto s = state_from_json(Json::parse(R"({"parties":[{"name":"A","dims":[2]}],"amplitudes":[[0.6,0],["0","0.8"]]})"));
    EXPECT_NEAR(s.amplitudes()[1].imag(), 0.8, 1e-15);
}

TEST(StateJson, NormBand) {
    const auto s = state_from_json(Json::parse(R"({"parties":[{"name":"A","dims":[2]}],"amplitudes":[[1.0000005,0],[0,0]]})"));
    EXPECT_DOUBLE_EQ(s.amplitudes()[0].real(), 1.0);
    EXPECT_EQ(parse_error(R"({"parties":[{"name":"A","dims":[2]}],"amplitudes":[[1.00001,0],[0,0]]})"), ErrorCode::MalformedInput);
}

TEST(StateJson, MalformedInputs) {
    EXPECT_EQ(parse_error(R"({"amplitudes":[]})"), ErrorCode::MalformedInput);
    EXPECT_EQ(parse_error(R"({"parties":[{"name":"A","dims":[2]}],"amplitudes":[[1,0]]})"), ErrorCode::MalformedInput);
    EXPECT_EQ(parse_error(R"({"parties":[{"name":"A","dims":[1]}],"amplitudes":[[1,0]]})"), ErrorCode::MalformedInput);
    EXPECT_EQ(parse_error(R"({"parties":[{"name":"A","dims":[2]}],"amplitudes":[["x",0],[0,0]]})"), ErrorCode::MalformedInput);
    EXPECT_EQ(parse_error(R"({"parties":[{"name":"A","dims":[2]}],"amplitudes":[[1,0,0],[0,0]]})"), ErrorCode::MalformedInput);
    const auto path = temp_file("bad.json");
    std::ofstream(path) << "{ not json";
    try {
        load_state(path);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MalformedInput);
    }
}

TEST(ProgramJson, ParsesDefaultIdsAndHalts) {
    const auto layout = RegisterLayout::qubits({"A", "B"});
    const auto j = Json::parse(R"({"nodes":[
        {"party":"A","elements":[{"label":"0","matrix":[[[1,0],[0,0]],[[0,0],[0,0]]]},
                                 {"label":"1","matrix":[[[0,0],[0,0]],[[0,0],[1,0]]]}],
         "branches":{"0":"node2","1":{"halt":"failure"}}},
        {"party":"B","elements":[{"label":"x","matrix":[[[0,0],[1,0]],[[1,0],[0,0]]]}],
         "branches":{"x":{"halt":"success"}}}]})");
    const auto prog = program_from_json(j, layout);
    ASSERT_EQ(prog.size(), 2u);
    EXPECT_EQ(prog.nodes()[1].id, "node2");
    EXPECT_EQ(prog.nodes()[1].instrument.party, PartyId{1});
    const auto again = program_from_json(Json::parse(program_to_json(prog, layout).dump()), layout);
    EXPECT_EQ(again.size(), 2u);
    EXPECT_EQ(program_to_json(again, layout), program_to_json(prog, layout));
    EXPECT_EQ(program_cat_budget(j), 0u);
    EXPECT_EQ(program_cat_budget(Json::parse(R"({"cat_budget":2,"nodes":[]})")), 2u);
}

TEST(ProgramJson, Errors) {
    const auto layout = RegisterLayout::qubits({"A"});
    auto code = [&](const char* text) {
        try {
            program_from_json(Json::parse(text), layout);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    EXPECT_EQ(code(R"([{"party":"Q","elements":[],"branches":{}}])"), ErrorCode::MalformedInput);
    EXPECT_EQ(code(R"([{"party":"A","elements":[{"label":"a","matrix":[[[0.5,0],[0,0]],[[0,0],[1,0]]]}],"branches":{"a":{"halt":"success"}}}])"),
              ErrorCode::IncompleteInstrument);
    EXPECT_EQ(code(R"([{"party":"A","elements":[{"label":"a","matrix":[[[1,0],[0,0]],[[0,0],[1,0]]]}],"branches":{"a":"nowhere"}}])"),
              ErrorCode::MalformedInput);
    EXPECT_EQ(code(R"([{"party":"A","elements":[{"label":"a","matrix":[[[1,0],[0,0]],[[0,0],[1,0]]]}],"branches":{}}])"),
              ErrorCode::InvalidProgram);
}

TEST(Digest, StableAndSensitive) {
    const auto a = make_ghz(3);
    EXPECT_EQ(state_digest(a), state_digest(make_ghz(3)));
    EXPECT_NE(state_digest(a), state_digest(make_w(3)));
    EXPECT_EQ(state_digest(a).size(), 16u);
}
