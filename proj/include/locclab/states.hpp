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
#include <random>
#include <string>
#include <vector>

#include "locclab/qstate.hpp"

namespace locclab {

/// "A", "B", ..., "Z", "P26", "P27", ...
std::vector<std::string> party_names(std::size_t m);

/// (|0...0> + |1...1>)/sqrt(2) over qubit parties.
PureState make_ghz(const std::vector<std::string>& names);
PureState make_ghz(std::size_t m);
PureState make_epr(const std::string& a = "A", const std::string& b = "B");
/// Equal superposition of the m single-excitation basis states.
PureState make_w(std::size_t m);

/// Seeded source of Haar-random objects. Deterministic for a given seed.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    std::mt19937_64& engine() { return engine_; }
    double uniform();
    std::size_t index(std::size_t n);
    Vector gaussian_vector(std::size_t n);
    /// Haar-random state on the given layout.
    PureState state(const RegisterLayout& layout);
    /// Haar-random unitary (QR of a Ginibre matrix with phase fix).
    Matrix unitary(std::size_t d);
    /// Random invertible matrix with bounded condition (identity plus noise).
    Matrix invertible(std::size_t d);

private:
    std::mt19937_64 engine_;
};

RegisterLayout uniform_layout(std::size_t m, std::size_t local_dim);

/// Haar state rejection-sampled until it is irreducible.
PureState random_irreducible(const RegisterLayout& layout, std::uint64_t seed);
PureState random_irreducible(std::size_t m, std::size_t local_dim, std::uint64_t seed);
/// Product of two Haar states across a random cut, parties in layout order.
PureState random_factorizable(const RegisterLayout& layout, std::uint64_t seed);
PureState random_factorizable(std::size_t m, std::size_t local_dim, std::uint64_t seed);

} // namespace locclab
