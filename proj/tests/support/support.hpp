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

#include "locclab/analysis.hpp"
#include "locclab/decomp.hpp"
#include "locclab/locc.hpp"
#include "locclab/states.hpp"

namespace locclab::testing {

// Oracles written without the library's decomposition code paths.

/// Eigenvalues (ascending) of a Hermitian matrix by cyclic Jacobi on its real
/// 2n x 2n embedding.
std::vector<double> jacobi_eigenvalues(const Matrix& h);

/// Reduced density matrix on the listed subsystems by explicit index loops.
Matrix oracle_reduced_density(const std::vector<std::size_t>& dims, const Vector& amps, const std::vector<std::size_t>& keep);

/// Square roots of the eigenvalues of the reduced state on the cut side, descending.
std::vector<double> oracle_schmidt_coefficients(const PureState& s, const Cut& cut);
double oracle_entropy(const PureState& s, const Cut& cut);

/// 2 a1^2 a2^2 / (a1^2 + a2^2) for the two largest entries.
double oracle_gamble_probability(std::vector<double> coeffs);

/// |<a|b>|^2 by direct summation.
double overlap(const Vector& a, const Vector& b);

// Random objects for property tests.

/// Complete instrument from a Haar isometry cut into `elements` blocks.
LocalInstrument random_instrument(PartyId party, std::size_t dim, std::size_t elements, std::mt19937_64& rng,
                                  const std::string& prefix = "k");

struct ProgramShape {
    std::size_t max_depth = 5;
    std::size_t min_elements = 2;
    std::size_t max_elements = 3;
    /// Chance that a non-final outcome halts right away.
    double halt_probability = 0.5;
};

/// Random classically controlled tree on `layout`.
LoccProgram random_program(const RegisterLayout& layout, std::mt19937_64& rng, const ProgramShape& shape = {});

/// Random layout with `parties` parties, each one qudit of dimension in [2, max_dim].
RegisterLayout random_layout(std::size_t parties, std::size_t max_dim, std::mt19937_64& rng);

/// Product of independent random local states.
PureState random_product(const RegisterLayout& layout, std::uint64_t seed);

/// Random invertible local operators applied to `s`, renormalized.
PureState local_filter(const PureState& s, std::uint64_t seed);

struct CorpusEntry {
    std::string family;
    PureState state;
    bool irreducible;
};

/// 25 products, 25 partial products, 25 GHZ-class and 25 W-class three-party states.
std::vector<CorpusEntry> labeled_corpus(std::uint64_t seed);

} // namespace locclab::testing
