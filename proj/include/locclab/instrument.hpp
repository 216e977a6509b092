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

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace locclab {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Tolerance on ||sum_k K_k^dagger K_k - I||_max for an instrument to count as complete.
inline constexpr double kCompletenessTol = 1e-9;

/// Strong index into a register layout's party list.
struct PartyId {
    std::size_t value = 0;

    friend auto operator<=>(const PartyId&, const PartyId&) = default;
};

struct KrausElement {
    std::string label;
    Matrix op;
};

/// A generalized measurement performed by a single party. Elements act on the
/// party's whole local space (the product of its qudit dimensions).
struct LocalInstrument {
    PartyId party;
    std::vector<KrausElement> elements;

    std::size_t dim() const { return elements.empty() ? 0 : static_cast<std::size_t>(elements.front().op.rows()); }
};

/// Largest entry of |sum_k K_k^dagger K_k - I|.
double completeness_deviation(const LocalInstrument& inst);

/// Throws IncompleteInstrument (with the deviation in the message) or
/// InvalidProgram for structural problems: no elements, non-square or mixed
/// sizes, duplicate labels.
void validate_instrument(const LocalInstrument& inst);

/// Single-element instrument applying a unitary.
LocalInstrument unitary_instrument(PartyId party, const std::string& label, const Matrix& u);

/// Rank-one projective measurement onto the columns of `basis`; labels are
/// prefix + column index.
LocalInstrument basis_measurement(PartyId party, const Matrix& basis, const std::string& prefix);

} // namespace locclab
