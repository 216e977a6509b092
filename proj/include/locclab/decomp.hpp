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
#include <string>
#include <vector>

#include "locclab/qstate.hpp"

namespace locclab {

/// Largest Schmidt coefficient at or above 1 - kFactorizableTol means rank 1.
inline constexpr double kFactorizableTol = 1e-9;
/// Schmidt coefficients below this are numerical zeros.
inline constexpr double kSchmidtCutoff = 1e-10;

/// Bipartition {X, X-bar} of a layout's parties. Stored canonically: the
/// highest-indexed party is always on the X-bar side.
class Cut {
public:
    /// Canonicalizes; throws InvalidSubset unless `side` is a proper non-empty subset.
    Cut(std::span<const PartyId> side, std::size_t num_parties);
    static Cut from_mask(std::uint64_t mask, std::size_t num_parties);

    std::uint64_t mask() const { return mask_; }
    std::size_t num_parties() const { return num_parties_; }
    bool contains(PartyId id) const { return (mask_ >> id.value) & 1U; }
    std::vector<PartyId> side() const;
    std::vector<PartyId> other_side() const;

    /// "A,B|C" using the layout's party names.
    std::string describe(const RegisterLayout& layout) const;

    friend bool operator==(const Cut&, const Cut&) = default;

private:
    Cut(std::uint64_t mask, std::size_t num_parties, bool);
    std::uint64_t mask_ = 0;
    std::size_t num_parties_ = 0;
};

/// Cut separating one party from everyone else.
Cut singleton_cut(PartyId id, std::size_t num_parties);

struct SchmidtDecomposition {
    Cut cut;
    /// Descending, strictly positive.
    std::vector<double> coefficients;
    /// Vectors on the X side (parties of cut.side() in ascending order) and on X-bar.
    std::vector<Vector> left_basis;
    std::vector<Vector> right_basis;
    RegisterLayout left_layout;
    RegisterLayout right_layout;

    std::size_t rank() const { return coefficients.size(); }
};

SchmidtDecomposition schmidt(const PureState& s, const Cut& cut);

/// Rebuilds sum_i a_i |left_i>|right_i> in the source layout's ordering.
PureState reconstruct(const SchmidtDecomposition& d, const RegisterLayout& source);

/// Entropy of entanglement in bits.
double entropy_across_cut(const PureState& s, const Cut& cut);
double entropy_of_coefficients(const std::vector<double>& coefficients);

bool is_factorizable(const PureState& s, const Cut& cut);
/// True iff no canonical cut factorizes the state. Needs at least 2 parties.
bool is_irreducible(const PureState& s);

/// The 2^(m-1) - 1 canonical cuts, ascending by the bitmask of X.
std::vector<Cut> enumerate_cuts(const RegisterLayout& layout);

enum class EoaCase { ZeroCaseBPure, ZeroCaseCPure, Nonzero };
const char* eoa_case_name(EoaCase c);

/// Zero/nonzero test for the entanglement of assistance of rho^{BC}, where C is
/// every party other than `helper` and `b`.
EoaCase eoa_zero_check(const PureState& s, PartyId helper, PartyId b);

} // namespace locclab
