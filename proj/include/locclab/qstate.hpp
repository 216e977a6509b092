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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locclab/errors.hpp"
#include "locclab/instrument.hpp"

namespace locclab {

/// Renormalization and validity tolerance for pure states.
inline constexpr double kNormTol = 1e-9;
/// Branches with probability below this are dropped as impossible.
inline constexpr double kDropTol = 1e-12;
inline constexpr std::size_t kDefaultDimensionGuard = std::size_t{1} << 20;

/// Amplitude-count guard. LOCCLAB_DIM_GUARD overrides the default.
std::size_t dimension_guard();

struct Party {
    std::string name;
    std::vector<std::size_t> dims;

    std::size_t local_dim() const;
};

/// Ordered party list. Flat amplitude indices are party-major with party 0
/// most significant, and within a party its qudits most-significant-first.
class RegisterLayout {
public:
    RegisterLayout() = default;
    explicit RegisterLayout(std::vector<Party> parties);

    /// Layout of qubit parties with the given names.
    static RegisterLayout qubits(const std::vector<std::string>& names);

    std::size_t num_parties() const { return parties_.size(); }
    const std::vector<Party>& parties() const { return parties_; }
    const Party& party(PartyId id) const;
    std::size_t local_dim(PartyId id) const { return party(id).local_dim(); }
    std::size_t total_dim() const { return total_dim_; }

    /// Qudit dimensions flattened across parties in layout order.
    std::vector<std::size_t> subsystem_dims() const;
    std::size_t num_subsystems() const;
    /// Index of the party's first qudit in subsystem_dims().
    std::size_t first_subsystem(PartyId id) const;
    std::vector<std::size_t> subsystems_of(PartyId id) const;

    std::optional<PartyId> find(const std::string& name) const;
    PartyId require(const std::string& name) const;
    void check(PartyId id) const;

    /// Layout restricted to `keep`, in ascending party order.
    RegisterLayout restricted(std::span<const PartyId> keep) const;

    friend bool operator==(const RegisterLayout&, const RegisterLayout&);

private:
    std::vector<Party> parties_;
    std::size_t total_dim_ = 1;
};

bool operator==(const Party& a, const Party& b);

class PureState {
public:
    /// Validates the layout guard, the length and the norm (within kNormTol).
    PureState(RegisterLayout layout, Vector amplitudes);

    /// Rescales to unit norm; throws InvalidArgument for a zero vector.
    static PureState normalized(RegisterLayout layout, Vector amplitudes);
    static PureState basis(RegisterLayout layout, std::size_t index);

    const RegisterLayout& layout() const { return layout_; }
    const Vector& amplitudes() const { return amplitudes_; }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    std::size_t num_parties() const { return layout_.num_parties(); }

private:
    RegisterLayout layout_;
    Vector amplitudes_;
};

class DensityMatrix {
public:
    /// Validates Hermiticity, unit trace and positivity within 1e-9.
    DensityMatrix(RegisterLayout layout, Matrix matrix);

    static DensityMatrix from_pure(const PureState& s);

    const RegisterLayout& layout() const { return layout_; }
    const Matrix& matrix() const { return matrix_; }
    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    double purity() const;

private:
    RegisterLayout layout_;
    Matrix matrix_;
};

/// Kronecker product; layout is a's parties followed by b's.
PureState tensor(const PureState& a, const PureState& b);
/// n-fold tensor power with same-named parties coalesced, so each party holds
/// its n shares (copy 0 most significant).
PureState tensor_power(const PureState& s, std::size_t n);

/// Fuses parties sharing a name into one party at the position of its first
/// occurrence, qudits kept in order of appearance.
PureState coalesce_parties(const PureState& s);

/// Reorders parties; `order[i]` is the old party placed at position i.
PureState reorder_parties(const PureState& s, std::span<const PartyId> order);

/// Reorders qudits (subsystem indices) and regroups them into `target`, whose
/// flattened dims must match the permuted dims.
PureState permute_subsystems(const PureState& s, std::span<const std::size_t> order,
                             RegisterLayout target);

/// new_index[old_flat_index] for a qudit permutation.
std::vector<std::size_t> permutation_map(std::span<const std::size_t> dims,
                                         std::span<const std::size_t> order);

DensityMatrix partial_trace(const PureState& s, std::span<const PartyId> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const PartyId> keep);

/// Uhlmann fidelity (tr sqrt(sqrt(r) s sqrt(r)))^2, clamped to [0, 1].
double fidelity(const DensityMatrix& r, const DensityMatrix& s);
/// |<a|b>|^2.
double fidelity(const PureState& a, const PureState& b);

/// Applies `op` to the listed qudits (first listed most significant in op's index).
Vector apply_on_subsystems(std::span<const std::size_t> dims, const Vector& v, const Matrix& op,
                           std::span<const std::size_t> subsystems);

struct Outcome {
    std::string label;
    double probability = 0.0;
    PureState state;
};

struct LocalResult {
    std::vector<Outcome> outcomes;
    double dropped_mass = 0.0;
    std::vector<std::string> dropped_labels;
};

/// Applies every element of `inst` at its party. Outcomes with probability at
/// or below kDropTol are dropped and their mass reported.
LocalResult apply_local(const PureState& s, const LocalInstrument& inst);

/// Probability and renormalized post-state of a single element.
std::optional<Outcome> apply_element(const PureState& s, PartyId party, const KrausElement& element);

/// Projects the listed qudits onto the given basis digits and removes them from
/// the layout; parties left without qudits are removed.
PureState discard_subsystems(const PureState& s, std::span<const std::size_t> subsystems,
                             std::span<const std::size_t> digits);

/// Moves one qudit of `from` to the end of party `to_name` (created at the end
/// of the layout if absent). Empty parties are removed.
PureState relocate_subsystem(const PureState& s, PartyId from, std::size_t slot,
                             const std::string& to_name);

/// Builds the party-local matrix of `op` acting on the given slots of the party.
Matrix embed_in_party(const Party& party, const Matrix& op, std::span<const std::size_t> slots);

} // namespace locclab
