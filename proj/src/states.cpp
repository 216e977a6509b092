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

#include "locclab/states.hpp"

#include <cmath>

#include <Eigen/QR>

#include "locclab/decomp.hpp"

namespace locclab {

std::vector<std::string> party_names(std::size_t m) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < m; ++i) out.push_back(i < 26 ? std::string(1, static_cast<char>('A' + i)) : "P" + std::to_string(i));
    return out;
}

PureState make_ghz(const std::vector<std::string>& names) {
    if (names.size() < 2) throw Error(ErrorCode::InvalidArgument, "cat states need at least 2 parties");
    RegisterLayout layout = RegisterLayout::qubits(names);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
    v[0] = v[v.size() - 1] = 1.0 / std::sqrt(2.0);
    return PureState(std::move(layout), std::move(v));
}

PureState make_ghz(std::size_t m) { return make_ghz(party_names(m)); }

PureState make_epr(const std::string& a, const std::string& b) { return make_ghz(std::vector<std::string>{a, b}); }

PureState make_w(std::size_t m) {
    if (m < 2) throw Error(ErrorCode::InvalidArgument, "W states need at least 2 parties");
    RegisterLayout layout = RegisterLayout::qubits(party_names(m));
    Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
    for (std::size_t k = 0; k < m; ++k) v[Eigen::Index{1} << k] = 1.0;
    return PureState::normalized(std::move(layout), std::move(v));
}

double RandomSource::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t RandomSource::index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

Vector RandomSource::gaussian_vector(std::size_t n) {
    std::normal_distribution<double> g;
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& x : v) x = Complex(g(engine_), g(engine_));
    return v;
}

PureState RandomSource::state(const RegisterLayout& layout) {
    return PureState::normalized(layout, gaussian_vector(layout.total_dim()));
}

Matrix RandomSource::unitary(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    Matrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j) g.col(j) = gaussian_vector(d);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const Complex diag = r(j, j);
        if (std::abs(diag) > 0) q.col(j) *= diag / std::abs(diag);
    }
    return q;
}

Matrix RandomSource::invertible(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    Matrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j) g.col(j) = 0.3 * gaussian_vector(d);
    return Matrix::Identity(n, n) + g;
}

RegisterLayout uniform_layout(std::size_t m, std::size_t local_dim) {
    std::vector<Party> parties;
    for (const auto& n : party_names(m)) parties.push_back({n, {local_dim}});
    return RegisterLayout(std::move(parties));
}

PureState random_irreducible(const RegisterLayout& layout, std::uint64_t seed) {
    if (layout.num_parties() < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 parties");
    RandomSource rng(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        PureState s = rng.state(layout);
        if (is_irreducible(s)) return s;
    }
    throw Error(ErrorCode::InvalidArgument, "rejection sampling for an irreducible state did not converge");
}

PureState random_irreducible(std::size_t m, std::size_t local_dim, std::uint64_t seed) {
    return random_irreducible(uniform_layout(m, local_dim), seed);
}

PureState random_factorizable(const RegisterLayout& layout, std::uint64_t seed) {
    const std::size_t m = layout.num_parties();
    if (m < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 parties");
    RandomSource rng(seed);
    const auto cuts = enumerate_cuts(layout);
    const Cut& cut = cuts[rng.index(cuts.size())];
    const auto left = cut.side();
    const auto right = cut.other_side();
    PureState joined = tensor(rng.state(layout.restricted(left)), rng.state(layout.restricted(right)));
    std::vector<PartyId> order(m);
    for (std::size_t i = 0; i < left.size(); ++i) order[left[i].value] = PartyId{i};
    for (std::size_t i = 0; i < right.size(); ++i) order[right[i].value] = PartyId{left.size() + i};
    return reorder_parties(joined, order);
}

PureState random_factorizable(std::size_t m, std::size_t local_dim, std::uint64_t seed) {
    return random_factorizable(uniform_layout(m, local_dim), seed);
}

} // namespace locclab
