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

#include "locclab/decomp.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace locclab {

namespace {

std::uint64_t full_mask(std::size_t m) { return m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1; }

std::uint64_t mask_of(std::span<const PartyId> side) {
    std::uint64_t m = 0;
    for (auto id : side) {
        if (id.value >= 63) throw Error(ErrorCode::InvalidSubset, "party index too large for a cut");
        m |= std::uint64_t{1} << id.value;
    }
    return m;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
    double h = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double l = es.eigenvalues()[i];
        if (l > 1e-15) h -= l * std::log2(l);
    }
    return h;
}

} // namespace

// ---------------------------------------------------------------------------
// Cut

Cut::Cut(std::uint64_t mask, std::size_t num_parties, bool) : mask_(mask), num_parties_(num_parties) {
    if (num_parties < 2 || num_parties > 63)
        throw Error(ErrorCode::InvalidSubset, "cuts need between 2 and 63 parties");
    const auto full = full_mask(num_parties);
    if ((mask_ & ~full) != 0) throw Error(ErrorCode::InvalidSubset, "cut names a party outside the layout");
    if (mask_ == 0 || mask_ == full) throw Error(ErrorCode::InvalidSubset, "cut side must be a proper non-empty subset");
    if ((mask_ >> (num_parties - 1)) & 1U) mask_ = full & ~mask_;
}

Cut::Cut(std::span<const PartyId> side, std::size_t num_parties) : Cut(mask_of(side), num_parties, true) {}

Cut Cut::from_mask(std::uint64_t mask, std::size_t num_parties) { return Cut(mask, num_parties, true); }

std::vector<PartyId> Cut::side() const {
    std::vector<PartyId> out;
    for (std::size_t p = 0; p < num_parties_; ++p)
        if ((mask_ >> p) & 1U) out.push_back(PartyId{p});
    return out;
}

std::vector<PartyId> Cut::other_side() const {
    std::vector<PartyId> out;
    for (std::size_t p = 0; p < num_parties_; ++p)
        if (!((mask_ >> p) & 1U)) out.push_back(PartyId{p});
    return out;
}

std::string Cut::describe(const RegisterLayout& layout) const {
    auto names = [&](const std::vector<PartyId>& ids) {
        std::vector<std::string> n;
        for (auto id : ids) n.push_back(layout.party(id).name);
        std::sort(n.begin(), n.end());
        std::string out;
        for (std::size_t i = 0; i < n.size(); ++i) out += (i ? "," : "") + n[i];
        return out;
    };
    return names(side()) + "|" + names(other_side());
}

Cut singleton_cut(PartyId id, std::size_t num_parties) {
    const PartyId ids[] = {id};
    return Cut(ids, num_parties);
}

// ---------------------------------------------------------------------------
// Schmidt decomposition

SchmidtDecomposition schmidt(const PureState& s, const Cut& cut) {
    const auto& layout = s.layout();
    if (cut.num_parties() != layout.num_parties())
        throw Error(ErrorCode::LayoutMismatch, "cut was built for a different number of parties");
    const auto left = cut.side();
    const auto right = cut.other_side();
    std::vector<std::size_t> order;
    for (const auto* group : {&left, &right})
        for (auto id : *group) {
            auto subs = layout.subsystems_of(id);
            order.insert(order.end(), subs.begin(), subs.end());
        }
    const auto map = permutation_map(layout.subsystem_dims(), order);
    RegisterLayout left_layout = layout.restricted(left);
    RegisterLayout right_layout = layout.restricted(right);
    const auto dl = static_cast<Eigen::Index>(left_layout.total_dim());
    const auto dr = static_cast<Eigen::Index>(right_layout.total_dim());
    Matrix m(dl, dr);
    for (std::size_t i = 0; i < map.size(); ++i) {
        const auto j = static_cast<Eigen::Index>(map[i]);
        m(j / dr, j % dr) = s.amplitudes()[static_cast<Eigen::Index>(i)];
    }
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();

    struct Term {
        double a;
        Eigen::Index lead;
        Eigen::Index col;
    };
    std::vector<Term> terms;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (!(sv[i] >= kSchmidtCutoff)) continue;
        Eigen::Index lead = 0;
        const auto u = svd.matrixU().col(i);
        while (lead + 1 < u.size() && std::abs(u[lead]) <= 1e-8) ++lead;
        terms.push_back({sv[i], lead, i});
    }
    std::stable_sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.a > y.a; });
    // degenerate runs ordered by leading index
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i + 1;
        while (j < terms.size() && terms[j - 1].a - terms[j].a <= 1e-12) ++j;
        std::stable_sort(terms.begin() + static_cast<std::ptrdiff_t>(i), terms.begin() + static_cast<std::ptrdiff_t>(j),
                         [](const Term& x, const Term& y) { return x.lead < y.lead; });
        i = j;
    }

    SchmidtDecomposition out{cut, {}, {}, {}, std::move(left_layout), std::move(right_layout)};
    for (const auto& t : terms) {
        Vector u = svd.matrixU().col(t.col);
        Vector v = svd.matrixV().col(t.col).conjugate();
        const Complex lead = u[t.lead];
        const Complex phase = lead / std::abs(lead);
        u *= std::conj(phase);
        v *= phase;
        out.coefficients.push_back(t.a);
        out.left_basis.push_back(std::move(u));
        out.right_basis.push_back(std::move(v));
    }
    return out;
}

PureState reconstruct(const SchmidtDecomposition& d, const RegisterLayout& source) {
    const auto dl = static_cast<Eigen::Index>(d.left_layout.total_dim());
    const auto dr = static_cast<Eigen::Index>(d.right_layout.total_dim());
    Vector joined = Vector::Zero(dl * dr);
    for (std::size_t i = 0; i < d.rank(); ++i)
        for (Eigen::Index x = 0; x < dl; ++x) joined.segment(x * dr, dr) += d.coefficients[i] * d.left_basis[i][x] * d.right_basis[i];

    std::vector<Party> parties = d.left_layout.parties();
    parties.insert(parties.end(), d.right_layout.parties().begin(), d.right_layout.parties().end());
    PureState split = PureState::normalized(RegisterLayout(parties), std::move(joined));

    std::vector<PartyId> order(source.num_parties());
    const auto left = d.cut.side();
    const auto right = d.cut.other_side();
    for (std::size_t i = 0; i < left.size(); ++i) order[left[i].value] = PartyId{i};
    for (std::size_t i = 0; i < right.size(); ++i) order[right[i].value] = PartyId{left.size() + i};
    return reorder_parties(split, order);
}

double entropy_of_coefficients(const std::vector<double>& coefficients) {
    double h = 0.0;
    for (double a : coefficients) {
        const double p = a * a;
        if (p > 0.0) h -= p * std::log2(p);
    }
    return std::max(h, 0.0);
}

double entropy_across_cut(const PureState& s, const Cut& cut) { return entropy_of_coefficients(schmidt(s, cut).coefficients); }

bool is_factorizable(const PureState& s, const Cut& cut) {
    const auto d = schmidt(s, cut);
    return !d.coefficients.empty() && d.coefficients.front() >= 1.0 - kFactorizableTol;
}

std::vector<Cut> enumerate_cuts(const RegisterLayout& layout) {
    const std::size_t m = layout.num_parties();
    if (m < 2) throw Error(ErrorCode::InvalidSubset, "cuts need at least 2 parties");
    if (m > 20) throw Error(ErrorCode::InvalidArgument, "too many parties to enumerate cuts");
    std::vector<Cut> cuts;
    const std::uint64_t n = std::uint64_t{1} << (m - 1);
    for (std::uint64_t mask = 1; mask < n; ++mask) cuts.push_back(Cut::from_mask(mask, m));
    return cuts;
}

bool is_irreducible(const PureState& s) {
    if (s.num_parties() < 2) throw Error(ErrorCode::InvalidSubset, "irreducibility needs at least 2 parties");
    for (const auto& cut : enumerate_cuts(s.layout()))
        if (is_factorizable(s, cut)) return false;
    return true;
}

const char* eoa_case_name(EoaCase c) {
    switch (c) {
    case EoaCase::ZeroCaseBPure: return "ZeroCaseBPure";
    case EoaCase::ZeroCaseCPure: return "ZeroCaseCPure";
    case EoaCase::Nonzero: return "Nonzero";
    }
    return "Unknown";
}

EoaCase eoa_zero_check(const PureState& s, PartyId helper, PartyId b) {
    const auto& layout = s.layout();
    if (layout.num_parties() < 3) throw Error(ErrorCode::InvalidSubset, "assistance needs at least 3 parties");
    layout.check(helper);
    layout.check(b);
    if (helper == b) throw Error(ErrorCode::InvalidSubset, "helper and B must differ");
    std::vector<PartyId> c_side, bc_side;
    for (std::size_t p = 0; p < layout.num_parties(); ++p) {
        if (PartyId{p} == helper) continue;
        bc_side.push_back(PartyId{p});
        if (PartyId{p} != b) c_side.push_back(PartyId{p});
    }
    const PartyId b_side[] = {b};
    const auto rho_b = partial_trace(s, b_side);
    const auto rho_c = partial_trace(s, c_side);
    const auto rho_bc = partial_trace(s, bc_side);
    // I(B:C) = 0 iff rho^{BC} = rho^B (x) rho^C
    const double mutual = von_neumann_entropy(rho_b) + von_neumann_entropy(rho_c) - von_neumann_entropy(rho_bc);
    const bool product = mutual <= 1e-7;
    if (product && rho_c.purity() >= 1.0 - 1e-9) return EoaCase::ZeroCaseCPure;
    if (product && rho_b.purity() >= 1.0 - 1e-9) return EoaCase::ZeroCaseBPure;
    return EoaCase::Nonzero;
}

} // namespace locclab
