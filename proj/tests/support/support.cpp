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

#include "support.hpp"

#include <algorithm>
#include <cmath>

namespace locclab::testing {

std::vector<double> jacobi_eigenvalues(const Matrix& h) {
    const auto n = static_cast<std::size_t>(h.rows());
    const std::size_t m = 2 * n;
    std::vector<std::vector<double>> a(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto z = h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            a[i][j] = a[i + n][j + n] = z.real();
            a[i + n][j] = z.imag();
            a[i][j + n] = -z.imag();
        }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < m; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> doubled(m);
    for (std::size_t i = 0; i < m; ++i) doubled[i] = a[i][i];
    std::sort(doubled.begin(), doubled.end());
    std::vector<double> out;
    for (std::size_t i = 0; i < m; i += 2) out.push_back(0.5 * (doubled[i] + doubled[i + 1]));
    return out;
}

Matrix oracle_reduced_density(const std::vector<std::size_t>& dims, const Vector& amps, const std::vector<std::size_t>& keep) {
    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) kept[k] = true;
    std::size_t dk = 1;
    for (auto k : keep) dk *= dims[k];
    const std::size_t total = static_cast<std::size_t>(amps.size());
    // Split each flat index into (kept index, traced index).
    std::vector<std::size_t> kept_index(total), traced_index(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::vector<std::size_t> digit(dims.size());
        std::size_t rest = flat;
        for (std::size_t q = dims.size(); q-- > 0;) {
            digit[q] = rest % dims[q];
            rest /= dims[q];
        }
        std::size_t ki = 0, ti = 0;
        for (auto k : keep) ki = ki * dims[k] + digit[k];
        for (std::size_t q = 0; q < dims.size(); ++q)
            if (!kept[q]) ti = ti * dims[q] + digit[q];
        kept_index[flat] = ki;
        traced_index[flat] = ti;
    }
    Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t x = 0; x < total; ++x)
        for (std::size_t y = 0; y < total; ++y)
            if (traced_index[x] == traced_index[y])
                rho(static_cast<Eigen::Index>(kept_index[x]), static_cast<Eigen::Index>(kept_index[y])) +=
                    amps[static_cast<Eigen::Index>(x)] * std::conj(amps[static_cast<Eigen::Index>(y)]);
    return rho;
}

std::vector<double> oracle_schmidt_coefficients(const PureState& s, const Cut& cut) {
    const auto& layout = s.layout();
    // The smaller reduced density matrix is generically full rank, so no
    // square root is taken of a roundoff-level eigenvalue.
    std::size_t side_dim = 1, other_dim = 1;
    for (auto id : cut.side()) side_dim *= layout.local_dim(id);
    for (auto id : cut.other_side()) other_dim *= layout.local_dim(id);
    std::vector<std::size_t> keep;
    for (auto id : side_dim <= other_dim ? cut.side() : cut.other_side()) {
        const auto subs = layout.subsystems_of(id);
        keep.insert(keep.end(), subs.begin(), subs.end());
    }
    const auto eig = jacobi_eigenvalues(oracle_reduced_density(layout.subsystem_dims(), s.amplitudes(), keep));
    std::vector<double> out;
    for (auto it = eig.rbegin(); it != eig.rend(); ++it) out.push_back(std::sqrt(std::max(0.0, *it)));
    return out;
}

double oracle_entropy(const PureState& s, const Cut& cut) {
    double h = 0.0;
    for (double a : oracle_schmidt_coefficients(s, cut)) {
        const double p = a * a;
        if (p > 1e-15) h -= p * std::log2(p);
    }
    return h;
}

double oracle_gamble_probability(std::vector<double> coeffs) {
    std::sort(coeffs.begin(), coeffs.end(), std::greater<>());
    const double x = coeffs[0] * coeffs[0], y = coeffs[1] * coeffs[1];
    return 2.0 * x * y / (x + y);
}

double overlap(const Vector& a, const Vector& b) {
    Complex sum = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
    return std::norm(sum);
}

LocalInstrument random_instrument(PartyId party, std::size_t dim, std::size_t elements, std::mt19937_64& rng, const std::string& prefix) {
    std::normal_distribution<double> g;
    const auto d = static_cast<Eigen::Index>(dim);
    const auto rows = d * static_cast<Eigen::Index>(elements);
    Matrix ginibre(rows, d);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < d; ++j) ginibre(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<Matrix> qr(ginibre);
    const Matrix iso = qr.householderQ() * Matrix::Identity(rows, d);
    LocalInstrument inst{party, {}};
    for (std::size_t k = 0; k < elements; ++k)
        inst.elements.push_back({prefix + std::to_string(k), iso.block(static_cast<Eigen::Index>(k) * d, 0, d, d)});
    return inst;
}

namespace {

std::size_t build_node(const RegisterLayout& layout, std::mt19937_64& rng, const ProgramShape& shape, std::size_t depth,
                       std::vector<ProgramNode>& nodes) {
    std::uniform_int_distribution<std::size_t> pick_party(0, layout.num_parties() - 1);
    std::uniform_int_distribution<std::size_t> pick_elements(shape.min_elements, shape.max_elements);
    std::uniform_real_distribution<double> coin;
    const PartyId party{pick_party(rng)};
    const std::size_t index = nodes.size();
    nodes.push_back({"node" + std::to_string(index + 1), random_instrument(party, layout.local_dim(party), pick_elements(rng), rng), {}});
    for (const auto& e : std::vector<KrausElement>(nodes[index].instrument.elements)) {
        Next next = Halt{coin(rng) < 0.5 ? Verdict::Success : Verdict::Failure};
        if (depth + 1 < shape.max_depth && coin(rng) >= shape.halt_probability)
            next = NodeRef{build_node(layout, rng, shape, depth + 1, nodes)};
        nodes[index].branches[e.label] = next;
    }
    return index;
}

} // namespace

LoccProgram random_program(const RegisterLayout& layout, std::mt19937_64& rng, const ProgramShape& shape) {
    std::vector<ProgramNode> nodes;
    build_node(layout, rng, shape, 0, nodes);
    return LoccProgram(std::move(nodes));
}

RegisterLayout random_layout(std::size_t parties, std::size_t max_dim, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(2, max_dim);
    std::vector<Party> list;
    for (const auto& n : party_names(parties)) list.push_back({n, {pick(rng)}});
    return RegisterLayout(std::move(list));
}

PureState random_product(const RegisterLayout& layout, std::uint64_t seed) {
    RandomSource rng(seed);
    std::optional<PureState> out;
    for (std::size_t p = 0; p < layout.num_parties(); ++p) {
        const PartyId id{p};
        const PartyId ids[] = {id};
        PureState local = rng.state(layout.restricted(ids));
        out = out ? tensor(*out, local) : local;
    }
    return *out;
}

PureState local_filter(const PureState& s, std::uint64_t seed) {
    RandomSource rng(seed);
    const auto& layout = s.layout();
    Vector v = s.amplitudes();
    for (std::size_t p = 0; p < layout.num_parties(); ++p) {
        const PartyId id{p};
        v = apply_on_subsystems(layout.subsystem_dims(), v, rng.invertible(layout.local_dim(id)), layout.subsystems_of(id));
    }
    return PureState::normalized(layout, v);
}

std::vector<CorpusEntry> labeled_corpus(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CorpusEntry> out;
    for (int i = 0; i < 25; ++i) out.push_back({"product", random_product(random_layout(3, 3, rng), rng()), false});
    for (int i = 0; i < 25; ++i) out.push_back({"partial-product", random_factorizable(random_layout(3, 3, rng), rng()), false});
    for (int i = 0; i < 25; ++i) out.push_back({"ghz-class", local_filter(make_ghz(3), rng()), true});
    for (int i = 0; i < 25; ++i) out.push_back({"w-class", local_filter(make_w(3), rng()), true});
    return out;
}

} // namespace locclab::testing
