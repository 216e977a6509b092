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

#include "locclab/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

namespace locclab {

std::size_t dimension_guard() {
    if (const char* env = std::getenv("LOCCLAB_DIM_GUARD")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return kDefaultDimensionGuard;
}

// ---------------------------------------------------------------------------
// Instruments

double completeness_deviation(const LocalInstrument& inst) {
    const auto d = static_cast<Eigen::Index>(inst.dim());
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& e : inst.elements) sum += e.op.adjoint() * e.op;
    sum -= Matrix::Identity(d, d);
    return d == 0 ? 0.0 : sum.cwiseAbs().maxCoeff();
}

void validate_instrument(const LocalInstrument& inst) {
    if (inst.elements.empty()) throw Error(ErrorCode::InvalidProgram, "instrument has no elements");
    const auto d = inst.elements.front().op.rows();
    std::set<std::string> labels;
    for (const auto& e : inst.elements) {
        if (e.op.rows() != d || e.op.cols() != d)
            throw Error(ErrorCode::InvalidProgram, "instrument element '" + e.label + "' is not " +
                                                       std::to_string(d) + "x" + std::to_string(d));
        if (!labels.insert(e.label).second)
            throw Error(ErrorCode::InvalidProgram, "duplicate outcome label '" + e.label + "'");
    }
    const double dev = completeness_deviation(inst);
    if (!(dev <= kCompletenessTol))
        throw Error(ErrorCode::IncompleteInstrument,
                    "sum of K^dagger K deviates from identity by " + std::to_string(dev));
}

LocalInstrument unitary_instrument(PartyId party, const std::string& label, const Matrix& u) {
    return LocalInstrument{party, {KrausElement{label, u}}};
}

LocalInstrument basis_measurement(PartyId party, const Matrix& basis, const std::string& prefix) {
    LocalInstrument inst{party, {}};
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
        const Vector col = basis.col(k);
        inst.elements.push_back({prefix + std::to_string(k), col * col.adjoint()});
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Layout

std::size_t Party::local_dim() const {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

bool operator==(const Party& a, const Party& b) { return a.name == b.name && a.dims == b.dims; }

RegisterLayout::RegisterLayout(std::vector<Party> parties) : parties_(std::move(parties)) {
    if (parties_.empty()) throw Error(ErrorCode::InvalidArgument, "layout needs at least one party");
    const std::size_t guard = dimension_guard();
    total_dim_ = 1;
    for (const auto& p : parties_) {
        if (p.dims.empty()) throw Error(ErrorCode::InvalidArgument, "party '" + p.name + "' has no qudits");
        for (auto d : p.dims) {
            if (d < 2)
                throw Error(ErrorCode::InvalidArgument,
                            "party '" + p.name + "' has local dimension " + std::to_string(d) + " < 2");
            if (total_dim_ > guard / d)
                throw Error(ErrorCode::DimensionLimit, "register exceeds " + std::to_string(guard) + " amplitudes");
            total_dim_ *= d;
        }
    }
}

RegisterLayout RegisterLayout::qubits(const std::vector<std::string>& names) {
    std::vector<Party> parties;
    for (const auto& n : names) parties.push_back({n, {2}});
    return RegisterLayout(std::move(parties));
}

const Party& RegisterLayout::party(PartyId id) const {
    check(id);
    return parties_[id.value];
}

void RegisterLayout::check(PartyId id) const {
    if (id.value >= parties_.size())
        throw Error(ErrorCode::InvalidArgument, "party index " + std::to_string(id.value) + " out of range for " +
                                                    std::to_string(parties_.size()) + " parties");
}

std::vector<std::size_t> RegisterLayout::subsystem_dims() const {
    std::vector<std::size_t> out;
    for (const auto& p : parties_) out.insert(out.end(), p.dims.begin(), p.dims.end());
    return out;
}

std::size_t RegisterLayout::num_subsystems() const {
    std::size_t n = 0;
    for (const auto& p : parties_) n += p.dims.size();
    return n;
}

std::size_t RegisterLayout::first_subsystem(PartyId id) const {
    check(id);
    std::size_t n = 0;
    for (std::size_t i = 0; i < id.value; ++i) n += parties_[i].dims.size();
    return n;
}

std::vector<std::size_t> RegisterLayout::subsystems_of(PartyId id) const {
    const std::size_t first = first_subsystem(id);
    std::vector<std::size_t> out(parties_[id.value].dims.size());
    std::iota(out.begin(), out.end(), first);
    return out;
}

std::optional<PartyId> RegisterLayout::find(const std::string& name) const {
    for (std::size_t i = 0; i < parties_.size(); ++i)
        if (parties_[i].name == name) return PartyId{i};
    return std::nullopt;
}

PartyId RegisterLayout::require(const std::string& name) const {
    if (auto id = find(name)) return *id;
    throw Error(ErrorCode::InvalidArgument, "no party named '" + name + "'");
}

RegisterLayout RegisterLayout::restricted(std::span<const PartyId> keep) const {
    std::vector<PartyId> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<Party> parties;
    for (auto id : sorted) parties.push_back(party(id));
    return RegisterLayout(std::move(parties));
}

bool operator==(const RegisterLayout& a, const RegisterLayout& b) { return a.parties_ == b.parties_; }

// ---------------------------------------------------------------------------
// States

PureState::PureState(RegisterLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dim())
        throw Error(ErrorCode::LayoutMismatch, "expected " + std::to_string(layout_.total_dim()) +
                                                   " amplitudes, got " + std::to_string(amplitudes_.size()));
    const double n2 = amplitudes_.squaredNorm();
    if (!(std::abs(n2 - 1.0) <= kNormTol))
        throw Error(ErrorCode::InvalidArgument, "state norm^2 " + std::to_string(n2) + " is not 1");
}

PureState PureState::normalized(RegisterLayout layout, Vector amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero vector");
    amplitudes /= n;
    return PureState(std::move(layout), std::move(amplitudes));
}

PureState PureState::basis(RegisterLayout layout, std::size_t index) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
    if (index >= layout.total_dim()) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return PureState(std::move(layout), std::move(v));
}

DensityMatrix::DensityMatrix(RegisterLayout layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(layout_.total_dim());
    if (matrix_.rows() != d || matrix_.cols() != d)
        throw Error(ErrorCode::LayoutMismatch, "density matrix size does not match layout");
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw Error(ErrorCode::InvalidArgument, "density matrix is not Hermitian");
    if (std::abs(matrix_.trace() - Complex(1.0)) > 1e-9)
        throw Error(ErrorCode::InvalidArgument, "density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw Error(ErrorCode::InvalidArgument, "density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(const PureState& s) {
    return DensityMatrix(s.layout(), s.amplitudes() * s.amplitudes().adjoint());
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

// ---------------------------------------------------------------------------
// Index permutations

std::vector<std::size_t> permutation_map(std::span<const std::size_t> dims, std::span<const std::size_t> order) {
    const std::size_t n = dims.size();
    if (order.size() != n) throw Error(ErrorCode::InvalidArgument, "permutation length mismatch");
    std::vector<bool> seen(n, false);
    for (auto o : order) {
        if (o >= n || seen[o]) throw Error(ErrorCode::InvalidArgument, "not a permutation");
        seen[o] = true;
    }
    // stride of old subsystem s in the new ordering
    std::vector<std::size_t> new_stride_of_old(n);
    std::size_t stride = 1;
    for (std::size_t t = n; t-- > 0;) {
        new_stride_of_old[order[t]] = stride;
        stride *= dims[order[t]];
    }
    const std::size_t total = stride;
    std::vector<std::size_t> out(total);
    std::vector<std::size_t> digits(n, 0);
    std::size_t target = 0;
    for (std::size_t i = 0; i < total; ++i) {
        out[i] = target;
        // odometer increment, least significant old subsystem last
        for (std::size_t s = n; s-- > 0;) {
            if (++digits[s] < dims[s]) {
                target += new_stride_of_old[s];
                break;
            }
            target -= (dims[s] - 1) * new_stride_of_old[s];
            digits[s] = 0;
        }
    }
    return out;
}

PureState permute_subsystems(const PureState& s, std::span<const std::size_t> order, RegisterLayout target) {
    const auto dims = s.layout().subsystem_dims();
    const auto tdims = target.subsystem_dims();
    if (tdims.size() != dims.size()) throw Error(ErrorCode::LayoutMismatch, "permutation target has wrong qudit count");
    for (std::size_t t = 0; t < order.size(); ++t)
        if (order[t] >= dims.size() || tdims[t] != dims[order[t]])
            throw Error(ErrorCode::LayoutMismatch, "permutation target dims do not match");
    const auto map = permutation_map(dims, order);
    Vector out(s.amplitudes().size());
    for (std::size_t i = 0; i < map.size(); ++i) out[static_cast<Eigen::Index>(map[i])] = s.amplitudes()[static_cast<Eigen::Index>(i)];
    return PureState(std::move(target), std::move(out));
}

namespace {

std::vector<PartyId> normalized_subset(const RegisterLayout& layout, std::span<const PartyId> keep) {
    std::vector<PartyId> ids(keep.begin(), keep.end());
    for (auto id : ids) layout.check(id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.empty() || ids.size() == layout.num_parties())
        throw Error(ErrorCode::InvalidSubset, "kept parties must be a non-empty proper subset");
    return ids;
}

// Qudit order listing the subsystems of `front` parties first, then the rest.
std::vector<std::size_t> front_order(const RegisterLayout& layout, const std::vector<PartyId>& front) {
    std::vector<std::size_t> order;
    std::vector<bool> in_front(layout.num_parties(), false);
    for (auto id : front) in_front[id.value] = true;
    for (auto id : front) {
        auto subs = layout.subsystems_of(id);
        order.insert(order.end(), subs.begin(), subs.end());
    }
    for (std::size_t p = 0; p < layout.num_parties(); ++p)
        if (!in_front[p]) {
            auto subs = layout.subsystems_of(PartyId{p});
            order.insert(order.end(), subs.begin(), subs.end());
        }
    return order;
}

} // namespace

PureState tensor(const PureState& a, const PureState& b) {
    std::vector<Party> parties = a.layout().parties();
    parties.insert(parties.end(), b.layout().parties().begin(), b.layout().parties().end());
    RegisterLayout layout(std::move(parties));
    Vector v(static_cast<Eigen::Index>(layout.total_dim()));
    const auto db = b.amplitudes().size();
    for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) v.segment(i * db, db) = a.amplitudes()[i] * b.amplitudes();
    return PureState(std::move(layout), std::move(v));
}

PureState tensor_power(const PureState& s, std::size_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "tensor power needs n >= 1");
    PureState out = s;
    for (std::size_t i = 1; i < n; ++i) out = tensor(out, s);
    return coalesce_parties(out);
}

PureState coalesce_parties(const PureState& s) {
    const auto& layout = s.layout();
    std::vector<Party> parties;
    std::vector<std::size_t> order;
    std::vector<bool> done(layout.num_parties(), false);
    for (std::size_t p = 0; p < layout.num_parties(); ++p) {
        if (done[p]) continue;
        Party fused{layout.parties()[p].name, {}};
        for (std::size_t q = p; q < layout.num_parties(); ++q) {
            if (layout.parties()[q].name != fused.name) continue;
            done[q] = true;
            const auto& dims = layout.parties()[q].dims;
            fused.dims.insert(fused.dims.end(), dims.begin(), dims.end());
            auto subs = layout.subsystems_of(PartyId{q});
            order.insert(order.end(), subs.begin(), subs.end());
        }
        parties.push_back(std::move(fused));
    }
    return permute_subsystems(s, order, RegisterLayout(std::move(parties)));
}

PureState reorder_parties(const PureState& s, std::span<const PartyId> order) {
    const auto& layout = s.layout();
    if (order.size() != layout.num_parties()) throw Error(ErrorCode::InvalidArgument, "party order length mismatch");
    std::vector<Party> parties;
    std::vector<std::size_t> sub_order;
    for (auto id : order) {
        parties.push_back(layout.party(id));
        auto subs = layout.subsystems_of(id);
        sub_order.insert(sub_order.end(), subs.begin(), subs.end());
    }
    return permute_subsystems(s, sub_order, RegisterLayout(std::move(parties)));
}

DensityMatrix partial_trace(const PureState& s, std::span<const PartyId> keep) {
    const auto& layout = s.layout();
    const auto ids = normalized_subset(layout, keep);
    const auto order = front_order(layout, ids);
    const auto dims = layout.subsystem_dims();
    const auto map = permutation_map(dims, order);
    RegisterLayout kept = layout.restricted(ids);
    const auto dk = static_cast<Eigen::Index>(kept.total_dim());
    const auto dr = static_cast<Eigen::Index>(layout.total_dim()) / dk;
    Matrix m(dk, dr);
    for (std::size_t i = 0; i < map.size(); ++i) {
        const auto j = static_cast<Eigen::Index>(map[i]);
        m(j / dr, j % dr) = s.amplitudes()[static_cast<Eigen::Index>(i)];
    }
    Matrix rho = m * m.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(std::move(kept), std::move(rho));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const PartyId> keep) {
    const auto& layout = rho.layout();
    const auto ids = normalized_subset(layout, keep);
    const auto order = front_order(layout, ids);
    const auto map = permutation_map(layout.subsystem_dims(), order);
    RegisterLayout kept = layout.restricted(ids);
    const auto dk = static_cast<Eigen::Index>(kept.total_dim());
    const auto d = static_cast<Eigen::Index>(layout.total_dim());
    const auto dr = d / dk;
    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index i = 0; i < d; ++i) {
        const auto pi = static_cast<Eigen::Index>(map[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < d; ++j) {
            const auto pj = static_cast<Eigen::Index>(map[static_cast<std::size_t>(j)]);
            if (pi % dr != pj % dr) continue;
            out(pi / dr, pj / dr) += rho.matrix()(i, j);
        }
    }
    return DensityMatrix(std::move(kept), std::move(out));
}

double fidelity(const DensityMatrix& r, const DensityMatrix& s) {
    if (r.dim() != s.dim()) throw Error(ErrorCode::LayoutMismatch, "fidelity of states with different dimensions");
    Eigen::SelfAdjointEigenSolver<Matrix> er(r.matrix());
    const Eigen::VectorXd ev = er.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Matrix sqrt_r = er.eigenvectors() * ev.cast<Complex>().asDiagonal() * er.eigenvectors().adjoint();
    Matrix m = sqrt_r * s.matrix() * sqrt_r;
    m = 0.5 * (m + m.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> em(m, Eigen::EigenvaluesOnly);
    const double root = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::clamp(root * root, 0.0, 1.0);
}

double fidelity(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::LayoutMismatch, "fidelity of states with different dimensions");
    return std::clamp(std::norm(a.amplitudes().dot(b.amplitudes())), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Local operators

Vector apply_on_subsystems(std::span<const std::size_t> dims, const Vector& v, const Matrix& op,
                           std::span<const std::size_t> subsystems) {
    const std::size_t n = dims.size();
    std::vector<std::size_t> stride(n);
    std::size_t total = 1;
    for (std::size_t s = n; s-- > 0;) {
        stride[s] = total;
        total *= dims[s];
    }
    std::size_t op_dim = 1;
    for (auto s : subsystems) {
        if (s >= n) throw Error(ErrorCode::InvalidArgument, "qudit index out of range");
        op_dim *= dims[s];
    }
    if (static_cast<std::size_t>(op.rows()) != op_dim || static_cast<std::size_t>(op.cols()) != op_dim)
        throw Error(ErrorCode::LayoutMismatch, "operator is " + std::to_string(op.rows()) + "x" +
                                                   std::to_string(op.cols()) + ", local dimension is " +
                                                   std::to_string(op_dim));
    if (static_cast<std::size_t>(v.size()) != total) throw Error(ErrorCode::LayoutMismatch, "vector length mismatch");

    // offset of each operator basis index within the flat register
    std::vector<std::size_t> offset(op_dim, 0);
    for (std::size_t j = 0; j < op_dim; ++j) {
        std::size_t rem = j;
        for (std::size_t t = subsystems.size(); t-- > 0;) {
            const auto s = subsystems[t];
            offset[j] += (rem % dims[s]) * stride[s];
            rem /= dims[s];
        }
    }
    Vector out(v.size());
    Vector gathered(static_cast<Eigen::Index>(op_dim));
    for (std::size_t base = 0; base < total; ++base) {
        bool is_base = true;
        for (auto s : subsystems)
            if ((base / stride[s]) % dims[s] != 0) {
                is_base = false;
                break;
            }
        if (!is_base) continue;
        for (std::size_t j = 0; j < op_dim; ++j) gathered[static_cast<Eigen::Index>(j)] = v[static_cast<Eigen::Index>(base + offset[j])];
        const Vector res = op * gathered;
        for (std::size_t j = 0; j < op_dim; ++j) out[static_cast<Eigen::Index>(base + offset[j])] = res[static_cast<Eigen::Index>(j)];
    }
    return out;
}

std::optional<Outcome> apply_element(const PureState& s, PartyId party, const KrausElement& element) {
    const auto& layout = s.layout();
    const auto subs = layout.subsystems_of(party);
    Vector w = apply_on_subsystems(layout.subsystem_dims(), s.amplitudes(), element.op, subs);
    const double p = w.squaredNorm();
    if (!(p > kDropTol)) return std::nullopt;
    w /= std::sqrt(p);
    return Outcome{element.label, p, PureState(layout, std::move(w))};
}

LocalResult apply_local(const PureState& s, const LocalInstrument& inst) {
    const auto& layout = s.layout();
    layout.check(inst.party);
    if (inst.dim() != layout.local_dim(inst.party))
        throw Error(ErrorCode::LayoutMismatch, "instrument dimension " + std::to_string(inst.dim()) +
                                                   " does not match party '" + layout.party(inst.party).name +
                                                   "' local dimension " +
                                                   std::to_string(layout.local_dim(inst.party)));
    validate_instrument(inst);
    const auto subs = layout.subsystems_of(inst.party);
    const auto dims = layout.subsystem_dims();
    LocalResult result;
    for (const auto& e : inst.elements) {
        Vector w = apply_on_subsystems(dims, s.amplitudes(), e.op, subs);
        const double p = w.squaredNorm();
        if (!(p > kDropTol)) {
            result.dropped_mass += p;
            result.dropped_labels.push_back(e.label);
            continue;
        }
        w /= std::sqrt(p);
        result.outcomes.push_back({e.label, p, PureState(layout, std::move(w))});
    }
    return result;
}

PureState discard_subsystems(const PureState& s, std::span<const std::size_t> subsystems,
                             std::span<const std::size_t> digits) {
    const auto& layout = s.layout();
    const auto dims = layout.subsystem_dims();
    if (subsystems.size() != digits.size()) throw Error(ErrorCode::InvalidArgument, "digit count mismatch");
    std::vector<bool> drop(dims.size(), false);
    for (std::size_t t = 0; t < subsystems.size(); ++t) {
        if (subsystems[t] >= dims.size() || drop[subsystems[t]] || digits[t] >= dims[subsystems[t]])
            throw Error(ErrorCode::InvalidArgument, "invalid qudit to discard");
        drop[subsystems[t]] = true;
    }
    std::vector<std::size_t> stride(dims.size());
    std::size_t total = 1;
    for (std::size_t q = dims.size(); q-- > 0;) {
        stride[q] = total;
        total *= dims[q];
    }
    std::size_t fixed = 0;
    for (std::size_t t = 0; t < subsystems.size(); ++t) fixed += digits[t] * stride[subsystems[t]];

    std::vector<Party> parties;
    std::vector<std::size_t> kept_subs;
    std::size_t q = 0;
    for (const auto& p : layout.parties()) {
        Party np{p.name, {}};
        for (auto d : p.dims) {
            if (!drop[q]) {
                np.dims.push_back(d);
                kept_subs.push_back(q);
            }
            ++q;
        }
        if (!np.dims.empty()) parties.push_back(std::move(np));
    }
    if (parties.empty()) throw Error(ErrorCode::InvalidArgument, "cannot discard every qudit");
    RegisterLayout out_layout(std::move(parties));
    Vector out(static_cast<Eigen::Index>(out_layout.total_dim()));
    for (std::size_t j = 0; j < out_layout.total_dim(); ++j) {
        std::size_t rem = j, idx = fixed;
        for (std::size_t t = kept_subs.size(); t-- > 0;) {
            const auto sq = kept_subs[t];
            idx += (rem % dims[sq]) * stride[sq];
            rem /= dims[sq];
        }
        out[static_cast<Eigen::Index>(j)] = s.amplitudes()[static_cast<Eigen::Index>(idx)];
    }
    return PureState::normalized(std::move(out_layout), std::move(out));
}

PureState relocate_subsystem(const PureState& s, PartyId from, std::size_t slot, const std::string& to_name) {
    const auto& layout = s.layout();
    const Party& src = layout.party(from);
    if (slot >= src.dims.size()) throw Error(ErrorCode::InvalidArgument, "qudit slot out of range");
    const std::size_t moved = layout.first_subsystem(from) + slot;
    const std::size_t moved_dim = src.dims[slot];

    std::vector<Party> parties;
    std::vector<std::size_t> order;
    bool placed = false;
    std::size_t q = 0;
    for (const auto& p : layout.parties()) {
        Party np{p.name, {}};
        for (auto d : p.dims) {
            if (q != moved) {
                np.dims.push_back(d);
                order.push_back(q);
            }
            ++q;
        }
        if (p.name == to_name && !placed) {
            np.dims.push_back(moved_dim);
            order.push_back(moved);
            placed = true;
        }
        if (!np.dims.empty()) parties.push_back(std::move(np));
    }
    if (!placed) {
        parties.push_back(Party{to_name, {moved_dim}});
        order.push_back(moved);
    }
    return permute_subsystems(s, order, RegisterLayout(std::move(parties)));
}

Matrix embed_in_party(const Party& party, const Matrix& op, std::span<const std::size_t> slots) {
    const auto d = static_cast<Eigen::Index>(party.local_dim());
    Matrix out(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        Vector e = Vector::Zero(d);
        e[j] = 1.0;
        out.col(j) = apply_on_subsystems(party.dims, e, op, slots);
    }
    return out;
}

} // namespace locclab
