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

#include "locclab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace locclab {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedInput, what); }

double read_real(const Json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& text = j.get_ref<const std::string&>();
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            malformed(where + ": '" + text + "' is not a number");
        }
        if (used != text.size()) malformed(where + ": '" + text + "' is not a number");
        return v;
    }
    malformed(where + ": expected a number");
}

Complex read_complex(const Json& j, const std::string& where) {
    if (j.is_array()) {
        if (j.size() != 2) malformed(where + ": complex entries are [re, im]");
        return {read_real(j[0], where), read_real(j[1], where)};
    }
    return {read_real(j, where), 0.0};
}

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json complex_to_json(Complex z) { return Json::array({format_real(z.real()), format_real(z.imag())}); }

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) malformed(where + ": missing \"" + key + "\"");
    return j.at(key);
}

Matrix read_matrix(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) malformed(where + ": matrix must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array() || j[0].empty()) malformed(where + ": matrix rows must be arrays");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) malformed(where + ": ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = read_complex(row[static_cast<std::size_t>(c)], where);
    }
    return m;
}

Json pair_counts(const std::map<PartyPair, std::uint64_t>& counts) {
    Json out = Json::array();
    for (const auto& [pair, n] : counts) out.push_back({{"pair", {pair.first, pair.second}}, {"count", n}});
    return out;
}

} // namespace

Json state_to_json(const PureState& s) {
    Json parties = Json::array();
    for (const auto& p : s.layout().parties()) parties.push_back({{"name", p.name}, {"dims", p.dims}});
    Json amps = Json::array();
    for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) amps.push_back(complex_to_json(s.amplitudes()[i]));
    return {{"parties", parties}, {"amplitudes", amps}};
}

PureState state_from_json(const Json& j) {
    const auto& parties = field(j, "parties", "state");
    if (!parties.is_array() || parties.empty()) malformed("state: \"parties\" must be a non-empty array");
    std::vector<Party> list;
    for (const auto& p : parties) {
        const auto& name = field(p, "name", "state party");
        const auto& dims = field(p, "dims", "state party");
        if (!name.is_string()) malformed("state party: name must be a string");
        if (!dims.is_array()) malformed("state party: dims must be an array");
        Party party{name.get<std::string>(), {}};
        for (const auto& d : dims) {
            if (!d.is_number_integer() || d.get<long long>() < 2) malformed("state party '" + party.name + "': dims must be integers >= 2");
            party.dims.push_back(d.get<std::size_t>());
        }
        if (party.dims.empty()) malformed("state party '" + party.name + "': dims must be non-empty");
        list.push_back(std::move(party));
    }
    RegisterLayout layout(std::move(list));
    const auto& amps = field(j, "amplitudes", "state");
    if (!amps.is_array() || amps.size() != layout.total_dim())
        malformed("state: expected " + std::to_string(layout.total_dim()) + " amplitudes");
    Vector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) v[static_cast<Eigen::Index>(i)] = read_complex(amps[i], "state amplitude " + std::to_string(i));
    const double norm = v.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kFileNormTol)
        malformed("state: norm " + format_real(norm) + " outside 1 +/- 1e-6");
    if (std::abs(norm - 1.0) <= 1e-14) return PureState(std::move(layout), std::move(v));
    return PureState::normalized(std::move(layout), std::move(v));
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) malformed("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        malformed("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

PureState load_state(const std::filesystem::path& path) {
    try {
        return state_from_json(read_json_file(path));
    } catch (const nlohmann::json::exception& e) {
        malformed("'" + path.string() + "': " + e.what());
    }
}

void save_state(const PureState& s, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
    out << state_to_json(s).dump(2) << '\n';
}

std::size_t program_cat_budget(const Json& j) {
    if (!j.is_object() || !j.contains("cat_budget")) return 0;
    const auto& k = j.at("cat_budget");
    if (!k.is_number_integer() || k.get<long long>() < 0) malformed("program: cat_budget must be a non-negative integer");
    return k.get<std::size_t>();
}

LoccProgram program_from_json(const Json& j, const RegisterLayout& layout) {
    const Json* nodes = &j;
    if (j.is_object()) nodes = &field(j, "nodes", "program");
    if (!nodes->is_array()) malformed("program: expected an array of nodes");

    std::vector<std::string> ids;
    for (std::size_t i = 0; i < nodes->size(); ++i) {
        const auto& n = (*nodes)[i];
        if (!n.is_object()) malformed("program: nodes must be objects");
        if (n.contains("id")) {
            if (!n.at("id").is_string()) malformed("program: node ids must be strings");
            ids.push_back(n.at("id").get<std::string>());
        } else {
            ids.push_back("node" + std::to_string(i + 1));
        }
        for (std::size_t k = 0; k < i; ++k)
            if (ids[k] == ids[i]) malformed("program: duplicate node id '" + ids[i] + "'");
    }
    auto index_of = [&](const std::string& id) {
        for (std::size_t k = 0; k < ids.size(); ++k)
            if (ids[k] == id) return k;
        malformed("program: unknown node '" + id + "'");
    };

    std::vector<ProgramNode> out;
    for (std::size_t i = 0; i < nodes->size(); ++i) {
        const auto& n = (*nodes)[i];
        const std::string where = "program node '" + ids[i] + "'";
        const auto& party = field(n, "party", where);
        if (!party.is_string()) malformed(where + ": party must be a name");
        auto pid = layout.find(party.get<std::string>());
        if (!pid) malformed(where + ": unknown party '" + party.get<std::string>() + "'");
        ProgramNode node{ids[i], LocalInstrument{*pid, {}}, {}};
        const auto& elements = field(n, "elements", where);
        if (!elements.is_array()) malformed(where + ": elements must be an array");
        for (const auto& e : elements) {
            const auto& label = field(e, "label", where);
            if (!label.is_string()) malformed(where + ": labels must be strings");
            node.instrument.elements.push_back({label.get<std::string>(), read_matrix(field(e, "matrix", where), where)});
        }
        if (n.contains("branches")) {
            const auto& br = n.at("branches");
            if (!br.is_object()) malformed(where + ": branches must be an object");
            for (const auto& [label, target] : br.items()) {
                if (target.is_string()) {
                    node.branches[label] = NodeRef{index_of(target.get<std::string>())};
                } else if (target.is_object() && target.contains("halt") && target.at("halt").is_string()) {
                    const auto v = target.at("halt").get<std::string>();
                    if (v != "success" && v != "failure") malformed(where + ": halt must be \"success\" or \"failure\"");
                    node.branches[label] = Halt{v == "success" ? Verdict::Success : Verdict::Failure};
                } else {
                    malformed(where + ": branch '" + label + "' must name a node or {\"halt\": ...}");
                }
            }
        }
        out.push_back(std::move(node));
    }
    return LoccProgram(std::move(out));
}

Json program_to_json(const LoccProgram& prog, const RegisterLayout& layout) {
    Json nodes = Json::array();
    for (const auto& n : prog.nodes()) {
        Json elements = Json::array();
        for (const auto& e : n.instrument.elements) {
            Json rows = Json::array();
            for (Eigen::Index r = 0; r < e.op.rows(); ++r) {
                Json row = Json::array();
                for (Eigen::Index c = 0; c < e.op.cols(); ++c) row.push_back(complex_to_json(e.op(r, c)));
                rows.push_back(row);
            }
            elements.push_back({{"label", e.label}, {"matrix", rows}});
        }
        Json branches = Json::object();
        for (const auto& [label, next] : n.branches) {
            if (const auto* ref = std::get_if<NodeRef>(&next))
                branches[label] = prog.nodes()[ref->index].id;
            else
                branches[label] = {{"halt", verdict_name(std::get<Halt>(next).verdict)}};
        }
        nodes.push_back({{"id", n.id}, {"party", layout.party(n.instrument.party).name}, {"elements", elements}, {"branches", branches}});
    }
    return {{"nodes", nodes}};
}

std::string state_digest(const PureState& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t word) {
        for (int i = 0; i < 8; ++i) {
            h ^= (word >> (8 * i)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    auto mix_double = [&mix](double x) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &x, sizeof bits);
        mix(bits);
    };
    for (const auto& p : s.layout().parties()) {
        for (unsigned char c : p.name) mix(c);
        for (auto d : p.dims) mix(d);
    }
    for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) {
        mix_double(s.amplitudes()[i].real());
        mix_double(s.amplitudes()[i].imag());
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json ledger_to_json(const ResourceLedger& l) {
    return {{"copies_consumed", l.copies_consumed},
            {"target_copies", l.target_copies},
            {"success_probability", l.success_probability},
            {"yield_per_copy", l.yield_per_copy()},
            {"epr_consumed", pair_counts(l.epr_consumed)},
            {"epr_consumed_total", l.total_epr_consumed()},
            {"epr_produced", pair_counts(l.epr_produced)},
            {"epr_produced_total", l.total_epr_produced()},
            {"cats_consumed", l.cats_consumed},
            {"cats_produced", l.cats_produced},
            {"cbits_sent", l.cbits_sent}};
}

Json trace_to_json(const ProtocolTrace& t) {
    Json branches = Json::array();
    for (const auto& b : t.branches)
        branches.push_back({{"path", b.path_string()}, {"probability", b.probability}, {"verdict", verdict_name(b.verdict)}, {"cbits", b.cbits}});
    return {{"total_success_probability", t.total_success_probability},
            {"dropped_mass", t.dropped_mass},
            {"max_cbits", t.max_cbits},
            {"branches", branches}};
}

Json yield_to_json(const YieldEstimate& y) {
    return {{"point", y.point}, {"ci_low", y.ci_low}, {"ci_high", y.ci_high}, {"successes", y.successes}, {"trials", y.trials}, {"seed", y.seed}};
}

Json audit_to_json(const AuditReport& a) {
    auto rows = [](const std::vector<CutAuditRow>& v) {
        Json out = Json::array();
        for (const auto& r : v)
            out.push_back({{"node", r.node}, {"path", r.path}, {"cut", r.cut}, {"probability", r.probability}, {"pre", r.pre}, {"post", r.post}, {"violation", r.violation}});
        return out;
    };
    return {{"kind", a.kind}, {"pass", a.pass}, {"max_violation", a.max_violation}, {"tolerance", a.tolerance},
            {"per_cut", rows(a.per_cut)}, {"violations", rows(a.violations)}};
}

Json stages_to_json(const std::vector<StageRecord>& stages) {
    Json out = Json::array();
    for (const auto& s : stages)
        out.push_back({{"description", s.description}, {"first", s.first}, {"second", s.second}, {"probability", s.probability}, {"copies", s.copies}});
    return out;
}

} // namespace locclab
