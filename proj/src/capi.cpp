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

#include "locclab/locclab.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "locclab/runner.hpp"
#include "locclab/states.hpp"

struct locclab_state {
    locclab::PureState state;
};

namespace {

static_assert(LOCCLAB_BASIS_SEARCH_EXHAUSTED == static_cast<int>(locclab::ErrorCode::BasisSearchExhausted) + 1,
              "status values mirror ErrorCode shifted by one");

thread_local std::string last_error;

locclab_status status_of(locclab::ErrorCode code) {
    using locclab::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidArgument: return LOCCLAB_INVALID_ARGUMENT;
    case ErrorCode::MalformedInput: return LOCCLAB_MALFORMED_INPUT;
    case ErrorCode::InvalidProgram: return LOCCLAB_INVALID_PROGRAM;
    case ErrorCode::LayoutMismatch: return LOCCLAB_LAYOUT_MISMATCH;
    case ErrorCode::InvalidSubset: return LOCCLAB_INVALID_SUBSET;
    case ErrorCode::IncompleteInstrument: return LOCCLAB_INCOMPLETE_INSTRUMENT;
    case ErrorCode::DimensionLimit: return LOCCLAB_DIMENSION_LIMIT;
    case ErrorCode::BranchExplosion: return LOCCLAB_BRANCH_EXPLOSION;
    case ErrorCode::CopyBudgetExceeded: return LOCCLAB_COPY_BUDGET_EXCEEDED;
    case ErrorCode::NotEntangled: return LOCCLAB_NOT_ENTANGLED;
    case ErrorCode::NotIrreducible: return LOCCLAB_NOT_IRREDUCIBLE;
    case ErrorCode::NotFactorizable: return LOCCLAB_NOT_FACTORIZABLE;
    case ErrorCode::NotACatState: return LOCCLAB_NOT_A_CAT_STATE;
    case ErrorCode::NoEprAvailable: return LOCCLAB_NO_EPR_AVAILABLE;
    case ErrorCode::UnsupportedDimension: return LOCCLAB_UNSUPPORTED_DIMENSION;
    case ErrorCode::BasisSearchExhausted: return LOCCLAB_BASIS_SEARCH_EXHAUSTED;
    }
    return LOCCLAB_INTERNAL_ERROR;
}

template <class F>
locclab_status guarded(F&& f) {
    try {
        f();
        last_error.clear();
        return LOCCLAB_OK;
    } catch (const locclab::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return LOCCLAB_INTERNAL_ERROR;
    } catch (const std::exception& e) {
        last_error = std::string("internal error: ") + e.what();
        return LOCCLAB_INTERNAL_ERROR;
    }
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool ok, const char* what) {
    if (!ok) throw locclab::Error(locclab::ErrorCode::InvalidArgument, what);
}

std::string text_or_empty(const char* s) { return s ? s : ""; }

} // namespace

extern "C" {

const char* locclab_status_name(locclab_status status) {
    switch (status) {
    case LOCCLAB_OK: return "Ok";
    case LOCCLAB_INTERNAL_ERROR: return "InternalError";
    default:
        if (status > LOCCLAB_OK && status < LOCCLAB_INTERNAL_ERROR)
            return locclab::error_name(static_cast<locclab::ErrorCode>(status - 1));
        return "Unknown";
    }
}

int locclab_status_exit_code(locclab_status status) {
    if (status == LOCCLAB_OK) return 0;
    if (status > LOCCLAB_OK && status < LOCCLAB_INTERNAL_ERROR)
        return locclab::exit_code_for(static_cast<locclab::ErrorCode>(status - 1));
    return 1;
}

const char* locclab_last_error(void) { return last_error.c_str(); }

locclab_status locclab_state_load(const char* path, locclab_state** out) {
    return guarded([&] {
        require(path && out, "null argument");
        *out = new locclab_state{locclab::load_state(path)};
    });
}

locclab_status locclab_state_from_json(const char* json, locclab_state** out) {
    return guarded([&] {
        require(json && out, "null argument");
        locclab::Json j;
        try {
            j = locclab::Json::parse(json);
        } catch (const nlohmann::json::exception& e) {
            throw locclab::Error(locclab::ErrorCode::MalformedInput, e.what());
        }
        *out = new locclab_state{locclab::state_from_json(j)};
    });
}

locclab_status locclab_state_generate(const char* kind, size_t parties, const size_t* dims, size_t num_dims, uint64_t seed,
                                      locclab_state** out) {
    return guarded([&] {
        require(kind && out && (dims || num_dims == 0), "null argument");
        std::vector<std::size_t> d(dims, dims + num_dims);
        *out = new locclab_state{locclab::generate_state(kind, parties, d, seed)};
    });
}

locclab_status locclab_state_to_json(const locclab_state* state, char** json) {
    return guarded([&] {
        require(state && json, "null argument");
        *json = copy_string(locclab::state_to_json(state->state).dump());
    });
}

locclab_status locclab_state_save(const locclab_state* state, const char* path) {
    return guarded([&] {
        require(state && path, "null argument");
        locclab::save_state(state->state, path);
    });
}

void locclab_state_free(locclab_state* state) { delete state; }

size_t locclab_state_num_parties(const locclab_state* state) { return state ? state->state.num_parties() : 0; }

size_t locclab_state_dim(const locclab_state* state) { return state ? state->state.dim() : 0; }

locclab_status locclab_entropy_across_cut(const locclab_state* state, const size_t* parties, size_t count, double* entropy) {
    return guarded([&] {
        require(state && entropy && (parties || count == 0), "null argument");
        std::vector<locclab::PartyId> ids;
        for (size_t i = 0; i < count; ++i) {
            require(parties[i] < state->state.num_parties(), "party index out of range");
            ids.push_back(locclab::PartyId{parties[i]});
        }
        *entropy = locclab::entropy_across_cut(state->state, locclab::Cut(ids, state->state.num_parties()));
    });
}

locclab_status locclab_is_irreducible(const locclab_state* state, int* irreducible) {
    return guarded([&] {
        require(state && irreducible, "null argument");
        *irreducible = locclab::is_irreducible(state->state) ? 1 : 0;
    });
}

locclab_status locclab_fidelity(const locclab_state* a, const locclab_state* b, double* fidelity) {
    return guarded([&] {
        require(a && b && fidelity, "null argument");
        *fidelity = locclab::fidelity(a->state, b->state);
    });
}

locclab_run_config locclab_run_config_default(void) {
    locclab_run_config c;
    std::memset(&c, 0, sizeof c);
    c.trials = 100000;
    c.format = "json";
    return c;
}

locclab_status locclab_run(const locclab_run_config* config, char** report) {
    return guarded([&] {
        require(config && report && config->command, "null argument");
        require(config->dims || config->num_dims == 0, "null dims");
        locclab::RunConfig rc;
        rc.command = locclab::parse_command(config->command);
        rc.state_path = text_or_empty(config->state_path);
        rc.protocol_path = text_or_empty(config->protocol_path);
        rc.seed = config->seed;
        rc.trials = config->trials;
        rc.output_path = text_or_empty(config->output_path);
        const std::string format = text_or_empty(config->format);
        require(format.empty() || format == "json" || format == "csv", "format must be json or csv");
        rc.format = format == "csv" ? locclab::Format::Csv : locclab::Format::Json;
        if (config->pair && *config->pair) {
            std::stringstream in(config->pair);
            std::string item;
            while (std::getline(in, item, ',')) rc.pair.push_back(item);
            require(rc.pair.size() == 2, "pair must read P1,P2");
        }
        if (config->copies) rc.copies = config->copies;
        rc.site = text_or_empty(config->site);
        rc.kind = text_or_empty(config->kind);
        rc.parties = config->parties;
        rc.dims.assign(config->dims, config->dims + config->num_dims);
        *report = copy_string(locclab::run(rc));
    });
}

void locclab_string_free(char* s) { std::free(s); }

const char* locclab_version(void) { return "0.1.0"; }

} // extern "C"
