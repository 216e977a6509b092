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

#include "locclab/errors.hpp"

namespace locclab {

const char* error_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::InvalidProgram: return "InvalidProgram";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::InvalidSubset: return "InvalidSubset";
    case ErrorCode::IncompleteInstrument: return "IncompleteInstrument";
    case ErrorCode::DimensionLimit: return "DimensionLimit";
    case ErrorCode::BranchExplosion: return "BranchExplosion";
    case ErrorCode::CopyBudgetExceeded: return "CopyBudgetExceeded";
    case ErrorCode::NotEntangled: return "NotEntangled";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NotFactorizable: return "NotFactorizable";
    case ErrorCode::NotACatState: return "NotACatState";
    case ErrorCode::NoEprAvailable: return "NoEprAvailable";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::BasisSearchExhausted: return "BasisSearchExhausted";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code),
      detail_(detail) {}

} // namespace locclab
