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

#include <stdexcept>
#include <string>

namespace locclab {

enum class ErrorCode {
    InvalidArgument,
    MalformedInput,
    InvalidProgram,
    LayoutMismatch,
    InvalidSubset,
    IncompleteInstrument,
    DimensionLimit,
    BranchExplosion,
    CopyBudgetExceeded,
    NotEntangled,
    NotIrreducible,
    NotFactorizable,
    NotACatState,
    NoEprAvailable,
    UnsupportedDimension,
    BasisSearchExhausted,
};

/// Stable name used in reports, CLI messages and the C API.
const char* error_name(ErrorCode code) noexcept;

/// Exception type thrown by every operation in the library. The message is
/// prefixed with the error name, e.g. "NotEntangled: Schmidt rank 1 across A|B".
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace locclab
