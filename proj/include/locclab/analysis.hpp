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

#include "locclab/decomp.hpp"
#include "locclab/locc.hpp"

namespace locclab {

inline constexpr std::size_t kMinYieldTrials = 100;
inline constexpr double kAuditTol = 1e-7;

struct YieldEstimate {
    double point = 0.0;
    /// 95% normal-approximation interval, clamped to [0, 1].
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::uint64_t seed = 0;
};

YieldEstimate yield_from_counts(std::size_t successes, std::size_t trials, std::uint64_t seed);
/// Throws InvalidArgument for fewer than kMinYieldTrials trials.
YieldEstimate monte_carlo_yield(const LoccProgram& prog, const PureState& s, std::size_t trials, std::uint64_t seed);

/// One line of an audit table. For the monotone audit `pre` is the entropy
/// before a step and `post` the outcome-averaged entropy after it; for the
/// factorizability audit each row is a final branch.
struct CutAuditRow {
    std::string node;
    std::string path;
    std::string cut;
    double probability = 0.0;
    double pre = 0.0;
    double post = 0.0;
    double violation = 0.0;
};

struct AuditReport {
    std::string kind;
    std::vector<CutAuditRow> per_cut;
    /// Rows whose violation exceeds the tolerance.
    std::vector<CutAuditRow> violations;
    double max_violation = 0.0;
    double tolerance = kAuditTol;
    bool pass = true;
};

/// Checks sum_k p_k E(post_k) <= E(pre) + tol for every reached step and every canonical cut.
AuditReport monotone_audit(const LoccProgram& prog, const PureState& s, std::size_t branch_guard = kDefaultBranchGuard);

/// Requires `s` factorizable across `cut` (NotFactorizable otherwise) and checks
/// that every final branch stays factorizable across it.
AuditReport factorizability_audit(const LoccProgram& prog, const PureState& s, const Cut& cut);

} // namespace locclab
