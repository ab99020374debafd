// Copyright 2026 The Postlog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "postlog/machine.h"
#include "postlog/rational.h"

namespace postlog {

/// Exact outcome probabilities of a run cut off at a step budget.
/// Invariant: the four components are nonnegative and sum to exactly 1.
struct OutcomeDistribution {
    Rational p_acc;
    Rational p_rej;
    Rational p_npost;
    Rational p_nonhalt;

    bool operator==(const OutcomeDistribution &) const = default;
};

struct OracleLimits {
    /// Maximum number of work-tape cells a configuration may span.
    size_t space_cap = 64;
};

/// Full machine snapshot used by the oracle. The work tape is stored trimmed of blanks on
/// both ends, so equal snapshots compare equal.
struct RawConfig {
    int state = 0;
    int h_in = 0;
    int h_wk = 0;
    int tape_lo = 0;
    std::string tape;

    auto operator<=>(const RawConfig &) const = default;

    char cell(int pos) const;
    bool tape_clean() const {
        return tape.empty();
    }
};

struct HaltEvent {
    int step = 0;
    RawConfig config;
    Rational mass;
};

/// Everything the distribution-propagating oracle learns in one run.
struct ExhaustiveRun {
    OutcomeDistribution outcome;
    /// Halting mass aggregated by (step, configuration), in step order.
    std::vector<HaltEvent> halts;
    /// Every triple evaluated from a live configuration.
    std::set<RuleKey> visited;
};

/// Propagates the exact configuration distribution for `step_budget` steps.
/// Throws PostlogError on a head-bound violation (naming a path prefix), an undefined triple
/// on a live path, a work-tape span beyond `limits.space_cap`, or a symbol outside Σ.
ExhaustiveRun explore(const MachineSpec &spec, const std::string &input, int step_budget,
                      const OracleLimits &limits = {});

/// Exact outcome distribution (distribution propagation).
OutcomeDistribution run_exhaustive(const MachineSpec &spec, const std::string &input, int step_budget,
                                   const OracleLimits &limits = {});

/// Same quantity by depth-first enumeration of individual computation paths.
OutcomeDistribution run_exhaustive_paths(const MachineSpec &spec, const std::string &input, int step_budget,
                                         const OracleLimits &limits = {});

/// (p_acc, p_rej) renormalized over the post-selected event. Throws PostlogError when the
/// event has probability 0 or mass is still running.
std::pair<Rational, Rational> postselect_normalize(const OutcomeDistribution &d);

}  // namespace postlog
