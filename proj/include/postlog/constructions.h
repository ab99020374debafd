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

#include <span>
#include <string>

#include "postlog/machine.h"
#include "postlog/rational.h"

namespace postlog {

/// Replaces the non-postselecting halt by a fair coin into accept or reject. The former
/// nonpost state becomes that one-step coin, so the result needs one extra step of budget.
/// p_acc - p_rej is preserved exactly. A machine without a nonpost state is returned unchanged.
MachineSpec postselect_to_unbounded(const MachineSpec &spec);

/// A post-selecting machine run under restart semantics: reaching `restart_state` starts the
/// whole computation again from the initial configuration.
struct RestartMachine {
    /// The source machine with its nonpost declaration removed.
    MachineSpec base;
    /// -1 when the source had no nonpost state.
    int restart_state = -1;
};

RestartMachine postselect_to_restart(const MachineSpec &spec);

struct RestartSemantics {
    /// Limiting acceptance probability p_acc / (p_acc + p_rej).
    Rational limit_acc;
    /// Expected total steps E[episode length] / (p_acc + p_rej).
    Rational expected_steps;
    /// Per-episode probability of reaching accept or reject.
    Rational halting_per_episode;
};

/// Exact restart semantics from one episode of at most `step_budget` steps. Throws
/// PostlogError when an episode can run past the budget or never accepts nor rejects.
RestartSemantics restart_semantics_exact(const RestartMachine &rm, const std::string &input, int step_budget);

/// Machine file text for a restart machine: the base machine preceded by a comment naming the
/// restart state.
std::string format_restart_machine(const RestartMachine &rm);

/// Zero-error post-selecting machine from an NTM for L and an NTM for its complement: a fair
/// coin picks one of them; N1 accepting accepts, N2 accepting rejects, anything else is
/// discarded. States are prefixed `n1.` and `n2.`. The complementarity promise (exactly one
/// of N1, N2 accepts with nonzero probability within `step_budget`) is checked on every
/// corpus input; a violation throws PostlogError.
MachineSpec combine_ntms_zero_error(const MachineSpec &n1, const MachineSpec &n2, std::span<const std::string> corpus,
                                    int step_budget);

/// NTM reading of a post-selecting machine: branches keep their weights and the
/// non-postselecting halt becomes a rejection.
MachineSpec postptm_to_ntm(const MachineSpec &spec);

}  // namespace postlog
