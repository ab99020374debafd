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
#include <vector>

#include "postlog/machine.h"

namespace postlog {

/// Result of checking the normal form the compiler expects: every live step is a fair
/// two-way split, the work tape is binary, and every path halts at exactly the clock value in
/// one of two clean configurations (state accept/reject, blank tape, both heads on cell 0).
struct CanonicalReport {
    bool is_canonical = true;
    std::vector<Finding> violations;
};

/// Violation tags reported by check_canonical.
inline constexpr const char *kNonBinaryAlphabet = "non-binary-work-alphabet";
inline constexpr const char *kZeroBlank = "zero-blank-distinguished";
inline constexpr const char *kNonSplitting = "non-splitting-step";
inline constexpr const char *kDirtyHalt = "dirty-tape-halt";
inline constexpr const char *kMultipleHalting = "multiple-halting-configurations";
inline constexpr const char *kWrongHaltTime = "wrong-halting-time";
inline constexpr const char *kRunError = "run-error";

/// Checks the normal form by an exhaustive run to depth `clock` on `input`.
///
/// The configuration encoding stores one bit per work cell, with bit 0 read back as the blank.
/// A work alphabet containing '0' is accepted only when the machine cannot tell '0' from '#'.
CanonicalReport check_canonical(const MachineSpec &spec, const std::string &input, int clock);

/// Rewrites a PTM with probabilities in {0,1/2,1} into canonical form for `clock`:
///  - deterministic steps become dummy splits (two identical rules at 1/2);
///  - elapsed time and the work-head cell live in the finite control, so every path halts at
///    exactly step `clock`;
///  - work symbols are block-encoded over {#,1}, ceil(log2(|Γ|+1)) cells per original cell;
///  - a halting routine erases cells [0, width) and parks both heads on cell 0.
///
/// Every probe input is checked: the source must halt within `clock` steps inside
/// `space_bound` cells, and the result must be canonical with identical acceptance probability.
/// Throws PostlogError otherwise. Inputs outside the probe set are not certified.
MachineSpec canonicalize(const MachineSpec &spec, int clock, int space_bound, std::span<const std::string> probes);

/// Number of work cells the canonical form of `spec` uses for `space_bound` source cells.
int canonical_work_cells(const MachineSpec &spec, int space_bound);

}  // namespace postlog
