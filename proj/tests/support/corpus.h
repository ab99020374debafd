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

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "postlog/machine.h"
#include "postlog/rational.h"

namespace postlog::testing {

/// Path of a fixture in the machines/ directory.
std::string fixture_path(const std::string &name);
MachineSpec load_fixture(const std::string &name);

/// Canonical machine that flips T coins without moving and accepts iff the number of heads
/// lies in `accept_counts`.
MachineSpec binomial_machine(int T, const std::set<int> &accept_counts);

struct CorpusEntry {
    std::string name;
    MachineSpec spec;
    std::string input;
    int T = 0;
    int space = 0;
};

/// Canonical machines with T <= 6 used by the cross-module tests.
std::vector<CorpusEntry> canonical_corpus();

/// Canonical machines for the exact-counting recognizer, including A = 1/2 exactly.
std::vector<CorpusEntry> coeq_corpus();

/// Random well-formed PTM over input alphabet {a,b} and work alphabet {1}. Some of them
/// leave the input bounds; callers must tolerate errors from the oracle.
MachineSpec random_ptm(std::mt19937_64 &rng, int num_states);

/// random_ptm with about a quarter of the transitions redirected into a fresh nonpost state.
MachineSpec random_postptm(std::mt19937_64 &rng, int num_states);

/// Every string over `alphabet` of length at most `max_length`, shortest first.
std::vector<std::string> all_strings(const std::string &alphabet, int max_length);

/// Random input over {a,b}.
std::string random_input(std::mt19937_64 &rng, int max_length);

}  // namespace postlog::testing
