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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "postlog/rational.h"

namespace postlog {

inline constexpr char kBlank = '#';

enum class MachineKind { dtm, ntm, ptm, postptm };

std::string_view kind_name(MachineKind kind);
std::optional<MachineKind> parse_kind(std::string_view name);

/// One weighted alternative of the transition function: next state, symbol written under the
/// work head, head moves, and the exact probability of taking it.
struct Rule {
    int next = 0;
    char write = kBlank;
    int d_in = 0;
    int d_wk = 0;
    Rational prob;

    bool same_action(const Rule &other) const {
        return next == other.next && write == other.write && d_in == other.d_in && d_wk == other.d_wk;
    }
};

/// Left-hand side of a rule: (state, input symbol, work symbol).
struct RuleKey {
    int state = 0;
    char in = kBlank;
    char wk = kBlank;

    auto operator<=>(const RuleKey &) const = default;
};

/// Space-bounded Turing machine with two tapes and exact-rational branching. The same record
/// describes DTMs, NTMs (nonzero-probability semantics), PTMs, and post-selecting PTMs.
///
/// A rule list may be partial: triples without rules are legal until a run reaches them.
/// Two identical rules at 1/2 each denote a dummy coin split whose branches coincide.
struct MachineSpec {
    MachineKind kind = MachineKind::ptm;
    std::vector<std::string> states;
    int initial = -1;
    int accept = -1;
    int reject = -1;
    std::optional<int> nonpost;
    std::string input_alphabet;
    std::string work_alphabet;
    std::map<RuleKey, std::vector<Rule>> delta;

    size_t num_states() const {
        return states.size();
    }
    int state_index(std::string_view name) const;
    int add_state(std::string name);
    bool is_halting(int state) const;
    bool is_input_symbol(char c) const;
    bool is_work_symbol(char c) const;

    /// Rules for a triple, or nullptr when the triple is undefined.
    const std::vector<Rule> *rules(int state, char in, char wk) const;
    void add_rule(int state, char in, char wk, Rule rule);

    /// "(s,σ,γ)" with state names, used in findings and errors.
    std::string describe(const RuleKey &key) const;
};

struct Finding {
    std::string tag;
    std::string message;
};

/// Structural and probabilistic well-formedness. An empty result means well formed. Findings
/// are data; this never throws.
std::vector<Finding> validate_well_formed(const MachineSpec &spec);

}  // namespace postlog
