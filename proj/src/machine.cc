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

#include "postlog/machine.h"

#include <algorithm>

namespace postlog {

std::string_view kind_name(MachineKind kind) {
    switch (kind) {
        case MachineKind::dtm:
            return "dtm";
        case MachineKind::ntm:
            return "ntm";
        case MachineKind::ptm:
            return "ptm";
        case MachineKind::postptm:
            return "postptm";
    }
    return "?";
}

std::optional<MachineKind> parse_kind(std::string_view name) {
    for (auto k : {MachineKind::dtm, MachineKind::ntm, MachineKind::ptm, MachineKind::postptm}) {
        if (kind_name(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

int MachineSpec::state_index(std::string_view name) const {
    auto it = std::find(states.begin(), states.end(), name);
    return it == states.end() ? -1 : (int)(it - states.begin());
}

int MachineSpec::add_state(std::string name) {
    int existing = state_index(name);
    if (existing >= 0) {
        return existing;
    }
    states.push_back(std::move(name));
    return (int)states.size() - 1;
}

bool MachineSpec::is_halting(int state) const {
    return state == accept || state == reject || (nonpost.has_value() && state == *nonpost);
}

bool MachineSpec::is_input_symbol(char c) const {
    return c == kBlank || input_alphabet.find(c) != std::string::npos;
}

bool MachineSpec::is_work_symbol(char c) const {
    return c == kBlank || work_alphabet.find(c) != std::string::npos;
}

const std::vector<Rule> *MachineSpec::rules(int state, char in, char wk) const {
    auto it = delta.find(RuleKey{state, in, wk});
    return it == delta.end() ? nullptr : &it->second;
}

void MachineSpec::add_rule(int state, char in, char wk, Rule rule) {
    delta[RuleKey{state, in, wk}].push_back(std::move(rule));
}

std::string MachineSpec::describe(const RuleKey &key) const {
    std::string s = "(";
    s += key.state >= 0 && key.state < (int)states.size() ? states[key.state] : "?";
    s += ",";
    s += key.in;
    s += ",";
    s += key.wk;
    s += ")";
    return s;
}

std::vector<Finding> validate_well_formed(const MachineSpec &spec) {
    std::vector<Finding> out;
    auto add = [&](std::string tag, std::string message) {
        out.push_back(Finding{std::move(tag), std::move(message)});
    };
    int m = (int)spec.num_states();
    auto valid_state = [&](int s) {
        return s >= 0 && s < m;
    };

    if (!valid_state(spec.initial) || !valid_state(spec.accept) || !valid_state(spec.reject)) {
        add("states", "initial, accept and reject must name declared states");
        return out;
    }
    if (spec.accept == spec.reject) {
        add("halting-states", "accept and reject states coincide");
    }
    if (spec.nonpost.has_value()) {
        if (spec.kind != MachineKind::postptm) {
            add("halting-states", "nonpost state declared for a machine that is not a postptm");
        }
        if (!valid_state(*spec.nonpost)) {
            add("states", "nonpost must name a declared state");
        } else if (*spec.nonpost == spec.accept || *spec.nonpost == spec.reject) {
            add("halting-states", "nonpost state coincides with accept or reject");
        }
    }
    if (spec.is_halting(spec.initial)) {
        add("halting-states", "initial state is a halting state");
    }

    bool initial_has_rules = false;
    for (const auto &[key, rules] : spec.delta) {
        std::string where = spec.describe(key);
        if (!valid_state(key.state)) {
            add("states", "rule from undeclared state at " + where);
            continue;
        }
        if (key.state == spec.initial && !rules.empty()) {
            initial_has_rules = true;
        }
        if (spec.is_halting(key.state)) {
            add("halting-transition", "transition leaves halting state at " + where);
        }
        if (!spec.is_input_symbol(key.in)) {
            add("unknown-symbol", std::string("input symbol '") + key.in + "' not in alphabet at " + where);
        }
        if (!spec.is_work_symbol(key.wk)) {
            add("unknown-symbol", std::string("work symbol '") + key.wk + "' not in alphabet at " + where);
        }
        Rational mass = 0;
        for (const auto &r : rules) {
            mass += r.prob;
            if (!valid_state(r.next)) {
                add("states", "rule targets undeclared state at " + where);
            }
            if (!spec.is_work_symbol(r.write)) {
                add("unknown-symbol", std::string("written symbol '") + r.write + "' not in alphabet at " + where);
            }
            if (r.d_in < -1 || r.d_in > 1 || r.d_wk < -1 || r.d_wk > 1) {
                add("head-move", "head move outside {-1,0,+1} at " + where);
            }
            if (r.prob < 0 || r.prob > 1) {
                add("probability-range", "probability " + format_rational(r.prob) + " outside [0,1] at " + where);
            } else if (spec.kind == MachineKind::ptm && r.prob != 0 && r.prob != Rational(1, 2) && r.prob != 1) {
                add("probability-range", "probability not in {0,1/2,1} at " + where);
            } else if (spec.kind == MachineKind::dtm && r.prob != 0 && r.prob != 1) {
                add("probability-range", "probability not in {0,1} at " + where);
            }
        }
        if (mass != 1) {
            add("probability-mass", "probability mass " + format_rational(mass) + " ≠ 1 at " + where);
        }
    }
    if (!initial_has_rules) {
        add("no-initial-rules", "initial state has no outgoing rules");
    }
    return out;
}

}  // namespace postlog
