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

#include "postlog/constructions.h"

#include <sstream>

#include "postlog/error.h"
#include "postlog/machine_file.h"
#include "postlog/oracle.h"

namespace postlog {

namespace {

bool fair_probabilities(const MachineSpec &spec) {
    for (const auto &[key, rules] : spec.delta) {
        for (const auto &r : rules) {
            if (r.prob != 0 && r.prob != Rational(1, 2) && r.prob != 1) {
                return false;
            }
        }
    }
    return true;
}

std::string with_blank(const std::string &alphabet) {
    return std::string(1, kBlank) + alphabet;
}

// Rules with the same action at one triple are merged by adding their weights.
void merge_duplicate_actions(MachineSpec &spec) {
    for (auto &[key, rules] : spec.delta) {
        std::vector<Rule> merged;
        for (const auto &r : rules) {
            bool found = false;
            for (auto &m : merged) {
                if (m.same_action(r)) {
                    m.prob += r.prob;
                    found = true;
                    break;
                }
            }
            if (!found) {
                merged.push_back(r);
            }
        }
        rules = std::move(merged);
    }
}

}  // namespace

MachineSpec postselect_to_unbounded(const MachineSpec &spec) {
    if (!spec.nonpost) {
        return spec;
    }
    MachineSpec out = spec;
    const int split = *spec.nonpost;
    out.nonpost.reset();
    for (char sigma : with_blank(spec.input_alphabet)) {
        for (char gamma : with_blank(spec.work_alphabet)) {
            out.add_rule(split, sigma, gamma, Rule{spec.accept, gamma, 0, 0, Rational(1, 2)});
            out.add_rule(split, sigma, gamma, Rule{spec.reject, gamma, 0, 0, Rational(1, 2)});
        }
    }
    out.kind = fair_probabilities(out) ? MachineKind::ptm : MachineKind::postptm;
    return out;
}

RestartMachine postselect_to_restart(const MachineSpec &spec) {
    RestartMachine rm;
    rm.base = spec;
    if (spec.nonpost) {
        rm.restart_state = *spec.nonpost;
        rm.base.nonpost.reset();
    }
    return rm;
}

RestartSemantics restart_semantics_exact(const RestartMachine &rm, const std::string &input, int step_budget) {
    // One episode is the base machine with the restart state treated as a halt.
    MachineSpec episode = rm.base;
    if (rm.restart_state >= 0) {
        episode.nonpost = rm.restart_state;
    }
    auto run = explore(episode, input, step_budget);
    if (run.outcome.p_nonhalt != 0) {
        throw PostlogError("episode still running at step " + std::to_string(step_budget) + " with mass " +
                           format_rational(run.outcome.p_nonhalt));
    }
    Rational h = run.outcome.p_acc + run.outcome.p_rej;
    if (h == 0) {
        throw PostlogError("restart machine never halts: every episode restarts");
    }
    Rational length;
    for (const auto &ev : run.halts) {
        length += ev.mass * ev.step;
    }
    RestartSemantics out;
    out.halting_per_episode = h;
    out.limit_acc = run.outcome.p_acc / h;
    out.expected_steps = length / h;
    return out;
}

std::string format_restart_machine(const RestartMachine &rm) {
    std::string text = format_machine_file(rm.base);
    if (rm.restart_state < 0) {
        return "; restart = (none)\n" + text;
    }
    return "; restart = " + rm.base.states[rm.restart_state] + "\n" + text;
}

MachineSpec combine_ntms_zero_error(const MachineSpec &n1, const MachineSpec &n2, std::span<const std::string> corpus,
                                    int step_budget) {
    for (const MachineSpec *m : {&n1, &n2}) {
        auto findings = validate_well_formed(*m);
        if (!findings.empty()) {
            throw PostlogError("component machine is not well formed: " + findings[0].message);
        }
    }
    for (const auto &x : corpus) {
        bool a1 = run_exhaustive(n1, x, step_budget).p_acc > 0;
        bool a2 = run_exhaustive(n2, x, step_budget).p_acc > 0;
        if (a1 == a2) {
            throw PostlogError("complementarity promise violated on '" + x + "': " +
                               (a1 ? "both machines accept" : "neither machine accepts"));
        }
    }

    MachineSpec out;
    out.kind = MachineKind::postptm;
    out.initial = out.add_state("start");
    out.accept = out.add_state("acc");
    out.reject = out.add_state("rej");
    out.nonpost = out.add_state("npost");
    auto merge_alphabet = [](std::string a, const std::string &b) {
        for (char c : b) {
            if (a.find(c) == std::string::npos) {
                a += c;
            }
        }
        return a;
    };
    out.input_alphabet = merge_alphabet(n1.input_alphabet, n2.input_alphabet);
    out.work_alphabet = merge_alphabet(n1.work_alphabet, n2.work_alphabet);

    auto embed = [&](const MachineSpec &m, const std::string &prefix, int on_accept) {
        std::vector<int> map(m.num_states(), -1);
        for (int s = 0; s < (int)m.num_states(); s++) {
            if (s == m.accept) {
                map[s] = on_accept;
            } else if (m.is_halting(s)) {
                map[s] = *out.nonpost;
            } else {
                map[s] = out.add_state(prefix + m.states[s]);
            }
        }
        for (const auto &[key, rules] : m.delta) {
            if (m.is_halting(key.state)) {
                continue;
            }
            for (Rule r : rules) {
                r.next = map[r.next];
                out.add_rule(map[key.state], key.in, key.wk, r);
            }
        }
        return map[m.initial];
    };
    int start1 = embed(n1, "n1.", out.accept);
    int start2 = embed(n2, "n2.", out.reject);
    out.add_rule(out.initial, kBlank, kBlank, Rule{start1, kBlank, 0, 0, Rational(1, 2)});
    out.add_rule(out.initial, kBlank, kBlank, Rule{start2, kBlank, 0, 0, Rational(1, 2)});
    merge_duplicate_actions(out);
    return out;
}

MachineSpec postptm_to_ntm(const MachineSpec &spec) {
    MachineSpec out = spec;
    if (spec.nonpost) {
        const int np = *spec.nonpost;
        for (auto &[key, rules] : out.delta) {
            for (auto &r : rules) {
                if (r.next == np) {
                    r.next = spec.reject;
                }
            }
        }
        out.nonpost.reset();
    }
    out.kind = MachineKind::ntm;
    merge_duplicate_actions(out);
    return out;
}

}  // namespace postlog
