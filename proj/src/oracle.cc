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

#include "postlog/oracle.h"

#include <algorithm>
#include <map>

#include "postlog/error.h"

namespace postlog {

char RawConfig::cell(int pos) const {
    int off = pos - tape_lo;
    if (off < 0 || off >= (int)tape.size()) {
        return kBlank;
    }
    return tape[off];
}

namespace {

char input_cell(const std::string &input, int pos) {
    if (pos <= 0 || pos > (int)input.size()) {
        return kBlank;
    }
    return input[pos - 1];
}

void write_cell(RawConfig &c, int pos, char sym) {
    if (c.tape.empty()) {
        if (sym == kBlank) {
            return;
        }
        c.tape_lo = pos;
        c.tape = std::string(1, sym);
        return;
    }
    if (pos < c.tape_lo) {
        if (sym == kBlank) {
            return;
        }
        c.tape.insert(0, std::string(c.tape_lo - pos, kBlank));
        c.tape_lo = pos;
    } else if (pos >= c.tape_lo + (int)c.tape.size()) {
        if (sym == kBlank) {
            return;
        }
        c.tape.append(pos - c.tape_lo - c.tape.size() + 1, kBlank);
    }
    c.tape[pos - c.tape_lo] = sym;
    size_t first = c.tape.find_first_not_of(kBlank);
    if (first == std::string::npos) {
        c.tape.clear();
        c.tape_lo = 0;
        return;
    }
    size_t last = c.tape.find_last_not_of(kBlank);
    c.tape = c.tape.substr(first, last - first + 1);
    c.tape_lo += (int)first;
}

size_t span_cells(const RawConfig &c) {
    int lo = c.h_wk;
    int hi = c.h_wk;
    if (!c.tape.empty()) {
        lo = std::min(lo, c.tape_lo);
        hi = std::max(hi, c.tape_lo + (int)c.tape.size() - 1);
    }
    return (size_t)(hi - lo + 1);
}

void check_input(const MachineSpec &spec, const std::string &input) {
    for (char c : input) {
        if (c == kBlank || spec.input_alphabet.find(c) == std::string::npos) {
            throw PostlogError(std::string("input symbol '") + c + "' not in the input alphabet");
        }
    }
}

// Applies one rule; validates bounds. `path` is only used for diagnostics.
RawConfig apply_rule(const MachineSpec &spec, const std::string &input, const RawConfig &c, const Rule &r, int step,
                     const std::string &path, const OracleLimits &limits) {
    RawConfig next = c;
    write_cell(next, c.h_wk, r.write);
    next.state = r.next;
    next.h_in = c.h_in + r.d_in;
    next.h_wk = c.h_wk + r.d_wk;
    if (next.h_in < 0 || next.h_in > (int)input.size() + 1) {
        throw PostlogError("input head leaves [0," + std::to_string(input.size() + 1) + "] at step " +
                           std::to_string(step) + " after path prefix [" + path + "] from state " +
                           spec.states[c.state]);
    }
    if (span_cells(next) > limits.space_cap) {
        throw PostlogError("work tape exceeds the space cap of " + std::to_string(limits.space_cap) +
                           " cells at step " + std::to_string(step) + " after path prefix [" + path + "]");
    }
    return next;
}

const std::vector<Rule> &rules_or_throw(const MachineSpec &spec, const RawConfig &c, char sigma, char gamma,
                                        const std::string &path) {
    const auto *rules = spec.rules(c.state, sigma, gamma);
    if (rules == nullptr || rules->empty()) {
        throw PostlogError("no rule for " + spec.describe(RuleKey{c.state, sigma, gamma}) +
                           " reached after path prefix [" + path + "]");
    }
    return *rules;
}

void add_halt(OutcomeDistribution &out, const MachineSpec &spec, int state, const Rational &mass) {
    if (state == spec.accept) {
        out.p_acc += mass;
    } else if (state == spec.reject) {
        out.p_rej += mass;
    } else {
        out.p_npost += mass;
    }
}

std::string extend_path(const std::string &path, size_t choice) {
    return path.empty() ? std::to_string(choice) : path + "." + std::to_string(choice);
}

}  // namespace

ExhaustiveRun explore(const MachineSpec &spec, const std::string &input, int step_budget, const OracleLimits &limits) {
    check_input(spec, input);
    ExhaustiveRun run;
    struct Live {
        Rational mass;
        std::string path;
    };
    std::map<RawConfig, Live> live;
    RawConfig start;
    start.state = spec.initial;
    if (spec.is_halting(start.state)) {
        add_halt(run.outcome, spec, start.state, 1);
        run.halts.push_back(HaltEvent{0, start, 1});
        return run;
    }
    live.emplace(start, Live{1, ""});
    for (int step = 1; step <= step_budget && !live.empty(); step++) {
        std::map<RawConfig, Live> next;
        std::map<RawConfig, Rational> halted;
        for (const auto &[c, lv] : live) {
            char sigma = input_cell(input, c.h_in);
            char gamma = c.cell(c.h_wk);
            run.visited.insert(RuleKey{c.state, sigma, gamma});
            const auto &rules = rules_or_throw(spec, c, sigma, gamma, lv.path);
            for (size_t k = 0; k < rules.size(); k++) {
                const Rule &r = rules[k];
                if (r.prob == 0) {
                    continue;
                }
                std::string path = extend_path(lv.path, k);
                RawConfig nc = apply_rule(spec, input, c, r, step, path, limits);
                Rational m = lv.mass * r.prob;
                if (spec.is_halting(nc.state)) {
                    halted[nc] += m;
                    continue;
                }
                auto it = next.find(nc);
                if (it == next.end()) {
                    next.emplace(std::move(nc), Live{m, std::move(path)});
                } else {
                    it->second.mass += m;
                }
            }
        }
        for (auto &[c, m] : halted) {
            add_halt(run.outcome, spec, c.state, m);
            run.halts.push_back(HaltEvent{step, c, m});
        }
        live = std::move(next);
    }
    for (const auto &[c, lv] : live) {
        run.outcome.p_nonhalt += lv.mass;
    }
    return run;
}

OutcomeDistribution run_exhaustive(const MachineSpec &spec, const std::string &input, int step_budget,
                                   const OracleLimits &limits) {
    return explore(spec, input, step_budget, limits).outcome;
}

OutcomeDistribution run_exhaustive_paths(const MachineSpec &spec, const std::string &input, int step_budget,
                                         const OracleLimits &limits) {
    check_input(spec, input);
    OutcomeDistribution out;
    RawConfig start;
    start.state = spec.initial;
    // Explicit stack keeps deep budgets off the call stack.
    struct Frame {
        RawConfig config;
        Rational mass;
        int step;
        std::string path;
    };
    std::vector<Frame> stack;
    stack.push_back(Frame{start, 1, 0, ""});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (spec.is_halting(f.config.state)) {
            add_halt(out, spec, f.config.state, f.mass);
            continue;
        }
        if (f.step == step_budget) {
            out.p_nonhalt += f.mass;
            continue;
        }
        char sigma = input_cell(input, f.config.h_in);
        char gamma = f.config.cell(f.config.h_wk);
        const auto &rules = rules_or_throw(spec, f.config, sigma, gamma, f.path);
        for (size_t k = rules.size(); k-- > 0;) {
            const Rule &r = rules[k];
            if (r.prob == 0) {
                continue;
            }
            std::string path = extend_path(f.path, k);
            RawConfig nc = apply_rule(spec, input, f.config, r, f.step + 1, path, limits);
            stack.push_back(Frame{std::move(nc), f.mass * r.prob, f.step + 1, std::move(path)});
        }
    }
    return out;
}

std::pair<Rational, Rational> postselect_normalize(const OutcomeDistribution &d) {
    if (d.p_nonhalt != 0) {
        throw PostlogError("post-selection needs a halting run; p_nonhalt = " + format_rational(d.p_nonhalt));
    }
    Rational h = d.p_acc + d.p_rej;
    if (h == 0) {
        throw PostlogError("post-selection event has probability 0");
    }
    return {d.p_acc / h, d.p_rej / h};
}

}  // namespace postlog
