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

#include "postlog/canonical.h"

#include <bit>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "postlog/error.h"
#include "postlog/oracle.h"

namespace postlog {

namespace {

std::vector<Rule> blank_normalized(const std::vector<Rule> *rules) {
    std::vector<Rule> out;
    if (rules == nullptr) {
        return out;
    }
    for (Rule r : *rules) {
        if (r.write == '0') {
            r.write = kBlank;
        }
        out.push_back(r);
    }
    return out;
}

bool same_rules(const std::vector<Rule> &a, const std::vector<Rule> &b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (size_t k = 0; k < a.size(); k++) {
        if (!a[k].same_action(b[k]) || a[k].prob != b[k].prob) {
            return false;
        }
    }
    return true;
}

bool clean_cells(const RawConfig &c) {
    for (char ch : c.tape) {
        if (ch != kBlank && ch != '0') {
            return false;
        }
    }
    return true;
}

}  // namespace

CanonicalReport check_canonical(const MachineSpec &spec, const std::string &input, int clock) {
    CanonicalReport report;
    auto add = [&](const char *tag, std::string msg) {
        report.violations.push_back(Finding{tag, std::move(msg)});
    };

    for (char c : spec.work_alphabet) {
        if (c != '0' && c != '1') {
            add(kNonBinaryAlphabet, std::string("work symbol '") + c + "' outside {0,1}");
        }
    }
    if (spec.work_alphabet.find('0') != std::string::npos) {
        std::string in_symbols = std::string(1, kBlank) + spec.input_alphabet;
        for (int s = 0; s < (int)spec.num_states(); s++) {
            for (char sigma : in_symbols) {
                auto zero = blank_normalized(spec.rules(s, sigma, '0'));
                auto blank = blank_normalized(spec.rules(s, sigma, kBlank));
                if (!zero.empty() && !same_rules(zero, blank)) {
                    add(kZeroBlank, "rules at " + spec.describe(RuleKey{s, sigma, '0'}) + " differ from " +
                                        spec.describe(RuleKey{s, sigma, kBlank}));
                }
            }
        }
    }

    ExhaustiveRun run;
    try {
        run = explore(spec, input, clock);
    } catch (const PostlogError &e) {
        add(kRunError, e.what());
        report.is_canonical = false;
        return report;
    }

    for (const auto &key : run.visited) {
        const auto *rules = spec.rules(key.state, key.in, key.wk);
        int live = 0;
        bool fair = true;
        for (const auto &r : *rules) {
            if (r.prob == 0) {
                continue;
            }
            live++;
            fair &= r.prob == Rational(1, 2);
        }
        if (live != 2 || !fair) {
            add(kNonSplitting, "non-splitting step at " + spec.describe(key));
        }
    }

    std::set<int> wrong_times;
    std::set<RawConfig> halting_configs;
    for (const auto &h : run.halts) {
        if (h.step != clock) {
            wrong_times.insert(h.step);
        }
        if (h.config.h_in != 0 || h.config.h_wk != 0 || !clean_cells(h.config)) {
            add(kDirtyHalt, "halt in " + spec.states[h.config.state] + " at step " + std::to_string(h.step) +
                                " without a clean tape and parked heads");
        }
        if (h.config.state != spec.accept && h.config.state != spec.reject) {
            add(kMultipleHalting, "halt in non-postselecting state " + spec.states[h.config.state]);
        }
        RawConfig norm = h.config;
        if (clean_cells(norm)) {
            norm.tape.clear();
            norm.tape_lo = 0;
        }
        halting_configs.insert(norm);
    }
    if (halting_configs.size() > 2) {
        add(kMultipleHalting, std::to_string(halting_configs.size()) + " distinct halting configurations");
    }
    for (int t : wrong_times) {
        add(kWrongHaltTime, "halting time " + std::to_string(t) + " ≠ T=" + std::to_string(clock));
    }
    if (run.outcome.p_nonhalt != 0) {
        add(kWrongHaltTime, "mass " + format_rational(run.outcome.p_nonhalt) + " still running at T=" +
                                std::to_string(clock));
    }
    report.is_canonical = report.violations.empty();
    return report;
}

// ---------------------------------------------------------------------------------------------
// canonicalize

namespace {

enum class Phase : uint8_t { read, write, move, clean, idle };
// Where the input head is: cell 0, a cell holding an input symbol, or cell |x|+1.
enum class InCls : uint8_t { zero, inner, end };

struct Key {
    Phase phase = Phase::read;
    int t = 0;
    int orig = -1;
    int sub = 0;
    int bits = 0;
    int dir = 0;
    int wk = 0;
    InCls in_cls = InCls::zero;
    int in_move = 0;
    int verdict = -1;
    bool work_done = false;

    auto operator<=>(const Key &) const = default;
};

// The class of the current input cell follows from the previous class, the last move and the
// symbol now under the head. nullopt marks combinations that cannot occur.
std::optional<InCls> resolve(InCls prev, int move, char sigma) {
    bool blank = sigma == kBlank;
    if (move == 0) {
        bool consistent = (prev == InCls::inner) != blank;
        return consistent ? std::optional<InCls>(prev) : std::nullopt;
    }
    if (!blank) {
        return InCls::inner;
    }
    if (move > 0) {
        return InCls::end;
    }
    return InCls::zero;
}

enum class Special { none, accept, reject, sink_time, sink_space, sink_input };

struct Target {
    Special special = Special::none;
    Key key;
};

struct Action {
    Target target;
    int write_bit = 0;
    int d_in = 0;
    int d_wk = 0;
};

class Canonicalizer {
   public:
    Canonicalizer(const MachineSpec &spec, int clock, int space_bound)
        : src_(spec), clock_(clock), space_bound_(space_bound) {
        int gamma = (int)spec.work_alphabet.size();
        block_ = std::max(1, (int)std::bit_width((unsigned)gamma));
        width_ = block_ * space_bound;
    }

    MachineSpec build() {
        Key start;
        start.phase = Phase::read;
        start.orig = src_.initial;
        intern(start);
        while (!queue_.empty()) {
            Key k = queue_.front();
            queue_.pop_front();
            expand(k);
        }
        return assemble();
    }

    int width() const {
        return width_;
    }

   private:
    int code_of(char sym) const {
        if (sym == kBlank) {
            return 0;
        }
        return (int)src_.work_alphabet.find(sym) + 1;
    }

    std::optional<char> symbol_of(int code) const {
        if (code == 0) {
            return kBlank;
        }
        if (code - 1 < (int)src_.work_alphabet.size()) {
            return src_.work_alphabet[code - 1];
        }
        return std::nullopt;
    }

    int intern(const Key &k) {
        auto it = ids_.find(k);
        if (it != ids_.end()) {
            return it->second;
        }
        int id = (int)keys_.size();
        ids_.emplace(k, id);
        keys_.push_back(k);
        queue_.push_back(k);
        return id;
    }

    Target after_source_step(int next_orig, const Key &base) const {
        Key k;
        if (src_.is_halting(next_orig)) {
            k.phase = Phase::clean;
            k.verdict = next_orig == src_.accept ? 0 : 1;
            k.dir = +1;
        } else {
            k.phase = Phase::read;
            k.orig = next_orig;
        }
        k.t = base.t;
        return Target{Special::none, k};
    }

    // Fills in time, head bookkeeping and the overflow sinks.
    Action finish(const Key &from, InCls cls, Action a) const {
        if ((a.d_in < 0 && cls == InCls::zero) || (a.d_in > 0 && cls == InCls::end)) {
            return Action{Target{Special::sink_input, {}}, a.write_bit, 0, 0};
        }
        int wk = from.wk + a.d_wk;
        if (wk < 0 || wk >= width_) {
            return Action{Target{Special::sink_space, {}}, a.write_bit, a.d_in, 0};
        }
        bool terminal = a.target.special == Special::accept || a.target.special == Special::reject;
        if (from.t + 1 >= clock_ && !terminal) {
            return Action{Target{Special::sink_time, {}}, a.write_bit, a.d_in, a.d_wk};
        }
        if (!terminal && a.target.special == Special::none) {
            a.target.key.t = from.t + 1;
            a.target.key.wk = wk;
            a.target.key.in_cls = cls;
            a.target.key.in_move = a.d_in;
        }
        return a;
    }

    std::vector<Action> step(const Key &k, InCls cls, char sigma, int bit) const {
        std::vector<Action> out;
        switch (k.phase) {
            case Phase::read: {
                if (k.sub < block_ - 1) {
                    Key n;
                    n.phase = Phase::read;
                    n.orig = k.orig;
                    n.sub = k.sub + 1;
                    n.bits = k.bits | (bit << k.sub);
                    out.push_back(finish(k, cls, Action{Target{Special::none, n}, bit, 0, +1}));
                    break;
                }
                int code = k.bits | (bit << k.sub);
                auto sym = symbol_of(code);
                if (!sym) {
                    break;
                }
                const auto *rules = src_.rules(k.orig, sigma, *sym);
                if (rules == nullptr) {
                    break;
                }
                for (const auto &r : *rules) {
                    if (r.prob == 0) {
                        continue;
                    }
                    int new_code = code_of(r.write);
                    int top = (new_code >> (block_ - 1)) & 1;
                    if (block_ == 1) {
                        out.push_back(finish(k, cls, Action{after_source_step(r.next, k), top, r.d_in, r.d_wk}));
                    } else {
                        Key n;
                        n.phase = Phase::write;
                        n.orig = r.next;
                        n.sub = block_ - 2;
                        n.bits = new_code;
                        n.dir = r.d_wk;
                        out.push_back(finish(k, cls, Action{Target{Special::none, n}, top, r.d_in, -1}));
                    }
                }
                break;
            }
            case Phase::write: {
                int b = (k.bits >> k.sub) & 1;
                if (k.sub > 0) {
                    Key n = k;
                    n.sub = k.sub - 1;
                    out.push_back(finish(k, cls, Action{Target{Special::none, n}, b, 0, -1}));
                } else if (k.dir == 0 || block_ == 1) {
                    out.push_back(finish(k, cls, Action{after_source_step(k.orig, k), b, 0, k.dir}));
                } else {
                    Key n;
                    n.phase = Phase::move;
                    n.orig = k.orig;
                    n.sub = block_ - 1;
                    n.dir = k.dir;
                    out.push_back(finish(k, cls, Action{Target{Special::none, n}, b, 0, k.dir}));
                }
                break;
            }
            case Phase::move: {
                if (k.sub > 1) {
                    Key n = k;
                    n.sub = k.sub - 1;
                    out.push_back(finish(k, cls, Action{Target{Special::none, n}, bit, 0, k.dir}));
                } else {
                    out.push_back(finish(k, cls, Action{after_source_step(k.orig, k), bit, 0, k.dir}));
                }
                break;
            }
            case Phase::clean: {
                int d_wk = 0;
                int dir = k.dir;
                bool done = k.work_done;
                if (!done) {
                    if (dir > 0 && k.wk < width_ - 1) {
                        d_wk = +1;
                    } else if (k.wk > 0) {
                        d_wk = -1;
                        dir = -1;
                    } else {
                        done = true;
                    }
                }
                int d_in = cls == InCls::zero ? 0 : -1;
                Target target;
                if (done && d_in == 0) {
                    if (k.t + 1 == clock_) {
                        target.special = k.verdict == 0 ? Special::accept : Special::reject;
                    } else {
                        target.key.phase = Phase::idle;
                        target.key.verdict = k.verdict;
                    }
                } else {
                    target.key.phase = Phase::clean;
                    target.key.verdict = k.verdict;
                    target.key.dir = dir;
                    target.key.work_done = done;
                }
                out.push_back(finish(k, cls, Action{target, 0, d_in, d_wk}));
                break;
            }
            case Phase::idle: {
                Target target;
                if (k.t + 1 == clock_) {
                    target.special = k.verdict == 0 ? Special::accept : Special::reject;
                } else {
                    target.key.phase = Phase::idle;
                    target.key.verdict = k.verdict;
                }
                out.push_back(finish(k, cls, Action{target, 0, 0, 0}));
                break;
            }
        }
        return out;
    }

    struct PendingRule {
        int from;
        char sigma;
        char gamma;
        Action action;
        Rational prob;
    };

    void expand(const Key &k) {
        int from = ids_.at(k);
        std::string sigmas = std::string(1, kBlank) + src_.input_alphabet;
        for (char sigma : sigmas) {
            auto cls = resolve(k.in_cls, k.in_move, sigma);
            if (!cls) {
                continue;
            }
            for (int bit = 0; bit < 2; bit++) {
                auto actions = step(k, *cls, sigma, bit);
                if (actions.empty()) {
                    continue;
                }
                if (actions.size() == 1) {
                    actions.push_back(actions[0]);
                }
                if (actions.size() != 2) {
                    throw PostlogError("canonicalize requires at most two branches per step");
                }
                for (auto &a : actions) {
                    if (a.target.special == Special::none) {
                        intern(a.target.key);
                    } else {
                        specials_used_.insert(a.target.special);
                    }
                    rules_.push_back(PendingRule{from, sigma, bit ? '1' : kBlank, a, Rational(1, 2)});
                }
            }
        }
    }

    static const char *cls_name(InCls c) {
        return c == InCls::zero ? "z" : c == InCls::inner ? "i" : "e";
    }

    std::string name_of(const Key &k) const {
        std::ostringstream s;
        static const char *phases[] = {"R", "W", "M", "C", "I"};
        s << phases[(int)k.phase] << ".t" << k.t;
        if (k.orig >= 0) {
            s << "." << src_.states[k.orig];
        }
        if (k.verdict >= 0) {
            s << (k.verdict == 0 ? ".acc" : ".rej");
        }
        s << ".s" << k.sub << ".b" << k.bits << ".d" << (k.dir < 0 ? "m" : k.dir > 0 ? "p" : "0") << ".w" << k.wk
          << "." << cls_name(k.in_cls) << (k.in_move < 0 ? "m" : k.in_move > 0 ? "p" : "0");
        if (k.work_done) {
            s << ".done";
        }
        return s.str();
    }

    MachineSpec assemble() const {
        MachineSpec out;
        out.kind = MachineKind::ptm;
        out.input_alphabet = src_.input_alphabet;
        out.work_alphabet = "1";
        for (const auto &k : keys_) {
            out.states.push_back(name_of(k));
        }
        out.initial = 0;
        std::map<Special, int> special_ids;
        out.accept = out.add_state("acc");
        out.reject = out.add_state("rej");
        special_ids[Special::accept] = out.accept;
        special_ids[Special::reject] = out.reject;
        const std::pair<Special, const char *> sinks[] = {{Special::sink_time, "overflow.time"},
                                                          {Special::sink_space, "overflow.space"},
                                                          {Special::sink_input, "overflow.input"}};
        for (auto [sp, name] : sinks) {
            if (specials_used_.count(sp)) {
                special_ids[sp] = out.add_state(name);
            }
        }
        for (const auto &pr : rules_) {
            Rule r;
            r.next = pr.action.target.special == Special::none ? ids_.at(pr.action.target.key)
                                                               : special_ids.at(pr.action.target.special);
            r.write = pr.action.write_bit ? '1' : kBlank;
            r.d_in = pr.action.d_in;
            r.d_wk = pr.action.d_wk;
            r.prob = pr.prob;
            out.add_rule(pr.from, pr.sigma, pr.gamma, r);
        }
        // Sinks spin in place forever so the machine stays well formed.
        std::string sigmas = std::string(1, kBlank) + src_.input_alphabet;
        for (auto [sp, name] : sinks) {
            if (!specials_used_.count(sp)) {
                continue;
            }
            int s = special_ids.at(sp);
            for (char sigma : sigmas) {
                for (char gamma : {kBlank, '1'}) {
                    Rule r{s, gamma, 0, 0, Rational(1, 2)};
                    out.add_rule(s, sigma, gamma, r);
                    out.add_rule(s, sigma, gamma, r);
                }
            }
        }
        return out;
    }

    const MachineSpec &src_;
    int clock_;
    int space_bound_;
    int block_ = 1;
    int width_ = 1;
    std::map<Key, int> ids_;
    std::vector<Key> keys_;
    std::deque<Key> queue_;
    std::vector<PendingRule> rules_;
    std::set<Special> specials_used_;
};

}  // namespace

int canonical_work_cells(const MachineSpec &spec, int space_bound) {
    int block = std::max(1, (int)std::bit_width((unsigned)spec.work_alphabet.size()));
    return block * space_bound;
}

MachineSpec canonicalize(const MachineSpec &spec, int clock, int space_bound, std::span<const std::string> probes) {
    if (clock <= 0 || space_bound <= 0) {
        throw PostlogError("canonicalize needs a positive clock and space bound");
    }
    if (spec.kind != MachineKind::ptm && spec.kind != MachineKind::dtm) {
        throw PostlogError("canonicalize expects a ptm or dtm");
    }
    auto findings = validate_well_formed(spec);
    if (!findings.empty()) {
        throw PostlogError("canonicalize needs a well-formed machine: " + findings[0].message);
    }
    for (const auto &[key, rules] : spec.delta) {
        int live = 0;
        for (const auto &r : rules) {
            if (r.prob != 0 && r.prob != Rational(1, 2) && r.prob != 1) {
                throw PostlogError("canonicalize requires probabilities in {0,1/2,1} at " + spec.describe(key));
            }
            live += r.prob != 0;
        }
        if (live > 2) {
            throw PostlogError("canonicalize requires at most two branches at " + spec.describe(key));
        }
    }
    if (probes.empty()) {
        throw PostlogError("canonicalize needs at least one probe input");
    }

    Canonicalizer builder(spec, clock, space_bound);
    MachineSpec out = builder.build();

    OracleLimits limits;
    limits.space_cap = (size_t)space_bound;
    for (const auto &x : probes) {
        auto before = run_exhaustive(spec, x, clock, limits);
        if (before.p_nonhalt != 0) {
            throw PostlogError("machine does not halt within T=" + std::to_string(clock) + " steps on probe '" + x +
                               "' (running mass " + format_rational(before.p_nonhalt) + ")");
        }
        auto run = explore(out, x, clock);
        for (const auto &key : run.visited) {
            const std::string &name = out.states[key.state];
            if (name == "overflow.time") {
                throw PostlogError("canonical form exceeds clock T=" + std::to_string(clock) + " on probe '" + x + "'");
            }
            if (name == "overflow.space") {
                throw PostlogError("machine exceeds space bound " + std::to_string(space_bound) + " on probe '" + x +
                                   "'");
            }
            if (name == "overflow.input") {
                throw PostlogError("input head leaves its range on probe '" + x + "'");
            }
        }
        if (run.outcome.p_nonhalt != 0) {
            throw PostlogError("canonical form needs more than T=" + std::to_string(clock) + " steps on probe '" + x +
                               "'");
        }
        auto report = check_canonical(out, x, clock);
        if (!report.is_canonical) {
            throw PostlogError("canonical form check failed on probe '" + x + "': " + report.violations[0].message);
        }
        if (run.outcome.p_acc != before.p_acc) {
            throw PostlogError("canonicalize changed the acceptance probability on probe '" + x + "'");
        }
    }
    return out;
}

}  // namespace postlog
