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

#include "corpus.h"

#include "postlog/canonical.h"
#include "postlog/machine_file.h"

namespace postlog::testing {

std::string fixture_path(const std::string &name) {
    return std::string(POSTLOG_MACHINE_DIR) + "/" + name;
}

MachineSpec load_fixture(const std::string &name) {
    return load_machine_file(fixture_path(name));
}

MachineSpec binomial_machine(int T, const std::set<int> &accept_counts) {
    MachineSpec m;
    m.kind = MachineKind::ptm;
    m.input_alphabet = "a";
    m.work_alphabet = "1";
    std::vector<std::vector<int>> c(T);
    for (int t = 0; t < T; t++) {
        for (int k = 0; k <= t; k++) {
            c[t].push_back(m.add_state("c" + std::to_string(t) + "_" + std::to_string(k)));
        }
    }
    m.initial = c[0][0];
    m.accept = m.add_state("acc");
    m.reject = m.add_state("rej");
    auto target = [&](int t, int k) {
        if (t == T) {
            return accept_counts.count(k) ? m.accept : m.reject;
        }
        return c[t][k];
    };
    for (int t = 0; t < T; t++) {
        for (int k = 0; k <= t; k++) {
            for (char sigma : std::string("#a")) {
                m.add_rule(c[t][k], sigma, kBlank, Rule{target(t + 1, k + 1), kBlank, 0, 0, Rational(1, 2)});
                m.add_rule(c[t][k], sigma, kBlank, Rule{target(t + 1, k), kBlank, 0, 0, Rational(1, 2)});
            }
        }
    }
    return m;
}

std::vector<CorpusEntry> canonical_corpus() {
    std::vector<CorpusEntry> out;
    out.push_back({"d1", load_fixture("d1.pm"), "a", 2, 1});
    MachineSpec tape = load_fixture("tape_coin.pm");
    out.push_back({"tape_coin_ab", tape, "ab", 4, 2});
    out.push_back({"tape_coin_b", tape, "b", 4, 2});
    std::vector<std::string> probes{"a"};
    out.push_back({"det_acc_canonical", canonicalize(load_fixture("det_acc.pm"), 4, 1, probes), "a", 4, 1});
    out.push_back({"binomial_3_013", binomial_machine(3, {0, 1, 3}), "", 3, 1});
    out.push_back({"binomial_2_0", binomial_machine(2, {0}), "", 2, 1});
    out.push_back({"binomial_4_4", binomial_machine(4, {4}), "a", 4, 1});
    out.push_back({"binomial_5_23", binomial_machine(5, {2, 3}), "", 5, 1});
    out.push_back({"binomial_6_ge3", binomial_machine(6, {3, 4, 5, 6}), "", 6, 1});
    out.push_back({"binomial_6_06", binomial_machine(6, {0, 6}), "a", 6, 1});
    out.push_back({"binomial_2_all", binomial_machine(2, {0, 1, 2}), "", 2, 1});
    return out;
}

std::vector<CorpusEntry> coeq_corpus() {
    std::vector<CorpusEntry> out;
    out.push_back({"d1", load_fixture("d1.pm"), "a", 2, 1});
    out.push_back({"binomial_3_013", binomial_machine(3, {0, 1, 3}), "", 3, 1});
    out.push_back({"binomial_2_0", binomial_machine(2, {0}), "", 2, 1});
    out.push_back({"binomial_3_012", binomial_machine(3, {0, 1, 2}), "", 3, 1});
    out.push_back({"binomial_4_none", binomial_machine(4, {}), "", 4, 1});
    out.push_back({"binomial_3_01", binomial_machine(3, {0, 1}), "", 3, 1});
    out.push_back({"binomial_4_02", binomial_machine(4, {0, 2, 4}), "", 4, 1});
    out.push_back({"binomial_1_1", binomial_machine(1, {1}), "", 1, 1});
    return out;
}

MachineSpec random_ptm(std::mt19937_64 &rng, int num_states) {
    MachineSpec m;
    m.kind = MachineKind::ptm;
    m.input_alphabet = "ab";
    m.work_alphabet = "1";
    for (int s = 0; s < num_states; s++) {
        m.add_state("s" + std::to_string(s));
    }
    m.initial = 0;
    m.accept = m.add_state("acc");
    m.reject = m.add_state("rej");
    const int total = (int)m.num_states();
    std::uniform_int_distribution<int> state_dist(0, total - 1);
    std::uniform_int_distribution<int> move_dist(-1, 1);
    std::uniform_int_distribution<int> coin(0, 1);
    auto random_rule = [&](const Rational &p) {
        Rule r;
        r.next = state_dist(rng);
        r.write = coin(rng) ? '1' : kBlank;
        r.d_in = move_dist(rng);
        r.d_wk = move_dist(rng);
        r.prob = p;
        return r;
    };
    for (int s = 0; s < num_states; s++) {
        for (char sigma : std::string("#ab")) {
            for (char gamma : std::string("#1")) {
                if (coin(rng)) {
                    m.add_rule(s, sigma, gamma, random_rule(Rational(1)));
                } else {
                    m.add_rule(s, sigma, gamma, random_rule(Rational(1, 2)));
                    m.add_rule(s, sigma, gamma, random_rule(Rational(1, 2)));
                }
            }
        }
    }
    return m;
}

MachineSpec random_postptm(std::mt19937_64 &rng, int num_states) {
    MachineSpec m = random_ptm(rng, num_states);
    m.kind = MachineKind::postptm;
    m.nonpost = m.add_state("np");
    for (auto &[key, rules] : m.delta) {
        for (auto &r : rules) {
            if (rng() % 4 == 0) {
                r.next = *m.nonpost;
            }
        }
    }
    return m;
}

std::vector<std::string> all_strings(const std::string &alphabet, int max_length) {
    std::vector<std::string> out{""};
    for (size_t i = 0; i < out.size(); i++) {
        if ((int)out[i].size() < max_length) {
            for (char c : alphabet) {
                out.push_back(out[i] + c);
            }
        }
    }
    return out;
}

std::string random_input(std::mt19937_64 &rng, int max_length) {
    std::uniform_int_distribution<int> len(0, max_length);
    std::uniform_int_distribution<int> coin(0, 1);
    std::string s;
    int n = len(rng);
    for (int i = 0; i < n; i++) {
        s += coin(rng) ? 'a' : 'b';
    }
    return s;
}

}  // namespace postlog::testing
