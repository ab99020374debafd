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

#include <gtest/gtest.h>

#include "postlog/error.h"
#include "postlog/machine_file.h"
#include "postlog/oracle.h"
#include "support/brute_force.h"
#include "support/corpus.h"

using namespace postlog;
using namespace postlog::testing;

TEST(oracle, two_coin_machine) {
    auto d = run_exhaustive(load_fixture("d1.pm"), "a", 2);
    EXPECT_EQ(d.p_acc, Rational(3, 4));
    EXPECT_EQ(d.p_rej, Rational(1, 4));
    EXPECT_EQ(d.p_npost, 0);
    EXPECT_EQ(d.p_nonhalt, 0);
}

TEST(oracle, truncated_budget_leaves_running_mass) {
    auto d = run_exhaustive(load_fixture("d1.pm"), "a", 1);
    EXPECT_EQ(d.p_nonhalt, 1);
    EXPECT_EQ(d.p_acc, 0);
}

TEST(oracle, deterministic_accept) {
    auto d = run_exhaustive(load_fixture("det_acc.pm"), "a", 1);
    EXPECT_EQ(d.p_acc, 1);
}

TEST(oracle, postselected_episode) {
    auto d = run_exhaustive(load_fixture("episode.pm"), "", 3);
    EXPECT_EQ(d.p_acc, Rational(1, 8));
    EXPECT_EQ(d.p_rej, Rational(3, 8));
    EXPECT_EQ(d.p_npost, Rational(1, 2));
    auto [acc, rej] = postselect_normalize(d);
    EXPECT_EQ(acc, Rational(1, 4));
    EXPECT_EQ(rej, Rational(3, 4));
}

TEST(oracle, postselect_normalize_edge_cases) {
    auto d = run_exhaustive(load_fixture("post_half.pm"), "a", 1);
    auto [acc, rej] = postselect_normalize(d);
    EXPECT_EQ(acc, 1);
    EXPECT_EQ(rej, 0);

    OutcomeDistribution all_np{0, 0, 1, 0};
    EXPECT_THROW(postselect_normalize(all_np), PostlogError);
    OutcomeDistribution running{Rational(1, 2), 0, 0, Rational(1, 2)};
    EXPECT_THROW(postselect_normalize(running), PostlogError);
}

TEST(oracle, errors_are_reported) {
    // Undefined triple on a live path.
    MachineSpec m = load_fixture("d1.pm");
    m.delta.erase(RuleKey{m.state_index("q1"), '#', '#'});
    EXPECT_THROW(run_exhaustive(m, "a", 2), PostlogError);

    // Input head leaves [0, n+1].
    MachineSpec left = load_fixture("d1.pm");
    left.delta[RuleKey{left.initial, '#', '#'}][1].d_in = -1;
    EXPECT_THROW(run_exhaustive(left, "a", 2), PostlogError);

    // Symbol outside the input alphabet.
    EXPECT_THROW(run_exhaustive(load_fixture("d1.pm"), "b", 2), PostlogError);
}

TEST(oracle, space_cap_is_enforced) {
    MachineSpec m = load_fixture("tape_coin.pm");
    OracleLimits limits;
    limits.space_cap = 0;
    EXPECT_THROW(run_exhaustive(m, "ab", 4, limits), PostlogError);
    limits.space_cap = 2;
    EXPECT_EQ(run_exhaustive(m, "ab", 4, limits).p_acc, Rational(3, 4));
}

TEST(oracle, explore_records_halts_and_visits) {
    auto run = explore(load_fixture("d1.pm"), "a", 2);
    Rational total;
    for (const auto &h : run.halts) {
        EXPECT_EQ(h.step, 2);
        EXPECT_TRUE(h.config.tape_clean());
        total += h.mass;
    }
    EXPECT_EQ(total, 1);
    EXPECT_EQ(run.visited.size(), 3u);
}

TEST(oracle_property, outcomes_sum_to_one_and_methods_agree) {
    std::mt19937_64 rng(20261015);
    int checked = 0;
    for (int trial = 0; trial < 300; trial++) {
        MachineSpec m = random_ptm(rng, 1 + trial % 4);
        std::string x = random_input(rng, 3);
        int budget = 1 + trial % 7;
        OutcomeDistribution a;
        try {
            a = run_exhaustive(m, x, budget);
        } catch (const PostlogError &) {
            EXPECT_THROW(run_exhaustive_paths(m, x, budget), PostlogError);
            continue;
        }
        checked++;
        EXPECT_EQ(a.p_acc + a.p_rej + a.p_npost + a.p_nonhalt, 1);
        EXPECT_GE(a.p_acc, 0);
        EXPECT_GE(a.p_rej, 0);
        EXPECT_GE(a.p_nonhalt, 0);
        EXPECT_EQ(run_exhaustive_paths(m, x, budget), a);
        auto ref = brute_force_outcome(m, x, budget);
        EXPECT_EQ(ref.accept, a.p_acc);
        EXPECT_EQ(ref.reject, a.p_rej);
        EXPECT_EQ(ref.running, a.p_nonhalt);
    }
    EXPECT_GT(checked, 100);
}

TEST(oracle_property, corpus_matches_brute_force) {
    for (const auto &e : canonical_corpus()) {
        auto a = run_exhaustive(e.spec, e.input, e.T);
        auto ref = brute_force_outcome(e.spec, e.input, e.T);
        EXPECT_EQ(a.p_acc, ref.accept) << e.name;
        EXPECT_EQ(a.p_nonhalt, 0) << e.name;
    }
}
