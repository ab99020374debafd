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

#include "postlog/canonical.h"
#include "postlog/error.h"
#include "postlog/oracle.h"
#include "support/corpus.h"

using namespace postlog;
using namespace postlog::testing;

namespace {

bool has_tag(const CanonicalReport &r, const std::string &tag) {
    for (const auto &f : r.violations) {
        if (f.tag == tag) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST(check_canonical, fixtures) {
    EXPECT_TRUE(check_canonical(load_fixture("d1.pm"), "a", 2).is_canonical);
    EXPECT_TRUE(check_canonical(load_fixture("tape_coin.pm"), "ab", 4).is_canonical);

    auto late = check_canonical(load_fixture("d1.pm"), "a", 3);
    EXPECT_FALSE(late.is_canonical);
    EXPECT_TRUE(has_tag(late, kWrongHaltTime));

    auto early = check_canonical(load_fixture("d1.pm"), "a", 1);
    EXPECT_TRUE(has_tag(early, kWrongHaltTime));

    auto det = check_canonical(load_fixture("det_acc.pm"), "a", 1);
    EXPECT_TRUE(has_tag(det, kNonSplitting));

    auto walk = check_canonical(load_fixture("counter_walk.pm"), "a", 4);
    EXPECT_TRUE(has_tag(walk, kNonBinaryAlphabet));

    auto scan = check_canonical(load_fixture("scan_a.pm"), "ab", 8);
    EXPECT_FALSE(scan.is_canonical);
}

TEST(check_canonical, corpus_is_canonical) {
    for (const auto &e : canonical_corpus()) {
        auto r = check_canonical(e.spec, e.input, e.T);
        EXPECT_TRUE(r.is_canonical) << e.name << ": "
                                    << (r.violations.empty() ? "" : r.violations[0].message);
    }
}

TEST(check_canonical, dirty_tape_and_extra_halts) {
    MachineSpec dirty = load_fixture("d1.pm");
    for (auto &r : dirty.delta[RuleKey{dirty.state_index("q1"), '#', '#'}]) {
        r.write = '1';
    }
    EXPECT_TRUE(has_tag(check_canonical(dirty, "a", 2), kDirtyHalt));

    MachineSpec parked = load_fixture("d1.pm");
    for (auto &r : parked.delta[RuleKey{parked.state_index("q1"), 'a', '#'}]) {
        r.d_in = 0;
    }
    EXPECT_TRUE(has_tag(check_canonical(parked, "a", 2), kMultipleHalting));
}

TEST(canonicalize, deterministic_accept) {
    std::vector<std::string> probes{"a"};
    MachineSpec c = canonicalize(load_fixture("det_acc.pm"), 4, 1, probes);
    EXPECT_TRUE(check_canonical(c, "a", 4).is_canonical);
    EXPECT_EQ(run_exhaustive(c, "a", 4).p_acc, 1);
}

TEST(canonicalize, clock_too_short) {
    std::vector<std::string> probes{"a"};
    try {
        canonicalize(load_fixture("det_acc.pm"), 1, 1, probes);
        FAIL() << "expected an error";
    } catch (const PostlogError &e) {
        EXPECT_NE(std::string(e.what()).find("T=1"), std::string::npos);
    }
}

TEST(canonicalize, preserves_acceptance_on_probes) {
    std::vector<std::string> probes{"ab", "ba", "a", ""};
    MachineSpec scan = load_fixture("scan_a.pm");
    MachineSpec c = canonicalize(scan, 8, 1, probes);
    for (const auto &x : probes) {
        EXPECT_TRUE(check_canonical(c, x, 8).is_canonical) << x;
        EXPECT_EQ(run_exhaustive(c, x, 8).p_acc, run_exhaustive(scan, x, 8).p_acc) << x;
    }
}

TEST(canonicalize, block_encodes_large_alphabet) {
    std::vector<std::string> probes{"a", ""};
    MachineSpec walk = load_fixture("counter_walk.pm");
    EXPECT_EQ(canonical_work_cells(walk, 2), 4);
    MachineSpec c = canonicalize(walk, 20, 2, probes);
    EXPECT_EQ(c.work_alphabet, "1");
    for (const auto &x : probes) {
        EXPECT_TRUE(check_canonical(c, x, 20).is_canonical) << x;
        EXPECT_EQ(run_exhaustive(c, x, 20).p_acc, run_exhaustive(walk, x, 20).p_acc) << x;
    }
    EXPECT_THROW(canonicalize(walk, 16, 2, probes), PostlogError);
}

TEST(canonicalize, rejects_bad_inputs) {
    std::vector<std::string> probes{"a"};
    EXPECT_THROW(canonicalize(load_fixture("d1.pm"), 0, 1, probes), PostlogError);
    EXPECT_THROW(canonicalize(load_fixture("d1.pm"), 4, 0, probes), PostlogError);
    EXPECT_THROW(canonicalize(load_fixture("episode.pm"), 4, 1, probes), PostlogError);
    std::vector<std::string> none;
    EXPECT_THROW(canonicalize(load_fixture("d1.pm"), 4, 1, none), PostlogError);
}
