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

#include <random>

#include "postlog/config_space.h"
#include "postlog/error.h"
#include "postlog/oracle.h"
#include "postlog/prob_circuit.h"
#include "support/corpus.h"

using namespace postlog;
using namespace postlog::testing;

namespace {

// Reference application of a deterministic or reset gate to a basis state.
uint64_t apply_reference(uint64_t wires, const Gate &g) {
    if (g.kind == GateKind::reset) {
        uint64_t bit = uint64_t{1} << g.targets[0];
        return g.value ? (wires | bit) : (wires & ~bit);
    }
    size_t row = 0;
    for (size_t i = 0; i < g.targets.size(); i++) {
        row |= ((wires >> g.targets[i]) & 1) << i;
    }
    uint64_t out = wires;
    for (size_t i = 0; i < g.targets.size(); i++) {
        uint64_t bit = uint64_t{1} << g.targets[i];
        out = ((g.table[row] >> i) & 1) ? (out | bit) : (out & ~bit);
    }
    return out;
}

uint64_t apply_all(uint64_t wires, const std::vector<Gate> &gates) {
    for (const auto &g : gates) {
        wires = apply_reference(wires, g);
    }
    return wires;
}

uint64_t bit(int w) {
    return uint64_t{1} << w;
}

}  // namespace

TEST(gate, universal_gates) {
    Gate a = Gate::and_gate(0, 1);
    EXPECT_EQ(apply_reference(bit(0) | bit(1), a), bit(0) | bit(1));
    EXPECT_EQ(apply_reference(bit(1), a), 0u);
    EXPECT_EQ(apply_reference(bit(0), a), bit(0));
    Gate o = Gate::or_gate(0, 1);
    EXPECT_EQ(apply_reference(bit(0), o), bit(0) | bit(1));
    EXPECT_EQ(apply_reference(0, o), 0u);
    EXPECT_EQ(classify_universal(a), UniversalKind::and_gate);
    EXPECT_EQ(classify_universal(o), UniversalKind::or_gate);
    EXPECT_EQ(classify_universal(Gate::not_gate(3)), UniversalKind::not_gate);
    EXPECT_EQ(classify_universal(Gate::coin(0)), UniversalKind::coin);
    EXPECT_EQ(classify_universal(Gate::reset(2, 1)), UniversalKind::reset);
    EXPECT_EQ(classify_universal(Gate::det({0, 1}, {0, 1, 2, 3})), UniversalKind::other);
}

TEST(gate, matrix_and_properties) {
    Gate n = Gate::not_gate(0);
    EXPECT_EQ(n.matrix(), (std::vector<std::vector<int>>{{0, 1}, {1, 0}}));
    EXPECT_TRUE(n.is_injective());
    EXPECT_FALSE(n.is_identity());
    Gate a = Gate::and_gate(0, 1);
    EXPECT_FALSE(a.is_injective());
    auto m = a.matrix();
    for (int in = 0; in < 4; in++) {
        int ones = 0;
        for (int out = 0; out < 4; out++) {
            ones += m[out][in];
        }
        EXPECT_EQ(ones, 1);
    }
    EXPECT_TRUE(Gate::det({0, 1}, {0, 1, 2, 3}).is_identity());
    EXPECT_THROW(Gate::det({0, 0}, {0, 1, 2, 3}), PostlogError);
    EXPECT_THROW(Gate::det({0, 1}, {0, 1, 2}), PostlogError);
}

TEST(compile_part, moves_only_the_matching_configuration) {
    auto layout = ConfigLayout::make(4, 1, 2);
    Configuration cj{1, 2, "10", 1};
    Configuration heads{2, 1, "11", 0};
    Configuration tails{3, 0, "00", 1};
    auto part = compile_part(layout, cj, heads, tails);
    ASSERT_EQ((int)part.size(), 3 * layout.length() + 3);

    auto reg = [&](const Configuration &c) {
        return register_mask(encode_configuration_value(c, layout), layout.length());
    };
    // Open block, matching register.
    EXPECT_EQ(apply_all(bit(kBlockControlWire) | reg(cj), part), reg(heads));
    EXPECT_EQ(apply_all(bit(kRandomWire) | bit(kBlockControlWire) | reg(cj), part), bit(kRandomWire) | reg(tails));
    // Open block, other register: nothing changes.
    Configuration other{0, 2, "10", 1};
    EXPECT_EQ(apply_all(bit(kBlockControlWire) | reg(other), part), bit(kBlockControlWire) | reg(other));
    // Closed block: nothing changes.
    EXPECT_EQ(apply_all(reg(cj), part), reg(cj));
}

TEST(compile_blocks, structure) {
    auto P = build_configuration_matrix(load_fixture("d1.pm"), "a", 1);
    auto K = compile_blocks(P, 2);
    const int l = P.space.layout.length();
    EXPECT_EQ(K.width, l + 3);
    EXPECT_EQ(K.register_width, l);
    EXPECT_EQ(K.num_blocks, 2);
    ASSERT_EQ(K.checkpoints.size(), 3u);
    size_t coins = 0;
    for (const auto &g : K.gates) {
        coins += g.kind == GateKind::coin;
    }
    EXPECT_EQ(coins, 2u);
    size_t block_gates = 2 + P.dimension() * (3 * l + 3);
    EXPECT_EQ(K.checkpoints[1] - K.checkpoints[0], block_gates);
    EXPECT_EQ(K.markers.front().label, "load");
    std::string dump = format_circuit_dump(K);
    EXPECT_EQ(dump.rfind("width=" + std::to_string(K.width), 0), 0u);
}

TEST(compile_blocks, wire_zero_and_block_marginals_match_exact_values) {
    for (const auto &e : canonical_corpus()) {
        auto P = build_configuration_matrix(e.spec, e.input, e.space);
        auto traj = configuration_trajectory(P, e.T);
        Rational A = run_exhaustive(e.spec, e.input, e.T).p_acc;
        auto K = compile_blocks(P, e.T);
        auto Kl = lower_to_universal(K);
        for (const ProbCircuit *c : {&K, &Kl}) {
            auto run = simulate_prob_circuit_exact(*c);
            EXPECT_EQ(wire_marginal(run.final, kRandomWire), A) << e.name;
            // Every wire other than the answer ends at 0.
            for (const auto &[w, p] : run.final) {
                EXPECT_EQ(w & ~uint64_t{1}, 0u) << e.name;
            }
            EXPECT_LE(run.max_support, 4 * P.dimension()) << e.name;
            ASSERT_EQ(run.register_marginals.size(), traj.size()) << e.name;
            for (size_t i = 0; i < traj.size(); i++) {
                std::map<uint64_t, Rational> expected;
                for (size_t j = 0; j < traj[i].size(); j++) {
                    if (traj[i][j] != 0) {
                        expected[encode_configuration_value(P.space.configs[j], P.space.layout)] = traj[i][j];
                    }
                }
                EXPECT_EQ(run.register_marginals[i], expected) << e.name << " block " << i;
            }
        }
    }
}

TEST(lowering, only_universal_gates_and_fixed_overhead) {
    auto P = build_configuration_matrix(load_fixture("tape_coin.pm"), "ab", 2);
    auto K = compile_blocks(P, 4);
    auto Kl = lower_to_universal(K);
    EXPECT_EQ(Kl.width - K.width, kLoweringAuxWires);
    EXPECT_EQ(Kl.register_width, K.register_width);
    EXPECT_EQ(Kl.checkpoints.size(), K.checkpoints.size());
    for (const auto &g : Kl.gates) {
        EXPECT_NE(classify_universal(g), UniversalKind::other);
    }
    std::vector<std::string> labels, lowered_labels;
    for (const auto &m : K.markers) {
        labels.push_back(m.label);
    }
    for (const auto &m : Kl.markers) {
        lowered_labels.push_back(m.label);
    }
    EXPECT_EQ(labels, lowered_labels);
}

TEST(lowering, identity_gate_expands_to_nothing) {
    ProbCircuit K;
    K.width = 3;
    K.add(Gate::det({0, 1, 2}, {0, 1, 2, 3, 4, 5, 6, 7}));
    EXPECT_TRUE(lower_to_universal(K).gates.empty());
}

TEST(lowering, random_gates_match_reference_property) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; trial++) {
        int arity = 1 + trial % 3;
        ProbCircuit K;
        K.width = 4;
        std::vector<int> wires{0, 1, 2, 3};
        std::shuffle(wires.begin(), wires.end(), rng);
        std::vector<int> targets(wires.begin(), wires.begin() + arity);
        std::vector<uint8_t> table(size_t{1} << arity);
        for (auto &t : table) {
            t = (uint8_t)(rng() % table.size());
        }
        Gate g = Gate::det(targets, table);
        K.add(g);
        auto Kl = lower_to_universal(K);
        for (uint64_t in = 0; in < 16; in++) {
            auto run = simulate_prob_circuit_exact(Kl, in);
            ASSERT_EQ(run.final.size(), 1u);
            EXPECT_EQ(run.final.begin()->first, apply_reference(in, g)) << "trial " << trial;
            EXPECT_EQ(run.final.begin()->second, 1);
        }
    }
}

TEST(simulate, coins_and_merging) {
    ProbCircuit K;
    K.width = 2;
    K.add(Gate::coin(0));
    K.add(Gate::coin(1));
    K.add(Gate::and_gate(0, 1));
    auto run = simulate_prob_circuit_exact(K);
    EXPECT_EQ(wire_marginal(run.final, 1), Rational(1, 4));
    EXPECT_EQ(wire_marginal(run.final, 0), Rational(1, 2));
    EXPECT_EQ(run.final.size(), 3u);
}
