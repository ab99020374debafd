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

#include <cmath>

#include "postlog/config_space.h"
#include "postlog/error.h"
#include "postlog/oracle.h"
#include "postlog/prob_circuit.h"
#include "postlog/quantum.h"
#include "support/corpus.h"

using namespace postlog;
using namespace postlog::testing;

namespace {

const double kHalfRoot = 1 / std::sqrt(2.0);

Eigen::MatrixXd to_matrix(const std::vector<std::vector<int>> &m) {
    Eigen::MatrixXd out(m.size(), m.size());
    for (size_t r = 0; r < m.size(); r++) {
        for (size_t c = 0; c < m.size(); c++) {
            out(r, c) = m[r][c];
        }
    }
    return out;
}

}  // namespace

TEST(coin, unitary_matches_displayed_matrix) {
    Eigen::Matrix4d expected;
    expected << 1, 1, 1, 1, 1, 1, -1, -1, 1, -1, 1, -1, 1, -1, -1, 1;
    expected /= 2;
    EXPECT_LE((coin_unitary() - expected).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE((coin_unitary().transpose() * coin_unitary() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(),
              1e-12);
}

TEST(coin, postselected_identities) {
    for (uint64_t b : {0u, 1u}) {
        StateVector s(1, b);
        double kept = s.apply(embedded_coin(), {0});
        EXPECT_NEAR(kept, 0.5, 1e-12);
        EXPECT_NEAR(s.amplitude(0).real(), kHalfRoot, 1e-12);
        EXPECT_NEAR(s.amplitude(1).real(), kHalfRoot, 1e-12);
        EXPECT_NEAR(s.survival(), 0.5, 1e-12);
    }
}

TEST(embed_gate, identity_needs_no_padding) {
    auto g = embed_gate(Eigen::MatrixXd(Eigen::Matrix2d::Identity()));
    EXPECT_DOUBLE_EQ(g.e_squared, 1);
    EXPECT_LE(g.action_error(), 1e-12);
    StateVector s = StateVector::from_entries(1, {{0, 0.6}, {1, 0.8}});
    EXPECT_NEAR(s.apply(g, {0}), 1, 1e-12);
    EXPECT_NEAR(s.amplitude(0).real(), 0.6, 1e-12);
    EXPECT_NEAR(s.log_survival(), 0, 1e-12);
}

TEST(embed_gate, reset_contract) {
    auto g = embed_gate(Gate::reset(0, 0));
    EXPECT_LE(g.unitarity_error(), kUnitaryTolerance);
    EXPECT_LE(g.action_error(), kUnitaryTolerance);
    StateVector s = StateVector::from_entries(1, {{0, 0.6}, {1, 0.8}});
    s.apply(g, {0});
    EXPECT_NEAR(std::abs(s.amplitude(0)), 1, 1e-12);
    EXPECT_NEAR(std::abs(s.amplitude(1)), 0, 1e-12);
    // (0.6 + 0.8)^2 / e^2
    EXPECT_NEAR(s.survival(), 1.96 / g.e_squared, 1e-12);
}

TEST(embed_gate, reset_of_minus_state_underflows) {
    auto g = embed_gate(Gate::reset(0, 0));
    StateVector s = StateVector::from_entries(1, {{0, kHalfRoot}, {1, -kHalfRoot}});
    try {
        s.apply(g, {0});
        FAIL() << "expected underflow";
    } catch (const PostlogError &e) {
        EXPECT_NE(std::string(e.what()).find("post-selection mass underflow"), std::string::npos);
    }
}

TEST(embed_gate, every_universal_gate_is_sound) {
    std::vector<Gate> gates{Gate::not_gate(0), Gate::reset(0, 0), Gate::reset(0, 1), Gate::and_gate(0, 1),
                            Gate::or_gate(0, 1), Gate::and_gate(1, 0), Gate::or_gate(1, 0)};
    for (const auto &gate : gates) {
        auto g = embed_gate(gate);
        EXPECT_LE(g.unitarity_error(), kUnitaryTolerance);
        EXPECT_LE(g.action_error(), kUnitaryTolerance);
        EXPECT_LE((g.source - to_matrix(gate.matrix())).cwiseAbs().maxCoeff(), 0.0);
        EXPECT_NEAR(g.e_squared, std::round(g.e_squared), 0.0);
    }
}

TEST(embed_gate, and_gate_action_on_superposition) {
    auto g = embed_gate(Gate::and_gate(0, 1));
    // Wires (a, b) = (0,1), basis weights 0.1, 0.2, 0.3, 0.4 on rows 00, 10, 01, 11 (bit i = wire i).
    StateVector s = StateVector::from_entries(2, {{0, 0.1}, {1, 0.2}, {2, 0.3}, {3, 0.4}});
    s.apply(g, {0, 1});
    // (a, a AND b): row 00 <- 00 + 01(b only), row 01 (a=1,b=0) <- 10, row 11 <- 11.
    double a00 = 0.1 + 0.3, a10 = 0.2, a11 = 0.4;
    double norm = std::sqrt(a00 * a00 + a10 * a10 + a11 * a11);
    EXPECT_NEAR(s.amplitude(0).real(), a00 / norm, 1e-12);
    EXPECT_NEAR(s.amplitude(1).real(), a10 / norm, 1e-12);
    EXPECT_NEAR(std::abs(s.amplitude(2)), 0, 1e-12);
    EXPECT_NEAR(s.amplitude(3).real(), a11 / norm, 1e-12);
}

TEST(embed_gate, rejects_non_total_matrix) {
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
    bad(0, 0) = 1;
    EXPECT_THROW(embed_gate(bad), PostlogError);
}

TEST(embed_nonunitary, examples) {
    auto id = embed_nonunitary(Eigen::Matrix2d::Identity());
    EXPECT_DOUBLE_EQ(id.e_squared, 1);
    EXPECT_LE((id.U - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-12);

    auto d = embed_nonunitary(decision_operator());
    EXPECT_DOUBLE_EQ(d.e_squared, 3);
    EXPECT_LE(d.unitarity_error(), kUnitaryTolerance);
    EXPECT_LE(d.action_error(), kUnitaryTolerance);

    const double r3 = std::sqrt(3.0);
    Eigen::Matrix2d rot;
    rot << 1, r3, r3, -1;
    auto u = embed_nonunitary(rot / 2);
    EXPECT_DOUBLE_EQ(u.e_squared, 1);
    EXPECT_LE(u.action_error(), kUnitaryTolerance);
}

TEST(decision, maps_acceptance_to_decision_state) {
    auto d = embed_nonunitary(decision_operator());
    for (double A : {0.0, 0.25, 0.75, 1.0}) {
        DecisionState s{1 - A, A, 0};
        auto out = apply_single_wire(s, d);
        double scale = std::sqrt(out.norm_squared()) / std::hypot(0.5 + A, 0.5 - A);
        EXPECT_NEAR(out.a0.real(), (0.5 + A) * scale, 1e-12);
        EXPECT_NEAR(out.a1.real(), (0.5 - A) * scale, 1e-12);
    }
}

TEST(measure_pm, examples) {
    auto [p0, m0] = measure_pm(DecisionState{kHalfRoot, kHalfRoot, 0});
    EXPECT_NEAR(p0, 1, 1e-12);
    EXPECT_NEAR(m0, 0, 1e-12);
    auto [p1, m1] = measure_pm(DecisionState{1, 0, 0});
    EXPECT_NEAR(p1, 0.5, 1e-12);
    EXPECT_NEAR(m1, 0.5, 1e-12);
    auto [p2, m2] = measure_pm(DecisionState{0.5, 2, 0});
    EXPECT_NEAR(p2, 25.0 / 34, 1e-12);
    EXPECT_NEAR(p2 + m2, 1, 1e-12);
}

TEST(coherent_run, register_amplitudes_follow_exact_distribution) {
    for (const auto &e : canonical_corpus()) {
        auto P = build_configuration_matrix(e.spec, e.input, e.space);
        auto traj = configuration_trajectory(P, e.T);
        auto K = lower_to_universal(compile_blocks(P, e.T));
        auto run = run_postselected_circuit(K);
        EXPECT_EQ(run.state.num_wires(), K.width + 2);
        ASSERT_EQ(run.register_amplitudes.size(), traj.size()) << e.name;
        for (size_t i = 0; i < traj.size(); i++) {
            std::map<uint64_t, double> exact;
            double exact_sum = 0;
            for (size_t j = 0; j < traj[i].size(); j++) {
                if (traj[i][j] != 0) {
                    exact[encode_configuration_value(P.space.configs[j], P.space.layout)] = traj[i][j].get_d();
                    exact_sum += traj[i][j].get_d();
                }
            }
            double amp_sum = 0;
            for (const auto &[k, a] : run.register_amplitudes[i]) {
                amp_sum += a;
            }
            ASSERT_GT(amp_sum, 0) << e.name;
            const double scale = amp_sum / exact_sum;
            for (const auto &[k, a] : run.register_amplitudes[i]) {
                auto it = exact.find(k);
                if (it == exact.end()) {
                    EXPECT_LE(std::abs(a / scale), 1e-8) << e.name;
                } else {
                    EXPECT_LE(std::abs(a / scale - it->second) / it->second, 1e-8) << e.name << " block " << i;
                }
            }
            for (const auto &[k, v] : exact) {
                EXPECT_TRUE(run.register_amplitudes[i].count(k)) << e.name;
            }
        }
    }
}

TEST(coherent_run, survival_identity) {
    for (const auto &e : canonical_corpus()) {
        auto P = build_configuration_matrix(e.spec, e.input, e.space);
        auto K = lower_to_universal(compile_blocks(P, e.T));
        auto run = run_postselected_circuit(K);
        double A = run_exhaustive(e.spec, e.input, e.T).p_acc.get_d();
        // The unnormalized state is the exact output distribution scaled by prod 1/e.
        double expected = std::log(A * A + (1 - A) * (1 - A)) - run.log_e_squared_total;
        EXPECT_NEAR(run.state.log_survival(), expected, 1e-8 * std::abs(expected)) << e.name;
        EXPECT_NEAR(run.state.norm_squared(), 1, 1e-10);
    }
}

TEST(coherent_run, deterministic_machine_ends_in_accept) {
    std::vector<std::string> probes{"a"};
    auto e = canonical_corpus()[3];
    ASSERT_EQ(e.name, "det_acc_canonical");
    auto P = build_configuration_matrix(e.spec, e.input, e.space);
    auto K = lower_to_universal(compile_blocks(P, e.T));
    auto run = run_postselected_circuit(K);
    auto last = run.register_amplitudes.back();
    ASSERT_EQ(last.size(), 1u);
    EXPECT_EQ(last.begin()->first, encode_configuration_value(P.space.configs[P.space.accept], P.space.layout));
    auto u = extract_u_tilde(run.state);
    EXPECT_NEAR(u.a0.real() / u.a1.real(), -3, 1e-8);
}

TEST(extract_u_tilde, requires_separable_state) {
    StateVector s = StateVector::from_entries(2, {{0, kHalfRoot}, {2, kHalfRoot}});
    EXPECT_THROW(extract_u_tilde(s), PostlogError);
}

TEST(state_vector, dump_lists_wire_zero_first) {
    StateVector s(3, 1);
    std::string d = s.dump();
    EXPECT_NE(d.find("wires=3"), std::string::npos);
    EXPECT_NE(d.find("100 1 0"), std::string::npos);
}
