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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "postlog/config_space.h"
#include "postlog/machine.h"
#include "postlog/prob_circuit.h"
#include "postlog/quantum.h"
#include "postlog/rational.h"

namespace postlog {

/// Everything derived from one (machine, input, clock, space bound): the exact acceptance
/// probability, the configuration matrix, both circuits, and the coherent run with its
/// decision state. Built once and shared by every sweep parameter.
struct Pipeline {
    MachineSpec spec;
    std::string input;
    int T = 0;
    int space_bound = 0;
    /// Exact acceptance probability from the exhaustive oracle.
    Rational A;
    ConfigurationMatrix matrix;
    ProbCircuit circuit;
    ProbCircuit lowered;
    QuantumRun coherent;
    DecisionState u_tilde;

    /// Throws PostlogError if the machine does not halt by T, is not canonical, or the
    /// matrix and oracle disagree.
    static Pipeline build(const MachineSpec &spec, const std::string &input, int T, int space_bound,
                          uint64_t cap = kDefaultConfigCap);
};

/// (1/2)[1 r3 0 0; r3 -1 0 0; 0 0 2 0; 0 0 0 2] on (decision wire, fresh aux wire).
Eigen::Matrix4d iteration_operator();

/// Applies the iteration operator `steps` times, post-selecting the aux wire on |0> each time.
/// Each step doubles the |1> component relative to the |0> component.
DecisionState iterate_u_p(const DecisionState &u, int steps);

struct MpResult {
    int p = 0;
    /// +1 or -1: the more likely outcome of the final measurement.
    int outcome = 0;
    double p_plus = 0;
    double p_minus = 0;
    double log_survival = 0;
    DecisionState state;
};

/// One run of the amplifier with parameter p in [0, T-1].
MpResult run_M_p(const Pipeline &pipeline, int p);

struct SampleOptions {
    int runs = 0;
    uint64_t seed = 0;
};

struct DecisionTrace {
    Rational A;
    int T = 0;
    std::vector<MpResult> runs;
    /// Sum of the per-run outcomes.
    int counter = 0;
    /// accept (counter = -T), reject (counter = T) or nonpost.
    std::string verdict;
    double p_all_plus = 0;
    double p_all_minus = 0;
    /// P[all -] / (P[all -] + P[all +]).
    double p_acc = 0;
    double p_rej = 0;
    /// Post-selected probability of the wrong verdict.
    double error = 0;
    /// Correct-side product over wrong-side product.
    double advantage = 0;
    bool within_bound = false;
    /// Monte Carlo counts when sampling was requested.
    std::optional<SampleOptions> sample;
    int sampled_accept = 0;
    int sampled_reject = 0;
    int sampled_nonpost = 0;
};

/// Error bound of the overall procedure.
inline const Rational kDecisionErrorBound{3, 10};

/// The sweep over p = 0..T-1. The counter uses each run's more likely outcome; the exact
/// products of per-run probabilities give the normalized acceptance probability. Throws
/// PostlogError("undefined language decision") when A = 1/2.
DecisionTrace overall_decide(const Pipeline &pipeline, std::optional<SampleOptions> sample = std::nullopt);

/// Sweep parameters p in [0, T-1] with (2^T - 2A')/2^(p+1) in [1,2] (A' < 2^(T-1)) or in
/// [-2,-1] (A' > 2^(T-1)).
std::vector<int> valid_pivots(int T, const mpz_class &a_numerator);

/// Exact probability of the correct-side outcome at sweep parameter p for A = A'/2^T.
Rational correct_side_probability(int T, const mpz_class &a_numerator, int p);

struct YBoundsReport {
    double y_plus = 0;
    double y_prime_minus = 0;
    bool exceeds_seven_tenths = false;
    int max_T = 0;
    size_t cases = 0;
    size_t failures = 0;
    std::string first_failure;
    /// Smallest correct-side probability seen at a pivot.
    Rational worst_case;
};

/// Checks the geometric bound and scans every A' for T = 1..max_T.
YBoundsReport verify_y_bounds(int max_T = 6);

struct CoeqResult {
    Rational A;
    double p_acc = 0;
    double p_rej = 0;
    /// (2A-1)^2 / ((2A-1)^2 + 2^(-2T)).
    Rational exact_p_acc;
    double log_survival = 0;
    DecisionState state;
};

/// The exact-counting recognizer: maps the decision state to one proportional to
/// (2A-1, 2^-T) and measures in the computational basis, accepting on |0>. Throws
/// PostlogError naming A if A is neither 1/2 nor at least 2^-T away from it.
CoeqResult coeq_recognize(const Pipeline &pipeline);

}  // namespace postlog
