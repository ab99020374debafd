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

#include "postlog/amplification.h"

#include <cmath>
#include <random>

#include "postlog/error.h"
#include "postlog/oracle.h"

namespace postlog {

Pipeline Pipeline::build(const MachineSpec &spec, const std::string &input, int T, int space_bound, uint64_t cap) {
    if (T <= 0) {
        throw PostlogError("clock T must be positive");
    }
    Pipeline pl;
    pl.spec = spec;
    pl.input = input;
    pl.T = T;
    pl.space_bound = space_bound;

    OracleLimits limits;
    limits.space_cap = (size_t)space_bound;
    auto oracle = run_exhaustive(spec, input, T, limits);
    if (oracle.p_nonhalt != 0) {
        throw PostlogError("machine still running at T=" + std::to_string(T) + " with mass " +
                           format_rational(oracle.p_nonhalt));
    }
    if (oracle.p_npost != 0) {
        throw PostlogError("machine halts outside accept/reject with mass " + format_rational(oracle.p_npost));
    }
    pl.A = oracle.p_acc;

    pl.matrix = build_configuration_matrix(spec, input, space_bound, cap);
    auto [A, R] = final_distribution(pl.matrix, T);
    if (A != pl.A) {
        throw PostlogError("configuration matrix gives A=" + format_rational(A) + " but the oracle gives " +
                           format_rational(pl.A));
    }
    pl.circuit = compile_blocks(pl.matrix, T);
    pl.lowered = lower_to_universal(pl.circuit);
    pl.coherent = run_postselected_circuit(pl.lowered);
    pl.u_tilde = extract_u_tilde(pl.coherent.state);
    return pl;
}

Eigen::Matrix4d iteration_operator() {
    const double r3 = std::sqrt(3.0);
    Eigen::Matrix4d U;
    U << 1, r3, 0, 0, r3, -1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 2;
    return U / 2;
}

DecisionState iterate_u_p(const DecisionState &u, int steps) {
    if (steps < 0) {
        throw PostlogError("iteration count must be nonnegative");
    }
    static const EmbeddedGate step = embed_unitary_2wire(iteration_operator());
    DecisionState s = u;
    for (int i = 0; i < steps; i++) {
        s = apply_single_wire(s, step);
    }
    return s;
}

MpResult run_M_p(const Pipeline &pipeline, int p) {
    if (p < 0 || p >= pipeline.T) {
        throw PostlogError("sweep parameter p=" + std::to_string(p) + " outside [0," + std::to_string(pipeline.T - 1) +
                           "]");
    }
    MpResult r;
    r.p = p;
    r.state = iterate_u_p(pipeline.u_tilde, pipeline.T - p);
    auto [plus, minus] = measure_pm(r.state);
    r.p_plus = plus;
    r.p_minus = minus;
    r.outcome = plus >= minus ? +1 : -1;
    r.log_survival = r.state.log_survival;
    return r;
}

DecisionTrace overall_decide(const Pipeline &pipeline, std::optional<SampleOptions> sample) {
    if (pipeline.A == Rational(1, 2)) {
        throw PostlogError("undefined language decision: A = 1/2");
    }
    DecisionTrace tr;
    tr.A = pipeline.A;
    tr.T = pipeline.T;
    tr.p_all_plus = 1;
    tr.p_all_minus = 1;
    for (int p = 0; p < pipeline.T; p++) {
        MpResult r = run_M_p(pipeline, p);
        tr.counter += r.outcome;
        tr.p_all_plus *= r.p_plus;
        tr.p_all_minus *= r.p_minus;
        tr.runs.push_back(r);
    }
    if (tr.counter == -pipeline.T) {
        tr.verdict = "accept";
    } else if (tr.counter == pipeline.T) {
        tr.verdict = "reject";
    } else {
        tr.verdict = "nonpost";
    }
    double h = tr.p_all_minus + tr.p_all_plus;
    tr.p_acc = tr.p_all_minus / h;
    tr.p_rej = tr.p_all_plus / h;
    bool accepting = pipeline.A > Rational(1, 2);
    tr.error = accepting ? tr.p_rej : tr.p_acc;
    tr.advantage = accepting ? tr.p_all_minus / tr.p_all_plus : tr.p_all_plus / tr.p_all_minus;
    tr.within_bound = tr.error <= kDecisionErrorBound.get_d();

    if (sample && sample->runs > 0) {
        tr.sample = sample;
        std::mt19937_64 rng(sample->seed);
        for (int s = 0; s < sample->runs; s++) {
            int c = 0;
            for (const auto &r : tr.runs) {
                double u = (double)(rng() >> 11) * 0x1.0p-53;
                c += u < r.p_plus ? +1 : -1;
            }
            if (c == -pipeline.T) {
                tr.sampled_accept++;
            } else if (c == pipeline.T) {
                tr.sampled_reject++;
            } else {
                tr.sampled_nonpost++;
            }
        }
    }
    return tr;
}

namespace {

Rational pivot_value(int T, const mpz_class &a_num, int p) {
    mpz_class two_T = mpz_class(1) << T;
    Rational v{mpz_class(two_T - 2 * a_num)};
    mpq_div_2exp(v.get_mpq_t(), v.get_mpq_t(), (unsigned)(p + 1));
    return v;
}

}  // namespace

std::vector<int> valid_pivots(int T, const mpz_class &a_numerator) {
    mpz_class half = mpz_class(1) << (T - 1);
    std::vector<int> out;
    for (int p = 0; p < T; p++) {
        Rational v = pivot_value(T, a_numerator, p);
        bool ok = a_numerator < half ? (v >= 1 && v <= 2) : (v >= -2 && v <= -1);
        if (a_numerator != half && ok) {
            out.push_back(p);
        }
    }
    return out;
}

Rational correct_side_probability(int T, const mpz_class &a_numerator, int p) {
    Rational A{a_numerator};
    mpq_div_2exp(A.get_mpq_t(), A.get_mpq_t(), (unsigned)T);
    Rational a = Rational(1, 2) + A;
    Rational b = pivot_value(T, a_numerator, p);
    Rational denom = 2 * (a * a + b * b);
    mpz_class half = mpz_class(1) << (T - 1);
    Rational s = a_numerator < half ? Rational(a + b) : Rational(a - b);
    Rational num = s * s;
    return num / denom;
}

YBoundsReport verify_y_bounds(int max_T) {
    YBoundsReport rep;
    const double s17 = std::sqrt(17.0);
    double y0 = 2 / s17 * 0.5;
    double y1 = 2 / s17 * 2;
    rep.y_plus = std::pow((y0 + y1) / std::sqrt(2.0), 2);
    // y' mirrors y across the horizontal axis.
    rep.y_prime_minus = std::pow((y0 - (-y1)) / std::sqrt(2.0), 2);
    rep.exceeds_seven_tenths = Rational(25, 34) > Rational(7, 10);
    rep.max_T = max_T;
    rep.worst_case = 1;
    const Rational bound(25, 34);
    for (int T = 1; T <= max_T; T++) {
        mpz_class top = mpz_class(1) << T;
        mpz_class half = mpz_class(1) << (T - 1);
        for (mpz_class a = 0; a <= top; ++a) {
            if (a == half) {
                continue;
            }
            rep.cases++;
            auto pivots = valid_pivots(T, a);
            bool ok = false;
            for (int p : pivots) {
                Rational q = correct_side_probability(T, a, p);
                if (q < rep.worst_case) {
                    rep.worst_case = q;
                }
                ok |= q >= bound;
            }
            if (!ok) {
                rep.failures++;
                if (rep.first_failure.empty()) {
                    rep.first_failure = "T=" + std::to_string(T) + " A'=" + a.get_str();
                }
            }
        }
    }
    return rep;
}

CoeqResult coeq_recognize(const Pipeline &pipeline) {
    const Rational half(1, 2);
    const Rational gap = dyadic((unsigned)pipeline.T);
    Rational dist = abs(pipeline.A - half);
    if (dist != 0 && dist < gap) {
        throw PostlogError("promise violated: A=" + format_rational(pipeline.A) + " lies strictly within 2^-" +
                           std::to_string(pipeline.T) + " of 1/2");
    }
    CoeqResult r;
    r.A = pipeline.A;
    // (1/2 + A, 1/2 - A) -> (-2 (1/2 - A), 2^-T (1/2 + A + 1/2 - A)) = (2A - 1, 2^-T).
    const double g = std::ldexp(1.0, -pipeline.T);
    Eigen::Matrix2d Mx;
    Mx << 0, -2, g, g;
    r.state = apply_single_wire(pipeline.u_tilde, embed_nonunitary(Mx));
    double n = r.state.norm_squared();
    r.p_acc = std::norm(r.state.a0) / n;
    r.p_rej = std::norm(r.state.a1) / n;
    r.log_survival = r.state.log_survival;
    Rational x = 2 * pipeline.A - 1;
    Rational g2 = gap * gap;
    r.exact_p_acc = x * x / (x * x + g2);
    return r;
}

}  // namespace postlog
