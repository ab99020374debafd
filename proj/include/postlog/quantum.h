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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "postlog/prob_circuit.h"

namespace postlog {

using Amplitude = std::complex<double>;

/// Tolerance for unitarity and unit-norm checks.
inline constexpr double kUnitaryTolerance = 1e-10;
/// A projective step retaining less squared norm than this is treated as an underflow.
inline constexpr double kSurvivalFloor = 1e-300;

/// A map on `logical_wires` wires dilated to a unitary on logical_wires + aux_wires wires.
///
/// Basis index of U is logical * 2^aux_wires + aux. Applying U with the auxiliary wires in |0>
/// and post-selecting them on |0> acts on the logical wires as `source / e`.
struct EmbeddedGate {
    Eigen::MatrixXd U;
    Eigen::MatrixXd source;
    int logical_wires = 0;
    int aux_wires = 0;
    /// e^2 (an integer for every gate this library builds).
    double e_squared = 1;
    /// Rows and columns of U with every auxiliary wire in |0>; equals source / e.
    Eigen::MatrixXd block;

    double e() const;
    /// max |(U^T U - I)_{ij}|.
    double unitarity_error() const;
    /// max |e * block - source|.
    double action_error() const;
};

/// The coin dilation (1/2)[1 1 1 1; 1 1 -1 -1; 1 -1 1 -1; 1 -1 -1 1] on (coin wire, aux wire).
Eigen::Matrix4d coin_unitary();
EmbeddedGate embedded_coin();

/// Dilates a total 0/1 matrix (columns indexed by input row, one 1 per column) of dimension
/// 2 or 4. The first rows of U are [G | G' | G'' | 0] / e; the rest come from orthonormalizing
/// standard basis vectors in index order. Throws PostlogError for a non-total G.
EmbeddedGate embed_gate(const Eigen::MatrixXd &G);
EmbeddedGate embed_gate(const Gate &g);

/// Dilates a real 2x2 map M onto one extra wire: rows [M | X] / e with
/// X = sqrt(e^2 I - M M^T) and e^2 the least integer >= 1 keeping X real.
EmbeddedGate embed_nonunitary(const Eigen::Matrix2d &M);

/// A 4x4 unitary on (logical, aux) used as-is, e = 1.
EmbeddedGate embed_unitary_2wire(const Eigen::Matrix4d &U);

/// The decision operator [1/2 3/2; 1/2 -1/2].
Eigen::Matrix2d decision_operator();

/// Sparse post-selected state on `num_wires` wires (bit w of a key is wire w), renormalized
/// after every projective step. The cumulative survival probability is kept as a logarithm
/// because long circuits drive it far below the smallest double.
class StateVector {
   public:
    explicit StateVector(int num_wires, uint64_t basis = 0);
    static StateVector from_entries(int num_wires, std::vector<std::pair<uint64_t, Amplitude>> entries);

    int num_wires() const {
        return num_wires_;
    }
    double log_survival() const {
        return log_survival_;
    }
    double survival() const;
    const std::vector<std::pair<uint64_t, Amplitude>> &entries() const {
        return entries_;
    }
    Amplitude amplitude(uint64_t key) const;
    double norm_squared() const;

    /// Applies g with its logical wires on `targets` (targets[i] is logical bit i) and its
    /// auxiliary wires fresh in |0>, post-selects them on |0>, renormalizes, and updates the
    /// survival. Returns the retained squared norm. Throws PostlogError("post-selection mass
    /// underflow") when it falls below kSurvivalFloor.
    double apply(const EmbeddedGate &g, const std::vector<int> &targets);

    /// `wires=<q>` and `survival=<float>` lines, then `bitstring re im` for nonzero amplitudes;
    /// the bit string lists wire 0 first.
    std::string dump() const;

   private:
    int num_wires_ = 0;
    std::vector<std::pair<uint64_t, Amplitude>> entries_;
    double log_survival_ = 0;
};

/// Embedded versions of every distinct gate of a circuit, keyed by gate content.
class EmbeddingCache {
   public:
    const EmbeddedGate &get(const Gate &g);
    const std::map<std::string, EmbeddedGate> &all() const {
        return cache_;
    }

   private:
    std::map<std::string, EmbeddedGate> cache_;
};

struct QuantumRun {
    StateVector state{1};
    /// Register amplitudes summed over the other wires at each checkpoint, keyed by register
    /// value.
    std::vector<std::map<uint64_t, double>> register_amplitudes;
    /// Sum over gates of log(e^2).
    double log_e_squared_total = 0;
    size_t gates_applied = 0;
};

/// Coherent post-selected simulation of a circuit on width + 2 wires from |0...0>.
QuantumRun run_postselected_circuit(const ProbCircuit &K, EmbeddingCache *cache = nullptr);

/// Single-wire decision state after the decision operator, with its survival.
struct DecisionState {
    Amplitude a0;
    Amplitude a1;
    double log_survival = 0;

    double norm_squared() const {
        return std::norm(a0) + std::norm(a1);
    }
};

/// Requires every wire but 0 to be |0> within kUnitaryTolerance, then applies the embedded
/// decision operator to wire 0. The result is proportional to (1/2 + A, 1/2 - A).
DecisionState extract_u_tilde(const StateVector &state);

/// Applies a 2x2 map through its dilation, tracking survival.
DecisionState apply_single_wire(const DecisionState &s, const EmbeddedGate &g);

/// Probabilities of |+> and |-> for a single-wire state.
std::pair<double, double> measure_pm(const DecisionState &s);

}  // namespace postlog
