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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "postlog/config_space.h"
#include "postlog/machine.h"
#include "postlog/rational.h"

namespace postlog {

enum class GateKind { coin, det, reset };

/// A gate on at most four wires.
///
/// For det gates, `table[row]` is the output bit tuple for input row
/// row = sum_i bit(targets[i]) << i, with output bit i written back to targets[i].
/// For reset gates, the single target is forced to `value`. Coin gates overwrite their single
/// target with a fair random bit.
struct Gate {
    GateKind kind = GateKind::det;
    std::vector<int> targets;
    std::vector<uint8_t> table;
    int value = 0;

    static Gate coin(int wire);
    static Gate reset(int wire, int value);
    static Gate det(std::vector<int> targets, std::vector<uint8_t> table);
    static Gate not_gate(int wire);
    /// (a, b) -> (a, a AND b).
    static Gate and_gate(int a, int b);
    /// (a, b) -> (a, a OR b).
    static Gate or_gate(int a, int b);

    bool is_identity() const;
    /// True when no two input rows map to the same output.
    bool is_injective() const;
    /// The 0/1 matrix G with G[out][in] = 1, of dimension 2^arity.
    std::vector<std::vector<int>> matrix() const;

    bool operator==(const Gate &) const = default;
};

enum class UniversalKind { not_gate, and_gate, or_gate, reset, coin, other };
UniversalKind classify_universal(const Gate &g);

/// Wire roles shared by every compiled circuit.
inline constexpr int kRandomWire = 0;
inline constexpr int kBlockControlWire = 1;
inline constexpr int kConfigControlWire = 2;
inline constexpr int kRegisterBase = 3;

/// Text marker placed before the gate with index `position`.
struct Marker {
    size_t position = 0;
    std::string label;
};

struct ProbCircuit {
    int width = 0;
    /// Configuration register width l; register wire kRegisterBase + k holds bit k of the encoding.
    int register_width = 0;
    int num_blocks = 0;
    std::vector<Gate> gates;
    std::vector<Marker> markers;
    /// Gate positions at which the register holds v_0, v_1, ..., v_T.
    std::vector<size_t> checkpoints;

    void add(Gate g);
    void mark(std::string label);
};

/// The 3l+3 gates of one part: if the block is still open and the register equals C_j,
/// move to `heads` when the random bit is 0, to `tails` when it is 1, and close the block.
std::vector<Gate> compile_part(const ConfigLayout &layout, const Configuration &cj, const Configuration &heads,
                               const Configuration &tails);

/// K_{M,x}: load C_init, T blocks of N parts each, and the decision block that leaves wire 0
/// equal to 1 iff the register holds C_a, then clears every other wire.
ProbCircuit compile_blocks(const MachineSpec &spec, const std::string &input, int T, int space_bound,
                           uint64_t cap = kDefaultConfigCap);
ProbCircuit compile_blocks(const ConfigurationMatrix &P, int T);

/// Number of auxiliary wires appended by lower_to_universal.
inline constexpr int kLoweringAuxWires = 5;

/// K': every det gate expanded into NOT, in-place AND/OR and reset gates, using
/// kLoweringAuxWires extra wires that are reset to 0 after each use.
ProbCircuit lower_to_universal(const ProbCircuit &K);

/// Exact distribution over full wire assignments (bit w of the key is wire w).
using CircuitDistribution = std::map<uint64_t, Rational>;

struct CircuitRun {
    CircuitDistribution final;
    /// Register marginal at each checkpoint, keyed by the register value (bit k of the
    /// encoding string at position l-1-k, i.e. the usual configuration value).
    std::vector<std::map<uint64_t, Rational>> register_marginals;
    /// Largest support size seen at any cut.
    size_t max_support = 0;
};

/// Propagates an exact distribution gate by gate from the basis state `initial`
/// (bit w = wire w). Requires width <= 64 and at most 63 coin gates on any path.
CircuitRun simulate_prob_circuit_exact(const ProbCircuit &K, uint64_t initial = 0);

/// P[wire] = 1 under a distribution.
Rational wire_marginal(const CircuitDistribution &d, int wire);

/// Register value of a full wire assignment.
uint64_t register_value(uint64_t wires, int register_width);
/// Full wire assignment bit mask for a register value.
uint64_t register_mask(uint64_t value, int register_width);

/// `width=<int> gates=<int>` header, then gates and `# label` markers.
std::string format_circuit_dump(const ProbCircuit &K);

}  // namespace postlog
