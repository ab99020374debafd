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

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "postlog/machine.h"
#include "postlog/rational.h"

namespace postlog {

/// Snapshot of a binary-tape machine restricted to work cells [0, S).
/// `w` holds one character per cell: '1' for a one, '0' for a blank.
struct Configuration {
    int state = 0;
    int h_in = 0;
    std::string w;
    int h_wk = 0;

    auto operator<=>(const Configuration &) const = default;
};

/// Field widths of the fixed-length encoding state | h_in | w | h_wk (most significant first).
struct ConfigLayout {
    int num_states = 0;
    int input_length = 0;
    int space_bound = 0;
    int state_bits = 0;
    int head_in_bits = 0;
    int head_wk_bits = 0;

    static ConfigLayout make(int num_states, int input_length, int space_bound);

    int length() const {
        return state_bits + head_in_bits + space_bound + head_wk_bits;
    }
    /// Number of syntactically valid configurations: m·(n+2)·2^S·S.
    uint64_t count() const;
};

/// ceil(log2(x)) with ceil(log2(1)) = 0.
int ceil_log2(uint64_t x);

/// Encoding as an unsigned integer whose bit (length-1-k) is string position k.
uint64_t encode_configuration_value(const Configuration &c, const ConfigLayout &layout);
/// Encoding as a string of '0'/'1' characters of length layout.length().
std::string encode_configuration(const Configuration &c, const ConfigLayout &layout);
Configuration decode_configuration(const std::string &bits, const ConfigLayout &layout);
Configuration decode_configuration_value(uint64_t value, const ConfigLayout &layout);

inline constexpr uint64_t kDefaultConfigCap = uint64_t{1} << 20;

/// All configurations of a machine on one input, in lexicographic order of
/// (state, h_in, w, h_wk). Index lookup is arithmetic.
struct ConfigSpace {
    ConfigLayout layout;
    std::string input;
    std::vector<Configuration> configs;
    size_t initial = 0;
    size_t accept = 0;
    size_t reject = 0;

    size_t size() const {
        return configs.size();
    }
    size_t index_of(const Configuration &c) const;
    bool in_bounds(const Configuration &c) const;
};

/// Throws PostlogError when the count exceeds `cap` or the encoding exceeds 62 bits.
ConfigSpace enumerate_configurations(const MachineSpec &spec, const std::string &input, int space_bound,
                                     uint64_t cap = kDefaultConfigCap);

/// Heads-branch and tails-branch successors of a non-halting configuration of a canonical
/// machine. Throws PostlogError for halting input ("no successor"), a step that is not a fair
/// two-way split, an undefined triple, or a successor outside the space.
std::pair<Configuration, Configuration> successors(const MachineSpec &spec, const ConfigSpace &space,
                                                   const Configuration &c);

/// Column-stochastic one-step matrix. columns[i] lists (row j, probability) for moves C_i -> C_j.
struct ConfigurationMatrix {
    ConfigSpace space;
    std::vector<std::vector<std::pair<size_t, Rational>>> columns;
    /// For every column: the heads and tails successor indices (both equal i for halting
    /// or unreachable-and-undefined configurations).
    std::vector<std::pair<size_t, size_t>> branches;

    size_t dimension() const {
        return columns.size();
    }
};

/// Builds P_x. Successor errors are raised for configurations reachable from the initial
/// one; other configurations whose successors are undefined become absorbing.
ConfigurationMatrix build_configuration_matrix(const MachineSpec &spec, const std::string &input, int space_bound,
                                               uint64_t cap = kDefaultConfigCap);

/// One step v -> P v on dense exact vectors.
std::vector<Rational> apply_matrix(const ConfigurationMatrix &P, const std::vector<Rational> &v);

/// v_0 (indicator of the initial configuration) through v_T.
std::vector<std::vector<Rational>> configuration_trajectory(const ConfigurationMatrix &P, int T);

/// (A, R) read off v_T. Throws PostlogError("machine not canonical at clock T") if any mass
/// sits outside C_a and C_r.
std::pair<Rational, Rational> final_distribution(const ConfigurationMatrix &P, int T);

/// `N=<int>` followed by `j i p/q` lines in column order.
std::string format_matrix_dump(const ConfigurationMatrix &P);
/// `index bits state h_in w h_wk` lines.
std::string format_config_table(const MachineSpec &spec, const ConfigSpace &space);

}  // namespace postlog
