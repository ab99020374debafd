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

#include "postlog/prob_circuit.h"

#include <algorithm>
#include <sstream>

#include "postlog/error.h"

namespace postlog {

Gate Gate::coin(int wire) {
    Gate g;
    g.kind = GateKind::coin;
    g.targets = {wire};
    return g;
}

Gate Gate::reset(int wire, int value) {
    Gate g;
    g.kind = GateKind::reset;
    g.targets = {wire};
    g.value = value ? 1 : 0;
    return g;
}

Gate Gate::det(std::vector<int> targets, std::vector<uint8_t> table) {
    if (targets.empty() || targets.size() > 4) {
        throw PostlogError("det gate arity must be 1..4");
    }
    if (table.size() != (size_t{1} << targets.size())) {
        throw PostlogError("det gate table is not total on its arity");
    }
    for (size_t i = 0; i < targets.size(); i++) {
        for (size_t j = i + 1; j < targets.size(); j++) {
            if (targets[i] == targets[j]) {
                throw PostlogError("det gate targets must be distinct");
            }
        }
    }
    Gate g;
    g.kind = GateKind::det;
    g.targets = std::move(targets);
    g.table = std::move(table);
    return g;
}

Gate Gate::not_gate(int wire) {
    return det({wire}, {1, 0});
}

Gate Gate::and_gate(int a, int b) {
    // Row index a | b<<1.
    return det({a, b}, {0b00, 0b01, 0b00, 0b11});
}

Gate Gate::or_gate(int a, int b) {
    return det({a, b}, {0b00, 0b11, 0b10, 0b11});
}

bool Gate::is_identity() const {
    if (kind != GateKind::det) {
        return false;
    }
    for (size_t row = 0; row < table.size(); row++) {
        if (table[row] != row) {
            return false;
        }
    }
    return true;
}

bool Gate::is_injective() const {
    if (kind != GateKind::det) {
        return false;
    }
    std::vector<bool> hit(table.size(), false);
    for (uint8_t out : table) {
        if (hit[out]) {
            return false;
        }
        hit[out] = true;
    }
    return true;
}

std::vector<std::vector<int>> Gate::matrix() const {
    size_t d = size_t{1} << targets.size();
    std::vector<std::vector<int>> m(d, std::vector<int>(d, 0));
    for (size_t in = 0; in < d; in++) {
        size_t out = 0;
        switch (kind) {
            case GateKind::det:
                out = table[in];
                break;
            case GateKind::reset:
                out = (size_t)value;
                break;
            case GateKind::coin:
                throw PostlogError("a coin gate has no 0/1 matrix");
        }
        m[out][in] = 1;
    }
    return m;
}

UniversalKind classify_universal(const Gate &g) {
    if (g.kind == GateKind::coin) {
        return UniversalKind::coin;
    }
    if (g.kind == GateKind::reset) {
        return UniversalKind::reset;
    }
    if (g.targets.size() == 1 && g.table == std::vector<uint8_t>{1, 0}) {
        return UniversalKind::not_gate;
    }
    if (g.targets.size() == 2 && g.table == std::vector<uint8_t>{0b00, 0b01, 0b00, 0b11}) {
        return UniversalKind::and_gate;
    }
    if (g.targets.size() == 2 && g.table == std::vector<uint8_t>{0b00, 0b11, 0b10, 0b11}) {
        return UniversalKind::or_gate;
    }
    return UniversalKind::other;
}

void ProbCircuit::add(Gate g) {
    for (int t : g.targets) {
        if (t < 0 || t >= width) {
            throw PostlogError("gate wire " + std::to_string(t) + " outside circuit width " + std::to_string(width));
        }
    }
    gates.push_back(std::move(g));
}

void ProbCircuit::mark(std::string label) {
    markers.push_back(Marker{gates.size(), std::move(label)});
}

namespace {

int reg_wire(int k) {
    return kRegisterBase + k;
}

}  // namespace

std::vector<Gate> compile_part(const ConfigLayout &layout, const Configuration &cj, const Configuration &heads,
                               const Configuration &tails) {
    const int l = layout.length();
    const std::string e = encode_configuration(cj, layout);
    const std::string h = encode_configuration(heads, layout);
    const std::string t = encode_configuration(tails, layout);
    std::vector<Gate> out;
    out.reserve(3 * l + 3);
    // cc := bc
    out.push_back(Gate::det({kBlockControlWire, kConfigControlWire}, {0b00, 0b11, 0b00, 0b11}));
    // cc := cc AND (reg_k == e_k)
    for (int k = 0; k < l; k++) {
        int want = e[k] == '1';
        std::vector<uint8_t> table(4);
        for (int row = 0; row < 4; row++) {
            int cc = row & 1;
            int reg = (row >> 1) & 1;
            table[row] = (uint8_t)((cc && reg == want ? 1 : 0) | (reg << 1));
        }
        out.push_back(Gate::det({kConfigControlWire, reg_wire(k)}, table));
    }
    // if cc and rand == branch: reg_k := target_k
    for (int branch = 0; branch < 2; branch++) {
        const std::string &dst = branch == 0 ? h : t;
        for (int k = 0; k < l; k++) {
            int bit = dst[k] == '1';
            std::vector<uint8_t> table(8);
            for (int row = 0; row < 8; row++) {
                int rand = row & 1;
                int cc = (row >> 1) & 1;
                int reg = (row >> 2) & 1;
                int nreg = (cc && rand == branch) ? bit : reg;
                table[row] = (uint8_t)(rand | (cc << 1) | (nreg << 2));
            }
            out.push_back(Gate::det({kRandomWire, kConfigControlWire, reg_wire(k)}, table));
        }
    }
    // bc := bc AND NOT cc
    out.push_back(Gate::det({kBlockControlWire, kConfigControlWire}, {0b00, 0b01, 0b10, 0b10}));
    out.push_back(Gate::reset(kConfigControlWire, 0));
    return out;
}

ProbCircuit compile_blocks(const ConfigurationMatrix &P, int T) {
    if (T <= 0) {
        throw PostlogError("clock T must be positive");
    }
    const auto &space = P.space;
    const int l = space.layout.length();
    ProbCircuit K;
    K.width = l + 3;
    K.register_width = l;
    K.num_blocks = T;
    if (K.width > 64) {
        throw PostlogError("circuit width " + std::to_string(K.width) + " exceeds 64 wires");
    }

    K.mark("load");
    std::string init = encode_configuration(space.configs[space.initial], space.layout);
    for (int k = 0; k < l; k++) {
        if (init[k] == '1') {
            K.add(Gate::not_gate(reg_wire(k)));
        }
    }
    K.checkpoints.push_back(K.gates.size());

    std::vector<std::vector<Gate>> parts(space.size());
    for (size_t j = 0; j < space.size(); j++) {
        auto [a, b] = P.branches[j];
        parts[j] = compile_part(space.layout, space.configs[j], space.configs[a], space.configs[b]);
    }
    for (int i = 1; i <= T; i++) {
        K.mark("block " + std::to_string(i));
        K.add(Gate::coin(kRandomWire));
        K.add(Gate::reset(kBlockControlWire, 1));
        for (size_t j = 0; j < parts.size(); j++) {
            K.mark("part " + std::to_string(j));
            for (const auto &g : parts[j]) {
                K.add(g);
            }
        }
        K.checkpoints.push_back(K.gates.size());
    }

    K.mark("decision");
    std::string acc = encode_configuration(space.configs[space.accept], space.layout);
    K.add(Gate::reset(kConfigControlWire, 1));
    for (int k = 0; k < l; k++) {
        int want = acc[k] == '1';
        std::vector<uint8_t> table(4);
        for (int row = 0; row < 4; row++) {
            int cc = row & 1;
            int reg = (row >> 1) & 1;
            table[row] = (uint8_t)((cc && reg == want ? 1 : 0) | (reg << 1));
        }
        K.add(Gate::det({kConfigControlWire, reg_wire(k)}, table));
    }
    // rand := cc
    K.add(Gate::det({kRandomWire, kConfigControlWire}, {0b00, 0b00, 0b11, 0b11}));
    K.mark("cleanup");
    K.add(Gate::reset(kConfigControlWire, 0));
    K.add(Gate::reset(kBlockControlWire, 0));
    for (int k = 0; k < l; k++) {
        K.add(Gate::reset(reg_wire(k), 0));
    }
    return K;
}

ProbCircuit compile_blocks(const MachineSpec &spec, const std::string &input, int T, int space_bound,
                           uint64_t cap) {
    return compile_blocks(build_configuration_matrix(spec, input, space_bound, cap), T);
}

// ---------------------------------------------------------------------------------------------
// Lowering

namespace {

int table_bit(const Gate &g, size_t row, size_t i) {
    return (g.table[row] >> i) & 1;
}

void expand_det(const Gate &g, int aux_base, std::vector<Gate> &out) {
    const size_t k = g.targets.size();
    const size_t rows = size_t{1} << k;
    const int term = aux_base + 4;
    enum class Kind { identity, constant, general };
    std::vector<Kind> kinds(k);
    std::vector<int> constants(k, 0);
    for (size_t i = 0; i < k; i++) {
        bool identity = true;
        bool all0 = true;
        bool all1 = true;
        for (size_t row = 0; row < rows; row++) {
            int b = table_bit(g, row, i);
            identity &= b == (int)((row >> i) & 1);
            all0 &= b == 0;
            all1 &= b == 1;
        }
        if (identity) {
            kinds[i] = Kind::identity;
        } else if (all0 || all1) {
            kinds[i] = Kind::constant;
            constants[i] = all1 ? 1 : 0;
        } else {
            kinds[i] = Kind::general;
        }
    }

    // Compute each non-trivial output into its own auxiliary wire as a sum of products over
    // the inputs it depends on.
    for (size_t i = 0; i < k; i++) {
        if (kinds[i] != Kind::general) {
            continue;
        }
        const int aux = aux_base + (int)i;
        std::vector<size_t> support;
        for (size_t v = 0; v < k; v++) {
            bool depends = false;
            for (size_t row = 0; row < rows; row++) {
                depends |= table_bit(g, row, i) != table_bit(g, row ^ (size_t{1} << v), i);
            }
            if (depends) {
                support.push_back(v);
            }
        }
        const size_t sub_rows = size_t{1} << support.size();
        auto value_at = [&](size_t sub) {
            size_t row = 0;
            for (size_t s = 0; s < support.size(); s++) {
                row |= ((sub >> s) & 1) << support[s];
            }
            return table_bit(g, row, i);
        };
        size_t onset = 0;
        for (size_t sub = 0; sub < sub_rows; sub++) {
            onset += value_at(sub);
        }
        const int want = 2 * onset > sub_rows ? 0 : 1;
        for (size_t sub = 0; sub < sub_rows; sub++) {
            if (value_at(sub) != want) {
                continue;
            }
            out.push_back(Gate::reset(term, 1));
            for (size_t s = 0; s < support.size(); s++) {
                int wire = g.targets[support[s]];
                bool positive = (sub >> s) & 1;
                if (!positive) {
                    out.push_back(Gate::not_gate(wire));
                }
                out.push_back(Gate::and_gate(wire, term));
                if (!positive) {
                    out.push_back(Gate::not_gate(wire));
                }
            }
            out.push_back(Gate::or_gate(term, aux));
            out.push_back(Gate::reset(term, 0));
        }
        if (want == 0) {
            out.push_back(Gate::not_gate(aux));
        }
    }

    for (size_t i = 0; i < k; i++) {
        const int wire = g.targets[i];
        if (kinds[i] == Kind::constant) {
            out.push_back(Gate::reset(wire, constants[i]));
        } else if (kinds[i] == Kind::general) {
            const int aux = aux_base + (int)i;
            out.push_back(Gate::reset(wire, 0));
            out.push_back(Gate::or_gate(aux, wire));
            out.push_back(Gate::reset(aux, 0));
        }
    }
}

}  // namespace

ProbCircuit lower_to_universal(const ProbCircuit &K) {
    ProbCircuit out;
    out.width = K.width + kLoweringAuxWires;
    out.register_width = K.register_width;
    out.num_blocks = K.num_blocks;
    if (out.width > 64) {
        throw PostlogError("lowered circuit width exceeds 64 wires");
    }
    const int aux_base = K.width;
    size_t next_marker = 0;
    size_t next_checkpoint = 0;
    std::vector<Gate> expansion;
    for (size_t gi = 0; gi <= K.gates.size(); gi++) {
        while (next_marker < K.markers.size() && K.markers[next_marker].position == gi) {
            out.mark(K.markers[next_marker].label);
            next_marker++;
        }
        while (next_checkpoint < K.checkpoints.size() && K.checkpoints[next_checkpoint] == gi) {
            out.checkpoints.push_back(out.gates.size());
            next_checkpoint++;
        }
        if (gi == K.gates.size()) {
            break;
        }
        const Gate &g = K.gates[gi];
        if (classify_universal(g) != UniversalKind::other) {
            out.add(g);
            continue;
        }
        expansion.clear();
        expand_det(g, aux_base, expansion);
        for (auto &e : expansion) {
            out.add(std::move(e));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Exact simulation

uint64_t register_value(uint64_t wires, int register_width) {
    uint64_t v = 0;
    for (int k = 0; k < register_width; k++) {
        v = (v << 1) | ((wires >> (kRegisterBase + k)) & 1);
    }
    return v;
}

uint64_t register_mask(uint64_t value, int register_width) {
    uint64_t wires = 0;
    for (int k = 0; k < register_width; k++) {
        if ((value >> (register_width - 1 - k)) & 1) {
            wires |= uint64_t{1} << (kRegisterBase + k);
        }
    }
    return wires;
}

namespace {

// Every mass in a circuit run is num / 2^exponent with a shared exponent equal to the number of
// coins applied so far, so exact integer numerators suffice.
struct DyadicState {
    std::vector<std::pair<uint64_t, uint64_t>> entries;
    unsigned exponent = 0;

    void merge() {
        std::sort(entries.begin(), entries.end());
        size_t w = 0;
        for (size_t r = 0; r < entries.size(); r++) {
            if (w > 0 && entries[w - 1].first == entries[r].first) {
                entries[w - 1].second += entries[r].second;
            } else {
                entries[w++] = entries[r];
            }
        }
        entries.resize(w);
    }

    Rational mass(uint64_t num) const {
        Rational r{mpz_class(std::to_string(num))};
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), exponent);
        return r;
    }
};

std::map<uint64_t, Rational> marginal(const DyadicState &st, int register_width) {
    std::map<uint64_t, uint64_t> nums;
    for (const auto &[key, num] : st.entries) {
        nums[register_value(key, register_width)] += num;
    }
    std::map<uint64_t, Rational> out;
    for (const auto &[v, num] : nums) {
        out.emplace(v, st.mass(num));
    }
    return out;
}

}  // namespace

CircuitRun simulate_prob_circuit_exact(const ProbCircuit &K, uint64_t initial) {
    if (K.width > 64) {
        throw PostlogError("exact simulation supports at most 64 wires");
    }
    CircuitRun run;
    DyadicState st;
    st.entries.push_back({initial, 1});
    size_t next_checkpoint = 0;
    for (size_t gi = 0; gi <= K.gates.size(); gi++) {
        while (next_checkpoint < K.checkpoints.size() && K.checkpoints[next_checkpoint] == gi) {
            run.register_marginals.push_back(marginal(st, K.register_width));
            next_checkpoint++;
        }
        if (gi == K.gates.size()) {
            break;
        }
        const Gate &g = K.gates[gi];
        switch (g.kind) {
            case GateKind::coin: {
                if (st.exponent >= 63) {
                    throw PostlogError("exact simulation supports at most 63 coin gates");
                }
                uint64_t bit = uint64_t{1} << g.targets[0];
                size_t n = st.entries.size();
                st.entries.reserve(2 * n);
                for (size_t i = 0; i < n; i++) {
                    auto [key, num] = st.entries[i];
                    st.entries[i].first = key & ~bit;
                    st.entries.push_back({key | bit, num});
                }
                st.exponent++;
                st.merge();
                break;
            }
            case GateKind::reset: {
                uint64_t bit = uint64_t{1} << g.targets[0];
                for (auto &e : st.entries) {
                    e.first = g.value ? (e.first | bit) : (e.first & ~bit);
                }
                st.merge();
                break;
            }
            case GateKind::det: {
                const size_t k = g.targets.size();
                for (auto &e : st.entries) {
                    size_t row = 0;
                    for (size_t i = 0; i < k; i++) {
                        row |= ((e.first >> g.targets[i]) & 1) << i;
                    }
                    uint8_t o = g.table[row];
                    for (size_t i = 0; i < k; i++) {
                        uint64_t bit = uint64_t{1} << g.targets[i];
                        e.first = ((o >> i) & 1) ? (e.first | bit) : (e.first & ~bit);
                    }
                }
                if (!g.is_injective()) {
                    st.merge();
                }
                break;
            }
        }
        run.max_support = std::max(run.max_support, st.entries.size());
    }
    for (const auto &[key, num] : st.entries) {
        run.final.emplace(key, st.mass(num));
    }
    return run;
}

Rational wire_marginal(const CircuitDistribution &d, int wire) {
    Rational p;
    for (const auto &[key, m] : d) {
        if ((key >> wire) & 1) {
            p += m;
        }
    }
    return p;
}

std::string format_circuit_dump(const ProbCircuit &K) {
    std::ostringstream out;
    out << "width=" << K.width << " gates=" << K.gates.size() << "\n";
    static const char *hex = "0123456789abcdef";
    size_t next_marker = 0;
    for (size_t gi = 0; gi <= K.gates.size(); gi++) {
        while (next_marker < K.markers.size() && K.markers[next_marker].position == gi) {
            out << "# " << K.markers[next_marker].label << "\n";
            next_marker++;
        }
        if (gi == K.gates.size()) {
            break;
        }
        const Gate &g = K.gates[gi];
        switch (g.kind) {
            case GateKind::coin:
                out << "COIN " << g.targets[0] << "\n";
                break;
            case GateKind::reset:
                out << "RESET " << g.targets[0] << " " << g.value << "\n";
                break;
            case GateKind::det:
                out << "DET";
                for (int t : g.targets) {
                    out << " " << t;
                }
                out << " table=";
                for (uint8_t o : g.table) {
                    out << hex[o & 15];
                }
                out << "\n";
                break;
        }
    }
    return out.str();
}

}  // namespace postlog
