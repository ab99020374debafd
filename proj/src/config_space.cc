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

#include "postlog/config_space.h"

#include <bit>
#include <deque>
#include <sstream>

#include "postlog/error.h"

namespace postlog {

int ceil_log2(uint64_t x) {
    return x <= 1 ? 0 : (int)std::bit_width(x - 1);
}

ConfigLayout ConfigLayout::make(int num_states, int input_length, int space_bound) {
    if (num_states <= 0 || input_length < 0 || space_bound <= 0) {
        throw PostlogError("configuration layout needs m > 0, n >= 0 and S > 0");
    }
    ConfigLayout l;
    l.num_states = num_states;
    l.input_length = input_length;
    l.space_bound = space_bound;
    l.state_bits = ceil_log2((uint64_t)num_states);
    l.head_in_bits = ceil_log2((uint64_t)input_length + 2);
    l.head_wk_bits = ceil_log2((uint64_t)space_bound);
    return l;
}

uint64_t ConfigLayout::count() const {
    if (space_bound >= 62) {
        return UINT64_MAX;
    }
    unsigned __int128 n = (unsigned __int128)num_states * (unsigned)(input_length + 2) * (uint64_t{1} << space_bound) *
                          (unsigned)space_bound;
    return n > UINT64_MAX ? UINT64_MAX : (uint64_t)n;
}

namespace {

void check_fields(const Configuration &c, const ConfigLayout &layout) {
    if (c.state < 0 || c.state >= layout.num_states || c.h_in < 0 || c.h_in > layout.input_length + 1 ||
        c.h_wk < 0 || c.h_wk >= layout.space_bound || (int)c.w.size() != layout.space_bound) {
        throw PostlogError("configuration field overflow");
    }
    for (char ch : c.w) {
        if (ch != '0' && ch != '1') {
            throw PostlogError("configuration tape must be binary");
        }
    }
}

}  // namespace

uint64_t encode_configuration_value(const Configuration &c, const ConfigLayout &layout) {
    check_fields(c, layout);
    if (layout.length() > 62) {
        throw PostlogError("configuration encoding longer than 62 bits");
    }
    uint64_t v = (uint64_t)c.state;
    v = (v << layout.head_in_bits) | (uint64_t)c.h_in;
    for (char ch : c.w) {
        v = (v << 1) | (ch == '1' ? 1 : 0);
    }
    v = (v << layout.head_wk_bits) | (uint64_t)c.h_wk;
    return v;
}

std::string encode_configuration(const Configuration &c, const ConfigLayout &layout) {
    uint64_t v = encode_configuration_value(c, layout);
    int l = layout.length();
    std::string bits(l, '0');
    for (int k = 0; k < l; k++) {
        bits[k] = ((v >> (l - 1 - k)) & 1) ? '1' : '0';
    }
    return bits;
}

Configuration decode_configuration_value(uint64_t value, const ConfigLayout &layout) {
    Configuration c;
    c.h_wk = (int)(value & ((uint64_t{1} << layout.head_wk_bits) - 1));
    value >>= layout.head_wk_bits;
    c.w.assign(layout.space_bound, '0');
    for (int k = layout.space_bound - 1; k >= 0; k--) {
        c.w[k] = (value & 1) ? '1' : '0';
        value >>= 1;
    }
    c.h_in = (int)(value & ((uint64_t{1} << layout.head_in_bits) - 1));
    value >>= layout.head_in_bits;
    c.state = (int)value;
    check_fields(c, layout);
    return c;
}

Configuration decode_configuration(const std::string &bits, const ConfigLayout &layout) {
    if ((int)bits.size() != layout.length()) {
        throw PostlogError("encoding has length " + std::to_string(bits.size()) + ", expected " +
                           std::to_string(layout.length()));
    }
    uint64_t v = 0;
    for (char ch : bits) {
        if (ch != '0' && ch != '1') {
            throw PostlogError("encoding must be a bit string");
        }
        v = (v << 1) | (ch == '1' ? 1 : 0);
    }
    return decode_configuration_value(v, layout);
}

bool ConfigSpace::in_bounds(const Configuration &c) const {
    return c.state >= 0 && c.state < layout.num_states && c.h_in >= 0 && c.h_in <= layout.input_length + 1 &&
           c.h_wk >= 0 && c.h_wk < layout.space_bound && (int)c.w.size() == layout.space_bound;
}

size_t ConfigSpace::index_of(const Configuration &c) const {
    if (!in_bounds(c)) {
        throw PostlogError("configuration outside the enumerated space");
    }
    uint64_t w = 0;
    for (char ch : c.w) {
        w = (w << 1) | (ch == '1' ? 1 : 0);
    }
    uint64_t idx = (uint64_t)c.state * (uint64_t)(layout.input_length + 2) + (uint64_t)c.h_in;
    idx = (idx << layout.space_bound) | w;
    idx = idx * (uint64_t)layout.space_bound + (uint64_t)c.h_wk;
    return (size_t)idx;
}

ConfigSpace enumerate_configurations(const MachineSpec &spec, const std::string &input, int space_bound,
                                     uint64_t cap) {
    ConfigSpace space;
    space.layout = ConfigLayout::make((int)spec.num_states(), (int)input.size(), space_bound);
    space.input = input;
    uint64_t n = space.layout.count();
    if (n > cap) {
        throw PostlogError("configuration count " + (n == UINT64_MAX ? std::string("(overflow)") : std::to_string(n)) +
                           " exceeds cap " + std::to_string(cap));
    }
    if (space.layout.length() > 62) {
        throw PostlogError("configuration encoding longer than 62 bits");
    }
    space.configs.reserve(n);
    const int S = space_bound;
    for (int s = 0; s < space.layout.num_states; s++) {
        for (int h = 0; h <= space.layout.input_length + 1; h++) {
            for (uint64_t w = 0; w < (uint64_t{1} << S); w++) {
                Configuration c;
                c.state = s;
                c.h_in = h;
                c.w.assign(S, '0');
                for (int k = 0; k < S; k++) {
                    if ((w >> (S - 1 - k)) & 1) {
                        c.w[k] = '1';
                    }
                }
                for (int hw = 0; hw < S; hw++) {
                    c.h_wk = hw;
                    space.configs.push_back(c);
                }
            }
        }
    }
    Configuration base;
    base.w.assign(S, '0');
    base.state = spec.initial;
    space.initial = space.index_of(base);
    base.state = spec.accept;
    space.accept = space.index_of(base);
    base.state = spec.reject;
    space.reject = space.index_of(base);
    return space;
}

std::pair<Configuration, Configuration> successors(const MachineSpec &spec, const ConfigSpace &space,
                                                   const Configuration &c) {
    if (spec.is_halting(c.state)) {
        throw PostlogError("no successor: configuration is halting");
    }
    if (!space.in_bounds(c)) {
        throw PostlogError("configuration outside the enumerated space");
    }
    const std::string &x = space.input;
    char sigma = (c.h_in == 0 || c.h_in == (int)x.size() + 1) ? kBlank : x[c.h_in - 1];
    char gamma = c.w[c.h_wk] == '1' ? '1' : kBlank;
    RuleKey key{c.state, sigma, gamma};
    const auto *rules = spec.rules(c.state, sigma, gamma);
    if (rules == nullptr) {
        throw PostlogError("no rule for " + spec.describe(key));
    }
    std::vector<const Rule *> live;
    for (const auto &r : *rules) {
        if (r.prob != 0) {
            live.push_back(&r);
        }
    }
    if (live.size() != 2 || live[0]->prob != Rational(1, 2) || live[1]->prob != Rational(1, 2)) {
        throw PostlogError("step at " + spec.describe(key) + " is not a fair two-way split");
    }
    auto apply = [&](const Rule &r) {
        if (r.write != kBlank && r.write != '0' && r.write != '1') {
            throw PostlogError(std::string("work symbol '") + r.write + "' is not binary");
        }
        Configuration n = c;
        n.w[c.h_wk] = r.write == '1' ? '1' : '0';
        n.state = r.next;
        n.h_in += r.d_in;
        n.h_wk += r.d_wk;
        if (!space.in_bounds(n)) {
            throw PostlogError("successor of " + spec.describe(key) + " leaves the configuration space (h_in=" +
                               std::to_string(n.h_in) + ", h_wk=" + std::to_string(n.h_wk) + ")");
        }
        return n;
    };
    return {apply(*live[0]), apply(*live[1])};
}

ConfigurationMatrix build_configuration_matrix(const MachineSpec &spec, const std::string &input, int space_bound,
                                               uint64_t cap) {
    ConfigurationMatrix P;
    P.space = enumerate_configurations(spec, input, space_bound, cap);
    const size_t N = P.space.size();
    P.columns.assign(N, {});
    P.branches.assign(N, {0, 0});
    std::vector<bool> done(N, false);

    auto fill = [&](size_t i, size_t a, size_t b) {
        P.branches[i] = {a, b};
        if (a == b) {
            P.columns[i] = {{a, Rational(1)}};
        } else {
            P.columns[i] = {{std::min(a, b), Rational(1, 2)}, {std::max(a, b), Rational(1, 2)}};
        }
        done[i] = true;
    };

    // Reachable configurations first: errors here are genuine.
    std::deque<size_t> queue{P.space.initial};
    std::vector<bool> seen(N, false);
    seen[P.space.initial] = true;
    while (!queue.empty()) {
        size_t i = queue.front();
        queue.pop_front();
        const auto &c = P.space.configs[i];
        if (spec.is_halting(c.state)) {
            fill(i, i, i);
            continue;
        }
        auto [c1, c2] = successors(spec, P.space, c);
        size_t a = P.space.index_of(c1);
        size_t b = P.space.index_of(c2);
        fill(i, a, b);
        for (size_t j : {a, b}) {
            if (!seen[j]) {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    for (size_t i = 0; i < N; i++) {
        if (done[i]) {
            continue;
        }
        const auto &c = P.space.configs[i];
        if (spec.is_halting(c.state)) {
            fill(i, i, i);
            continue;
        }
        try {
            auto [c1, c2] = successors(spec, P.space, c);
            fill(i, P.space.index_of(c1), P.space.index_of(c2));
        } catch (const PostlogError &) {
            // Unreachable and without a valid step: treat as absorbing.
            fill(i, i, i);
        }
    }
    return P;
}

std::vector<Rational> apply_matrix(const ConfigurationMatrix &P, const std::vector<Rational> &v) {
    std::vector<Rational> out(P.dimension());
    for (size_t i = 0; i < v.size(); i++) {
        if (v[i] == 0) {
            continue;
        }
        for (const auto &[j, p] : P.columns[i]) {
            out[j] += p * v[i];
        }
    }
    return out;
}

std::vector<std::vector<Rational>> configuration_trajectory(const ConfigurationMatrix &P, int T) {
    std::vector<std::vector<Rational>> traj;
    std::vector<Rational> v(P.dimension());
    v[P.space.initial] = 1;
    traj.push_back(v);
    for (int t = 0; t < T; t++) {
        traj.push_back(apply_matrix(P, traj.back()));
    }
    return traj;
}

std::pair<Rational, Rational> final_distribution(const ConfigurationMatrix &P, int T) {
    auto v = configuration_trajectory(P, T).back();
    for (size_t j = 0; j < v.size(); j++) {
        if (v[j] != 0 && j != P.space.accept && j != P.space.reject) {
            throw PostlogError("machine not canonical at clock T=" + std::to_string(T));
        }
    }
    return {v[P.space.accept], v[P.space.reject]};
}

std::string format_matrix_dump(const ConfigurationMatrix &P) {
    std::ostringstream out;
    out << "N=" << P.dimension() << "\n";
    for (size_t i = 0; i < P.dimension(); i++) {
        for (const auto &[j, p] : P.columns[i]) {
            out << j << " " << i << " " << format_rational(p) << "\n";
        }
    }
    return out.str();
}

std::string format_config_table(const MachineSpec &spec, const ConfigSpace &space) {
    std::ostringstream out;
    for (size_t i = 0; i < space.size(); i++) {
        const auto &c = space.configs[i];
        out << i << " " << encode_configuration(c, space.layout) << " " << spec.states[c.state] << " " << c.h_in << " "
            << c.w << " " << c.h_wk << "\n";
    }
    return out.str();
}

}  // namespace postlog
