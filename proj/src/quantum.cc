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

#include "postlog/quantum.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "postlog/error.h"

namespace postlog {

double EmbeddedGate::e() const {
    return std::sqrt(e_squared);
}

double EmbeddedGate::unitarity_error() const {
    Eigen::MatrixXd d = U.transpose() * U - Eigen::MatrixXd::Identity(U.rows(), U.cols());
    return d.cwiseAbs().maxCoeff();
}

double EmbeddedGate::action_error() const {
    return (e() * block - source).cwiseAbs().maxCoeff();
}

namespace {

// Completes `rows` (orthonormal, in aux-major index order) to a full orthogonal matrix by
// orthonormalizing standard basis vectors in index order, then reorders basis indices to
// logical * A + aux.
Eigen::MatrixXd complete_and_reorder(const Eigen::MatrixXd &rows, int d, int A) {
    const int D = d * A;
    Eigen::MatrixXd W(D, D);
    W.topRows(rows.rows()) = rows;
    int filled = (int)rows.rows();
    for (int b = 0; b < D && filled < D; b++) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(D, b);
        for (int pass = 0; pass < 2; pass++) {
            for (int r = 0; r < filled; r++) {
                v -= W.row(r).dot(v) * W.row(r).transpose();
            }
        }
        double n = v.norm();
        if (n > 1e-9) {
            W.row(filled++) = (v / n).transpose();
        }
    }
    if (filled != D) {
        throw PostlogError("row completion failed");
    }
    auto reorder = [&](int aux_major) {
        int aux = aux_major / d;
        int logical = aux_major % d;
        return logical * A + aux;
    };
    Eigen::MatrixXd U(D, D);
    for (int r = 0; r < D; r++) {
        for (int c = 0; c < D; c++) {
            U(reorder(r), reorder(c)) = W(r, c);
        }
    }
    return U;
}

Eigen::MatrixXd extract_block(const Eigen::MatrixXd &U, int d, int A) {
    Eigen::MatrixXd B(d, d);
    for (int r = 0; r < d; r++) {
        for (int c = 0; c < d; c++) {
            B(r, c) = U(r * A, c * A);
        }
    }
    return B;
}

int log2_exact(int d) {
    int k = 0;
    while ((1 << k) < d) {
        k++;
    }
    return k;
}

}  // namespace

Eigen::Matrix4d coin_unitary() {
    Eigen::Matrix4d U;
    U << 1, 1, 1, 1, 1, 1, -1, -1, 1, -1, 1, -1, 1, -1, -1, 1;
    return U / 2;
}

EmbeddedGate embedded_coin() {
    EmbeddedGate g;
    g.U = coin_unitary();
    g.logical_wires = 1;
    g.aux_wires = 1;
    g.e_squared = 1;
    g.block = extract_block(g.U, 2, 2);
    g.source = Eigen::MatrixXd::Constant(2, 2, 0.5);
    return g;
}

EmbeddedGate embed_gate(const Eigen::MatrixXd &G) {
    const int d = (int)G.rows();
    if (G.cols() != d || (d != 2 && d != 4)) {
        throw PostlogError("embed_gate expects a 2x2 or 4x4 matrix");
    }
    for (int c = 0; c < d; c++) {
        int ones = 0;
        for (int r = 0; r < d; r++) {
            if (G(r, c) != 0 && G(r, c) != 1) {
                throw PostlogError("embed_gate expects a 0/1 matrix");
            }
            ones += G(r, c) == 1;
        }
        if (ones != 1) {
            throw PostlogError("embed_gate expects a total gate (one 1 per column)");
        }
    }
    // Columns of a total gate have disjoint supports, so its rows are already pairwise
    // orthogonal and the correction block G' is zero; G'' pads every row to length e.
    const int A = 4;
    std::vector<double> row_norm2(d);
    double e2 = 1;
    for (int r = 0; r < d; r++) {
        row_norm2[r] = G.row(r).squaredNorm();
        e2 = std::max(e2, row_norm2[r]);
    }
    const double e = std::sqrt(e2);
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(d, A * d);
    for (int r = 0; r < d; r++) {
        rows.block(r, 0, 1, d) = G.row(r);
        rows(r, 2 * d + r) = std::sqrt(e2 - row_norm2[r]);
    }
    rows /= e;

    EmbeddedGate g;
    g.U = complete_and_reorder(rows, d, A);
    g.source = G;
    g.logical_wires = log2_exact(d);
    g.aux_wires = 2;
    g.e_squared = e2;
    g.block = extract_block(g.U, d, A);
    return g;
}

EmbeddedGate embed_gate(const Gate &gate) {
    auto m = gate.matrix();
    const int d = (int)m.size();
    Eigen::MatrixXd G(d, d);
    for (int r = 0; r < d; r++) {
        for (int c = 0; c < d; c++) {
            G(r, c) = m[r][c];
        }
    }
    return embed_gate(G);
}

EmbeddedGate embed_nonunitary(const Eigen::Matrix2d &M) {
    Eigen::Matrix2d MMt = M * M.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(MMt);
    double lambda = eig.eigenvalues().maxCoeff();
    double e2 = std::max(1.0, std::ceil(lambda - 1e-9));
    if (!std::isfinite(e2) || e2 > 1e12) {
        throw PostlogError("no finite normalization for the requested map");
    }
    Eigen::Vector2d pad = (e2 - eig.eigenvalues().array()).max(0.0).sqrt();
    Eigen::Matrix2d X = eig.eigenvectors() * pad.asDiagonal() * eig.eigenvectors().transpose();
    const double e = std::sqrt(e2);
    Eigen::MatrixXd rows(2, 4);
    rows.leftCols(2) = M / e;
    rows.rightCols(2) = X / e;

    EmbeddedGate g;
    g.U = complete_and_reorder(rows, 2, 2);
    g.source = M;
    g.logical_wires = 1;
    g.aux_wires = 1;
    g.e_squared = e2;
    g.block = extract_block(g.U, 2, 2);
    return g;
}

EmbeddedGate embed_unitary_2wire(const Eigen::Matrix4d &U) {
    EmbeddedGate g;
    g.U = U;
    g.logical_wires = 1;
    g.aux_wires = 1;
    g.e_squared = 1;
    g.block = extract_block(g.U, 2, 2);
    g.source = g.block;
    return g;
}

Eigen::Matrix2d decision_operator() {
    Eigen::Matrix2d D;
    D << 0.5, 1.5, 0.5, -0.5;
    return D;
}

// ---------------------------------------------------------------------------------------------
// StateVector

StateVector::StateVector(int num_wires, uint64_t basis) : num_wires_(num_wires) {
    if (num_wires <= 0 || num_wires > 64) {
        throw PostlogError("state vectors support 1..64 wires");
    }
    entries_.push_back({basis, Amplitude(1.0)});
}

StateVector StateVector::from_entries(int num_wires, std::vector<std::pair<uint64_t, Amplitude>> entries) {
    StateVector s(num_wires);
    std::sort(entries.begin(), entries.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    double n = 0;
    for (const auto &e : entries) {
        n += std::norm(e.second);
    }
    if (n <= 0) {
        throw PostlogError("state has zero norm");
    }
    for (auto &e : entries) {
        e.second /= std::sqrt(n);
    }
    s.entries_ = std::move(entries);
    return s;
}

double StateVector::survival() const {
    return std::exp(log_survival_);
}

Amplitude StateVector::amplitude(uint64_t key) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const auto &e, uint64_t k) { return e.first < k; });
    if (it != entries_.end() && it->first == key) {
        return it->second;
    }
    return 0;
}

double StateVector::norm_squared() const {
    double n = 0;
    for (const auto &e : entries_) {
        n += std::norm(e.second);
    }
    return n;
}

double StateVector::apply(const EmbeddedGate &g, const std::vector<int> &targets) {
    const int k = g.logical_wires;
    const int d = 1 << k;
    if ((int)targets.size() != k) {
        throw PostlogError("gate expects " + std::to_string(k) + " target wires");
    }
    uint64_t mask = 0;
    uint64_t spread[16];
    for (int r = 0; r < d; r++) {
        spread[r] = 0;
        for (int i = 0; i < k; i++) {
            if ((r >> i) & 1) {
                spread[r] |= uint64_t{1} << targets[i];
            }
        }
    }
    for (int t : targets) {
        if (t < 0 || t >= num_wires_ || ((mask >> t) & 1)) {
            throw PostlogError("invalid gate targets");
        }
        mask |= uint64_t{1} << t;
    }
    std::vector<std::pair<uint64_t, Amplitude>> out;
    out.reserve(entries_.size() * 2);
    for (const auto &[key, amp] : entries_) {
        int row = 0;
        for (int i = 0; i < k; i++) {
            row |= (int)((key >> targets[i]) & 1) << i;
        }
        uint64_t base = key & ~mask;
        for (int r = 0; r < d; r++) {
            double b = g.block(r, row);
            if (b != 0) {
                out.push_back({base | spread[r], b * amp});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    size_t w = 0;
    for (size_t r = 0; r < out.size(); r++) {
        if (w > 0 && out[w - 1].first == out[r].first) {
            out[w - 1].second += out[r].second;
        } else {
            out[w++] = out[r];
        }
    }
    out.resize(w);
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto &e) { return std::norm(e.second) == 0; }),
              out.end());
    double retained = 0;
    for (const auto &e : out) {
        retained += std::norm(e.second);
    }
    if (!(retained >= kSurvivalFloor)) {
        throw PostlogError("post-selection mass underflow");
    }
    double scale = 1 / std::sqrt(retained);
    for (auto &e : out) {
        e.second *= scale;
    }
    entries_ = std::move(out);
    log_survival_ += std::log(retained);
    return retained;
}

std::string StateVector::dump() const {
    std::ostringstream out;
    char buf[64];
    out << "wires=" << num_wires_ << "\n";
    std::snprintf(buf, sizeof buf, "%.12g", survival());
    out << "survival=" << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.12g", log_survival_);
    out << "log_survival=" << buf << "\n";
    for (const auto &[key, amp] : entries_) {
        std::string bits(num_wires_, '0');
        for (int w = 0; w < num_wires_; w++) {
            bits[w] = ((key >> w) & 1) ? '1' : '0';
        }
        char re[32];
        char im[32];
        std::snprintf(re, sizeof re, "%.12g", amp.real());
        std::snprintf(im, sizeof im, "%.12g", amp.imag());
        out << bits << " " << re << " " << im << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------------------------
// Circuit runs

const EmbeddedGate &EmbeddingCache::get(const Gate &g) {
    std::string key;
    key += (char)('0' + (int)g.kind);
    key += (char)('0' + (int)g.targets.size());
    key += (char)('0' + g.value);
    for (uint8_t o : g.table) {
        key += (char)('a' + o);
    }
    auto it = cache_.find(key);
    if (it != cache_.end()) {
        return it->second;
    }
    EmbeddedGate e = g.kind == GateKind::coin ? embedded_coin() : embed_gate(g);
    return cache_.emplace(key, std::move(e)).first->second;
}

namespace {

std::map<uint64_t, double> register_amplitudes(const StateVector &s, int register_width) {
    std::map<uint64_t, double> out;
    for (const auto &[key, amp] : s.entries()) {
        out[register_value(key, register_width)] += amp.real();
    }
    return out;
}

}  // namespace

QuantumRun run_postselected_circuit(const ProbCircuit &K, EmbeddingCache *cache) {
    EmbeddingCache local;
    EmbeddingCache &embeddings = cache != nullptr ? *cache : local;
    QuantumRun run;
    run.state = StateVector(K.width + 2);
    size_t next_checkpoint = 0;
    for (size_t gi = 0; gi <= K.gates.size(); gi++) {
        while (next_checkpoint < K.checkpoints.size() && K.checkpoints[next_checkpoint] == gi) {
            run.register_amplitudes.push_back(register_amplitudes(run.state, K.register_width));
            next_checkpoint++;
        }
        if (gi == K.gates.size()) {
            break;
        }
        const Gate &g = K.gates[gi];
        const EmbeddedGate &e = embeddings.get(g);
        run.state.apply(e, g.targets);
        run.log_e_squared_total += std::log(e.e_squared);
        run.gates_applied++;
    }
    return run;
}

DecisionState apply_single_wire(const DecisionState &s, const EmbeddedGate &g) {
    if (g.logical_wires != 1) {
        throw PostlogError("single-wire map expected");
    }
    double before = s.norm_squared();
    DecisionState out;
    out.a0 = g.block(0, 0) * s.a0 + g.block(0, 1) * s.a1;
    out.a1 = g.block(1, 0) * s.a0 + g.block(1, 1) * s.a1;
    double retained = out.norm_squared() / before;
    if (!(retained >= kSurvivalFloor)) {
        throw PostlogError("post-selection mass underflow");
    }
    double scale = 1 / std::sqrt(out.norm_squared());
    out.a0 *= scale;
    out.a1 *= scale;
    out.log_survival = s.log_survival + std::log(retained);
    return out;
}

DecisionState extract_u_tilde(const StateVector &state) {
    double stray = 0;
    for (const auto &[key, amp] : state.entries()) {
        if ((key >> 1) != 0) {
            stray += std::norm(amp);
        }
    }
    if (stray > kUnitaryTolerance) {
        throw PostlogError("decision wire is not separable: other wires carry squared norm " + std::to_string(stray));
    }
    DecisionState s;
    s.a0 = state.amplitude(0);
    s.a1 = state.amplitude(1);
    s.log_survival = state.log_survival();
    if (s.norm_squared() <= 0) {
        throw PostlogError("decision wire has zero amplitude");
    }
    double scale = 1 / std::sqrt(s.norm_squared());
    s.a0 *= scale;
    s.a1 *= scale;
    static const EmbeddedGate D = embed_nonunitary(decision_operator());
    return apply_single_wire(s, D);
}

std::pair<double, double> measure_pm(const DecisionState &s) {
    double n = s.norm_squared();
    double plus = std::norm(s.a0 + s.a1) / (2 * n);
    double minus = std::norm(s.a0 - s.a1) / (2 * n);
    return {plus, minus};
}

}  // namespace postlog
