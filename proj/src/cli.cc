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

#include "postlog/cli.h"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "postlog/amplification.h"
#include "postlog/canonical.h"
#include "postlog/config_space.h"
#include "postlog/constructions.h"
#include "postlog/error.h"
#include "postlog/machine_file.h"
#include "postlog/oracle.h"
#include "postlog/prob_circuit.h"
#include "postlog/quantum.h"

namespace postlog {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

namespace {

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

void require_machine(const RunConfig &c) {
    if (c.machine_path.empty()) {
        throw UsageError("a machine file is required");
    }
}

void require_clock(const RunConfig &c) {
    if (c.T <= 0) {
        throw UsageError("--T must be a positive integer");
    }
}

void require_space(const RunConfig &c) {
    if (c.space_bound <= 0) {
        throw UsageError("--space must be a positive integer");
    }
}

void write_output(const RunConfig &c, const std::string &text, std::ostringstream &out) {
    if (c.output_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.output_path);
    if (!f) {
        throw PostlogError("cannot write '" + c.output_path + "'");
    }
    f << text;
    out << "wrote=" << c.output_path << "\n";
}

Pipeline build_pipeline(const RunConfig &c) {
    require_machine(c);
    require_clock(c);
    require_space(c);
    return Pipeline::build(load_machine_file(c.machine_path), c.input, c.T, c.space_bound, c.cap);
}

void print_distribution(std::ostringstream &out, const OutcomeDistribution &d) {
    out << "p_acc=" << format_rational(d.p_acc) << "\n";
    out << "p_rej=" << format_rational(d.p_rej) << "\n";
    out << "p_npost=" << format_rational(d.p_npost) << "\n";
    out << "p_nonhalt=" << format_rational(d.p_nonhalt) << "\n";
}

void cmd_validate(const RunConfig &c, std::ostringstream &out, int &code) {
    require_machine(c);
    auto spec = load_machine_file(c.machine_path);
    auto findings = validate_well_formed(spec);
    out << "kind=" << kind_name(spec.kind) << "\n";
    out << "states=" << spec.num_states() << "\n";
    out << "well_formed=" << (findings.empty() ? "true" : "false") << "\n";
    for (const auto &f : findings) {
        out << "finding=" << f.tag << ": " << f.message << "\n";
    }
    bool ok = findings.empty();
    if (c.T > 0) {
        auto rep = check_canonical(spec, c.input, c.T);
        out << "canonical=" << (rep.is_canonical ? "true" : "false") << "\n";
        for (const auto &v : rep.violations) {
            out << "violation=" << v.tag << ": " << v.message << "\n";
        }
        ok &= rep.is_canonical;
    }
    code = ok ? 0 : 1;
}

void cmd_oracle(const RunConfig &c, std::ostringstream &out) {
    require_machine(c);
    require_clock(c);
    auto spec = load_machine_file(c.machine_path);
    OracleLimits limits;
    if (c.space_bound > 0) {
        limits.space_cap = (size_t)c.space_bound;
    }
    auto d = run_exhaustive(spec, c.input, c.T, limits);
    out << "input=" << c.input << "\n";
    out << "T=" << c.T << "\n";
    print_distribution(out, d);
    if (d.p_nonhalt == 0 && d.p_acc + d.p_rej > 0) {
        auto [acc, rej] = postselect_normalize(d);
        out << "p_acc_post=" << format_rational(acc) << "\n";
        out << "p_rej_post=" << format_rational(rej) << "\n";
    }
}

void cmd_canonicalize(const RunConfig &c, std::ostringstream &out) {
    require_machine(c);
    require_clock(c);
    require_space(c);
    auto spec = load_machine_file(c.machine_path);
    std::vector<std::string> probes = c.probes;
    if (probes.empty()) {
        probes.push_back(c.input);
    }
    auto canon = canonicalize(spec, c.T, c.space_bound, probes);
    write_output(c, format_machine_file(canon), out);
    if (!c.output_path.empty()) {
        out << "states=" << canon.num_states() << "\n";
        out << "work_cells=" << canonical_work_cells(spec, c.space_bound) << "\n";
    }
}

void print_sizes(std::ostringstream &out, const Pipeline &pl) {
    out << "A=" << format_rational(pl.A) << "\n";
    out << "N=" << pl.matrix.dimension() << "\n";
    out << "l=" << pl.matrix.space.layout.length() << "\n";
}

void cmd_compile(const RunConfig &c, std::ostringstream &out, bool lowered) {
    require_machine(c);
    require_clock(c);
    require_space(c);
    auto spec = load_machine_file(c.machine_path);
    auto oracle = run_exhaustive(spec, c.input, c.T);
    auto P = build_configuration_matrix(spec, c.input, c.space_bound, c.cap);
    auto K = compile_blocks(P, c.T);
    out << "A=" << format_rational(oracle.p_acc) << "\n";
    out << "N=" << P.dimension() << "\n";
    out << "l=" << P.space.layout.length() << "\n";
    const ProbCircuit *shown = &K;
    ProbCircuit L;
    if (lowered) {
        L = lower_to_universal(K);
        shown = &L;
    }
    out << "width=" << shown->width << "\n";
    out << "gates=" << shown->gates.size() << "\n";
    out << "blocks=" << shown->num_blocks << "\n";
    if (c.dump_matrix) {
        out << format_matrix_dump(P);
    }
    if (c.dump_configs) {
        out << format_config_table(spec, P.space);
    }
    if (c.dump_circuit) {
        write_output(c, format_circuit_dump(*shown), out);
    }
}

void cmd_simulate(const RunConfig &c, std::ostringstream &out) {
    require_machine(c);
    require_clock(c);
    require_space(c);
    auto spec = load_machine_file(c.machine_path);
    auto oracle = run_exhaustive(spec, c.input, c.T);
    auto P = build_configuration_matrix(spec, c.input, c.space_bound, c.cap);
    auto K = compile_blocks(P, c.T);
    auto L = lower_to_universal(K);
    auto rk = simulate_prob_circuit_exact(K);
    auto rl = simulate_prob_circuit_exact(L);
    out << "A=" << format_rational(oracle.p_acc) << "\n";
    out << "P_wire0=" << format_rational(wire_marginal(rk.final, kRandomWire)) << "\n";
    out << "P_wire0_lowered=" << format_rational(wire_marginal(rl.final, kRandomWire)) << "\n";
    out << "max_support=" << rk.max_support << "\n";
    out << "max_support_lowered=" << rl.max_support << "\n";
}

void cmd_quantum_run(const RunConfig &c, std::ostringstream &out) {
    auto pl = build_pipeline(c);
    print_sizes(out, pl);
    out << "wires=" << pl.coherent.state.num_wires() << "\n";
    out << "gates=" << pl.coherent.gates_applied << "\n";
    out << "log_survival=" << format_double(pl.coherent.state.log_survival()) << "\n";
    out << "u0=" << format_double(pl.u_tilde.a0.real()) << "\n";
    out << "u1=" << format_double(pl.u_tilde.a1.real()) << "\n";
    out << "u_log_survival=" << format_double(pl.u_tilde.log_survival) << "\n";
    if (c.dump_state) {
        out << pl.coherent.state.dump();
    }
}

void cmd_amplify(const RunConfig &c, std::ostringstream &out) {
    auto pl = build_pipeline(c);
    auto r = run_M_p(pl, c.p);
    out << "A=" << format_rational(pl.A) << "\n";
    out << "T=" << pl.T << "\n";
    out << "p=" << r.p << "\n";
    out << "u0=" << format_double(r.state.a0.real()) << "\n";
    out << "u1=" << format_double(r.state.a1.real()) << "\n";
    out << "P_plus=" << format_double(r.p_plus) << "\n";
    out << "P_minus=" << format_double(r.p_minus) << "\n";
    out << "outcome=" << (r.outcome > 0 ? "+" : "-") << "\n";
    out << "log_survival=" << format_double(r.log_survival) << "\n";
}

void cmd_decide(const RunConfig &c, std::ostringstream &out) {
    auto pl = build_pipeline(c);
    std::optional<SampleOptions> sample;
    if (c.sample_runs) {
        sample = SampleOptions{*c.sample_runs, c.seed};
    }
    auto tr = overall_decide(pl, sample);
    out << "A=" << format_rational(tr.A) << " T=" << tr.T << " C=" << tr.counter
        << " P_allplus=" << format_double(tr.p_all_plus) << " P_allminus=" << format_double(tr.p_all_minus)
        << " p_acc=" << format_double(tr.p_acc) << " verdict=" << tr.verdict << "\n";
    if (tr.sample) {
        out << "sample_runs=" << tr.sample->runs << " seed=" << tr.sample->seed << " accept=" << tr.sampled_accept
            << " reject=" << tr.sampled_reject << " nonpost=" << tr.sampled_nonpost << "\n";
    }
}

void cmd_verify_bounds(const RunConfig &c, std::ostringstream &out, int &code) {
    if (c.max_T <= 0 || c.max_T > 20) {
        throw UsageError("--max-T must lie in [1,20]");
    }
    auto rep = verify_y_bounds(c.max_T);
    out << "y_plus=" << format_double(rep.y_plus) << "\n";
    out << "y_prime_minus=" << format_double(rep.y_prime_minus) << "\n";
    out << "bound=25/34\n";
    out << "bound_exceeds_7/10=" << (rep.exceeds_seven_tenths ? "true" : "false") << "\n";
    out << "max_T=" << rep.max_T << "\n";
    out << "cases=" << rep.cases << "\n";
    out << "failures=" << rep.failures << "\n";
    out << "worst_case=" << format_rational(rep.worst_case) << "\n";
    if (!rep.first_failure.empty()) {
        out << "first_failure=" << rep.first_failure << "\n";
    }
    code = rep.failures == 0 && rep.exceeds_seven_tenths ? 0 : 1;
}

void cmd_coeq(const RunConfig &c, std::ostringstream &out) {
    auto pl = build_pipeline(c);
    auto r = coeq_recognize(pl);
    out << "A=" << format_rational(r.A) << "\n";
    out << "T=" << pl.T << "\n";
    out << "p_acc=" << format_double(r.p_acc) << "\n";
    out << "p_rej=" << format_double(r.p_rej) << "\n";
    out << "exact_p_acc=" << format_rational(r.exact_p_acc) << "\n";
    out << "verdict=" << (r.p_acc > r.p_rej ? "accept" : "reject") << "\n";
}

// Construction modes, with the short aliases kept for scripts that use them.
const std::map<std::string, std::string> kConstructionNames{
    {"unbounded", "unbounded"},
    {"restart", "restart"},
    {"zero-error", "zero-error"},
    {"to-ntm", "to-ntm"},
    {"thm1", "unbounded"},
    {"thm3", "restart"},
    {"thm4-combine", "zero-error"},
    {"thm4-ntm", "to-ntm"},
};

std::string construction_name(const std::string &mode) {
    auto it = kConstructionNames.find(mode);
    return it == kConstructionNames.end() ? mode : it->second;
}

void cmd_construct(const RunConfig &c, std::ostringstream &out) {
    require_machine(c);
    auto spec = load_machine_file(c.machine_path);
    const std::string mode = construction_name(c.mode);
    if (mode == "unbounded") {
        write_output(c, format_machine_file(postselect_to_unbounded(spec)), out);
    } else if (mode == "restart") {
        auto rm = postselect_to_restart(spec);
        write_output(c, format_restart_machine(rm), out);
        if (c.T > 0) {
            auto sem = restart_semantics_exact(rm, c.input, c.T);
            out << "; limit_acc=" << format_rational(sem.limit_acc) << "\n";
            out << "; expected_steps=" << format_rational(sem.expected_steps) << "\n";
        }
    } else if (mode == "zero-error") {
        if (c.second_machine_path.empty()) {
            throw UsageError("zero-error needs --second");
        }
        require_clock(c);
        auto n2 = load_machine_file(c.second_machine_path);
        write_output(c, format_machine_file(combine_ntms_zero_error(spec, n2, c.probes, c.T)), out);
    } else if (mode == "to-ntm") {
        write_output(c, format_machine_file(postptm_to_ntm(spec)), out);
    } else {
        throw UsageError("unknown construction '" + c.mode + "'");
    }
}

void cmd_dump(const RunConfig &c, std::ostringstream &out) {
    require_machine(c);
    auto spec = load_machine_file(c.machine_path);
    if (c.mode == "machine") {
        write_output(c, format_machine_file(spec), out);
        return;
    }
    require_space(c);
    if (c.mode == "configs") {
        write_output(c, format_config_table(spec, enumerate_configurations(spec, c.input, c.space_bound, c.cap)), out);
        return;
    }
    auto P = build_configuration_matrix(spec, c.input, c.space_bound, c.cap);
    if (c.mode == "matrix") {
        write_output(c, format_matrix_dump(P), out);
        return;
    }
    require_clock(c);
    auto K = compile_blocks(P, c.T);
    if (c.mode == "circuit") {
        write_output(c, format_circuit_dump(K), out);
    } else if (c.mode == "lowered") {
        write_output(c, format_circuit_dump(lower_to_universal(K)), out);
    } else if (c.mode == "state") {
        write_output(c, run_postselected_circuit(lower_to_universal(K)).state.dump(), out);
    } else {
        throw UsageError("unknown dump kind '" + c.mode + "'");
    }
}

}  // namespace

ExecResult execute(const RunConfig &c) {
    ExecResult res;
    std::ostringstream out;
    try {
        int code = 0;
        if (c.command == "validate") {
            cmd_validate(c, out, code);
        } else if (c.command == "oracle") {
            cmd_oracle(c, out);
        } else if (c.command == "canonicalize") {
            cmd_canonicalize(c, out);
        } else if (c.command == "compile") {
            cmd_compile(c, out, false);
        } else if (c.command == "lower") {
            cmd_compile(c, out, true);
        } else if (c.command == "simulate") {
            cmd_simulate(c, out);
        } else if (c.command == "quantum-run") {
            cmd_quantum_run(c, out);
        } else if (c.command == "amplify") {
            cmd_amplify(c, out);
        } else if (c.command == "decide") {
            cmd_decide(c, out);
        } else if (c.command == "verify-bounds") {
            cmd_verify_bounds(c, out, code);
        } else if (c.command == "coeq") {
            cmd_coeq(c, out);
        } else if (c.command == "construct") {
            cmd_construct(c, out);
        } else if (c.command == "dump") {
            cmd_dump(c, out);
        } else {
            throw UsageError("unknown command '" + c.command + "'");
        }
        res.exit_code = code;
    } catch (const UsageError &e) {
        res.exit_code = 2;
        res.err = std::string("usage error: ") + e.what() + "\n";
    } catch (const ParseError &e) {
        res.exit_code = 1;
        res.err = c.machine_path + ":" + e.what() + "\n";
    } catch (const std::exception &e) {
        res.exit_code = 1;
        res.err = std::string("error: ") + e.what() + "\n";
    }
    res.out = out.str();
    return res;
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Compile, simulate and decide with space-bounded post-selecting machines."};
    app.require_subcommand(1, 1);
    RunConfig cfg;
    int sample = 0;

    auto machine = [&](CLI::App *sub) { sub->add_option("machine", cfg.machine_path, "Machine file")->required(); };
    auto input = [&](CLI::App *sub) { sub->add_option("-x,--input", cfg.input, "Input string (default empty)"); };
    auto clock = [&](CLI::App *sub, bool required) {
        auto *o = sub->add_option("-T,--T", cfg.T, "Clock / step budget");
        if (required) {
            o->required();
        }
    };
    auto space = [&](CLI::App *sub, bool required) {
        auto *o = sub->add_option("-S,--space", cfg.space_bound, "Work-tape space bound");
        if (required) {
            o->required();
        }
    };
    auto cap = [&](CLI::App *sub) { sub->add_option("--cap", cfg.cap, "Maximum number of configurations"); };
    auto output = [&](CLI::App *sub) { sub->add_option("-o,--output", cfg.output_path, "Write the result here"); };
    auto pipeline = [&](CLI::App *sub) {
        machine(sub);
        input(sub);
        clock(sub, true);
        space(sub, true);
        cap(sub);
    };

    auto *validate = app.add_subcommand("validate", "Check well-formedness (and canonical form with --T)");
    machine(validate);
    input(validate);
    clock(validate, false);

    auto *oracle = app.add_subcommand("oracle", "Exact outcome distribution by exhaustive run");
    machine(oracle);
    input(oracle);
    clock(oracle, true);
    space(oracle, false);

    auto *canon = app.add_subcommand("canonicalize", "Rewrite into canonical form for a clock");
    machine(canon);
    input(canon);
    clock(canon, true);
    space(canon, true);
    canon->add_option("--probe", cfg.probes, "Inputs to certify (default: --input)");
    output(canon);

    auto *compile = app.add_subcommand("compile", "Build the configuration matrix and block circuit");
    pipeline(compile);
    compile->add_flag("--dump-matrix", cfg.dump_matrix, "Print the configuration matrix");
    compile->add_flag("--dump-configs", cfg.dump_configs, "Print the configuration table");
    compile->add_flag("--dump-circuit", cfg.dump_circuit, "Print the circuit");
    output(compile);

    auto *lower = app.add_subcommand("lower", "Compile and lower to NOT/AND/OR/reset");
    pipeline(lower);
    lower->add_flag("--dump-circuit", cfg.dump_circuit, "Print the lowered circuit");
    output(lower);

    auto *simulate = app.add_subcommand("simulate", "Exact simulation of both circuits");
    pipeline(simulate);

    auto *qrun = app.add_subcommand("quantum-run", "Coherent post-selected simulation");
    pipeline(qrun);
    qrun->add_flag("--dump-state", cfg.dump_state, "Print the final state vector");

    auto *amplify = app.add_subcommand("amplify", "One amplifier run for a sweep parameter");
    pipeline(amplify);
    amplify->add_option("-p,--p", cfg.p, "Sweep parameter in [0, T-1]")->required();

    auto *decide = app.add_subcommand("decide", "Full sweep and verdict");
    pipeline(decide);
    decide->add_option("--sample", sample, "Also draw this many Monte Carlo sweeps");
    decide->add_option("--seed", cfg.seed, "Seed for --sample");

    auto *bounds = app.add_subcommand("verify-bounds", "Check the per-run probability bound");
    bounds->add_option("--max-T", cfg.max_T, "Largest clock in the exhaustive scan");

    auto *coeq = app.add_subcommand("coeq", "Exact-counting recognizer");
    pipeline(coeq);

    auto *construct = app.add_subcommand("construct", "Machine transformations");
    std::vector<std::string> construction_modes;
    for (const auto &[name, target] : kConstructionNames) {
        construction_modes.push_back(name);
    }
    construct->add_option("mode", cfg.mode, "unbounded | restart | zero-error | to-ntm")
        ->required()
        ->check(CLI::IsMember(construction_modes));
    machine(construct);
    construct->add_option("--second", cfg.second_machine_path, "Complement NTM for zero-error");
    construct->add_option("--corpus", cfg.probes, "Inputs on which to check the promise");
    input(construct);
    clock(construct, false);
    output(construct);

    auto *dump = app.add_subcommand("dump", "Print one artifact");
    dump->add_option("mode", cfg.mode, "machine | configs | matrix | circuit | lowered | state")
        ->required()
        ->check(CLI::IsMember({"machine", "configs", "matrix", "circuit", "lowered", "state"}));
    machine(dump);
    input(dump);
    clock(dump, false);
    space(dump, false);
    cap(dump);
    output(dump);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        std::ostringstream o;
        std::ostringstream e2;
        int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    if (decide->count("--sample") > 0) {
        cfg.sample_runs = sample;
    }
    auto res = execute(cfg);
    out << res.out;
    err << res.err;
    return res.exit_code;
}

}  // namespace postlog
