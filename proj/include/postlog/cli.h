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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace postlog {

/// Parsed command line.
struct RunConfig {
    std::string command;
    /// construct: unbounded, restart, zero-error or to-ntm. dump: machine, matrix, configs,
    /// circuit, lowered or state.
    std::string mode;
    std::string machine_path;
    std::string second_machine_path;
    std::string input;
    int T = 0;
    int space_bound = 0;
    int p = 0;
    int max_T = 6;
    std::vector<std::string> probes;
    std::optional<int> sample_runs;
    uint64_t seed = 0;
    uint64_t cap = uint64_t{1} << 20;
    std::string output_path;
    bool dump_state = false;
    bool dump_matrix = false;
    bool dump_configs = false;
    bool dump_circuit = false;
};

struct ExecResult {
    /// 0 success, 1 domain error, 2 usage error.
    int exit_code = 0;
    std::string out;
    std::string err;
};

/// Runs one command. Reports are `key=value` lines with rationals as p/q and floats with 12
/// significant digits, and depend only on the config.
ExecResult execute(const RunConfig &config);

/// Parses argv and runs the command, writing to the given streams. Returns the exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

/// `%.12g`.
std::string format_double(double value);

}  // namespace postlog
