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

#include <string>
#include <string_view>

#include "postlog/machine.h"

namespace postlog {

/// Parses the line-oriented machine description:
///
///     ; comment
///     [machine]
///     kind = ptm
///     states = q0 q1 acc rej
///     initial = q0
///     accept = acc
///     reject = rej
///     input_alphabet = a b
///     work_alphabet = 0 1
///     [delta]
///     q0 # # -> q1 # +1 0 @ 1/2
///
/// The `=` after a key is optional. Symbols are single characters; `#` is the blank.
/// Throws ParseError with a line/column position on any syntax or structure problem,
/// including probabilities outside {0,1/2,1} for kind=ptm and an initial state without rules.
MachineSpec parse_machine_file(std::string_view text);

/// Reads and parses a file from disk. Throws PostlogError if it cannot be read.
MachineSpec load_machine_file(const std::string &path);

/// Serializes in the same format; parse_machine_file(format_machine_file(m)) reproduces m.
std::string format_machine_file(const MachineSpec &spec);

}  // namespace postlog
