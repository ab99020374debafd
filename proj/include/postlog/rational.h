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

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace postlog {

/// Exact rational number. All classical probabilities in the library use this type.
using Rational = mpq_class;

/// Formats as `p/q` in lowest terms. Integers keep the denominator: `1/1`, `0/1`.
std::string format_rational(const Rational &value);

/// Parses `p/q` or a bare integer `p`. Throws std::invalid_argument on malformed text
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// True when the denominator is a power of two. On success `*exponent` receives log2 of it.
bool is_dyadic(const Rational &value, unsigned *exponent = nullptr);

/// 2^-k as an exact rational.
Rational dyadic(unsigned k);

}  // namespace postlog
