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

#include "postlog/rational.h"

#include <stdexcept>

#include "postlog/error.h"

namespace postlog {

ParseError::ParseError(size_t line, size_t column, const std::string &message)
    : PostlogError(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {
}

std::string format_rational(const Rational &value) {
    Rational v = value;
    v.canonicalize();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

static bool is_integer_text(std::string_view text) {
    size_t i = 0;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        i++;
    }
    if (i == text.size()) {
        return false;
    }
    for (; i < text.size(); i++) {
        if (text[i] < '0' || text[i] > '9') {
            return false;
        }
    }
    return true;
}

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_text(num) || !is_integer_text(den) || den.front() == '-' || den.front() == '+') {
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    mpz_class n{std::string(num[0] == '+' ? num.substr(1) : num)};
    mpz_class d{std::string(den)};
    if (d == 0) {
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    }
    Rational r(n, d);
    r.canonicalize();
    return r;
}

bool is_dyadic(const Rational &value, unsigned *exponent) {
    Rational v = value;
    v.canonicalize();
    mpz_class d = v.get_den();
    unsigned k = 0;
    while (d % 2 == 0) {
        d /= 2;
        k++;
    }
    if (d != 1) {
        return false;
    }
    if (exponent != nullptr) {
        *exponent = k;
    }
    return true;
}

Rational dyadic(unsigned k) {
    Rational r(1);
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), k);
    return r;
}

}  // namespace postlog
