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

#include "postlog/machine_file.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "postlog/error.h"

namespace postlog {

namespace {

struct Token {
    std::string text;
    size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        if (line[i] == ';') {
            break;
        }
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
            i++;
            continue;
        }
        size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != ';') {
            i++;
        }
        out.push_back(Token{std::string(line.substr(start, i - start)), start + 1});
    }
    return out;
}

struct HeaderValues {
    std::vector<Token> values;
    size_t line = 0;
};

int parse_direction(const Token &tok, size_t line) {
    if (tok.text == "-1") {
        return -1;
    }
    if (tok.text == "0") {
        return 0;
    }
    if (tok.text == "+1" || tok.text == "1") {
        return 1;
    }
    throw ParseError(line, tok.column, "head move '" + tok.text + "' not in {-1,0,+1}");
}

char parse_symbol(const Token &tok, size_t line) {
    if (tok.text.size() != 1) {
        throw ParseError(line, tok.column, "symbol '" + tok.text + "' must be a single character");
    }
    return tok.text[0];
}

}  // namespace

MachineSpec parse_machine_file(std::string_view text) {
    MachineSpec spec;
    std::map<std::string, HeaderValues> header;
    struct PendingRule {
        std::vector<Token> toks;
        size_t line;
    };
    std::vector<PendingRule> rule_lines;

    enum class Section { none, machine, delta } section = Section::none;
    size_t delta_line = 0;
    size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        line_no++;
        auto toks = tokenize(line);
        if (toks.empty()) {
            continue;
        }
        if (toks[0].text.front() == '[') {
            if (toks[0].text == "[machine]") {
                section = Section::machine;
            } else if (toks[0].text == "[delta]") {
                section = Section::delta;
                delta_line = line_no;
            } else {
                throw ParseError(line_no, toks[0].column, "unknown section " + toks[0].text);
            }
            if (toks.size() > 1) {
                throw ParseError(line_no, toks[1].column, "unexpected text after section header");
            }
            continue;
        }
        if (section == Section::none) {
            throw ParseError(line_no, toks[0].column, "content before any section");
        }
        if (section == Section::machine) {
            static const char *kKeys[] = {"kind", "states", "initial", "accept", "reject",
                                          "nonpost", "input_alphabet", "work_alphabet"};
            const std::string &key = toks[0].text;
            bool known = false;
            for (auto k : kKeys) {
                known |= key == k;
            }
            if (!known) {
                throw ParseError(line_no, toks[0].column, "unknown key '" + key + "'");
            }
            if (header.count(key)) {
                throw ParseError(line_no, toks[0].column, "duplicate key '" + key + "'");
            }
            size_t first = 1;
            if (toks.size() > 1 && toks[1].text == "=") {
                first = 2;
            }
            header[key] = HeaderValues{std::vector<Token>(toks.begin() + first, toks.end()), line_no};
        } else {
            rule_lines.push_back(PendingRule{std::move(toks), line_no});
        }
    }

    auto require = [&](const std::string &key) -> const HeaderValues & {
        auto it = header.find(key);
        if (it == header.end()) {
            throw ParseError(1, 1, "missing key '" + key + "' in [machine]");
        }
        return it->second;
    };
    auto single = [&](const std::string &key) -> const Token & {
        const auto &hv = require(key);
        if (hv.values.size() != 1) {
            throw ParseError(hv.line, 1, "key '" + key + "' expects exactly one value");
        }
        return hv.values[0];
    };

    {
        const auto &tok = single("kind");
        auto kind = parse_kind(tok.text);
        if (!kind) {
            throw ParseError(require("kind").line, tok.column, "unknown kind '" + tok.text + "'");
        }
        spec.kind = *kind;
    }
    {
        const auto &hv = require("states");
        if (hv.values.empty()) {
            throw ParseError(hv.line, 1, "no states declared");
        }
        for (const auto &tok : hv.values) {
            if (spec.state_index(tok.text) >= 0) {
                throw ParseError(hv.line, tok.column, "duplicate state '" + tok.text + "'");
            }
            spec.states.push_back(tok.text);
        }
    }
    auto lookup_state = [&](const Token &tok, size_t line) {
        int s = spec.state_index(tok.text);
        if (s < 0) {
            throw ParseError(line, tok.column, "unknown state '" + tok.text + "'");
        }
        return s;
    };
    spec.initial = lookup_state(single("initial"), require("initial").line);
    spec.accept = lookup_state(single("accept"), require("accept").line);
    spec.reject = lookup_state(single("reject"), require("reject").line);
    if (header.count("nonpost")) {
        spec.nonpost = lookup_state(single("nonpost"), require("nonpost").line);
    }
    auto alphabet = [&](const std::string &key) {
        std::string out;
        auto it = header.find(key);
        if (it == header.end()) {
            return out;
        }
        for (const auto &tok : it->second.values) {
            char c = parse_symbol(tok, it->second.line);
            if (c == kBlank) {
                throw ParseError(it->second.line, tok.column, "the blank '#' is implicit and cannot be declared");
            }
            if (out.find(c) != std::string::npos) {
                throw ParseError(it->second.line, tok.column, std::string("duplicate symbol '") + c + "'");
            }
            out += c;
        }
        return out;
    };
    spec.input_alphabet = alphabet("input_alphabet");
    spec.work_alphabet = alphabet("work_alphabet");

    struct Seen {
        size_t line;
        size_t copies;
    };
    std::map<std::pair<RuleKey, std::tuple<int, char, int, int>>, Seen> seen;
    for (const auto &pr : rule_lines) {
        const auto &t = pr.toks;
        size_t ln = pr.line;
        // s σ γ -> s' γ' d_in d_wk @ p/q
        if (t.size() != 10 || t[3].text != "->" || t[8].text != "@") {
            throw ParseError(ln, t[0].column, "expected `s σ γ -> s' γ' d_in d_wk @ p/q`");
        }
        RuleKey key{lookup_state(t[0], ln), parse_symbol(t[1], ln), parse_symbol(t[2], ln)};
        if (!spec.is_input_symbol(key.in)) {
            throw ParseError(ln, t[1].column, std::string("unknown input symbol '") + key.in + "'");
        }
        if (!spec.is_work_symbol(key.wk)) {
            throw ParseError(ln, t[2].column, std::string("unknown work symbol '") + key.wk + "'");
        }
        Rule r;
        r.next = lookup_state(t[4], ln);
        r.write = parse_symbol(t[5], ln);
        if (!spec.is_work_symbol(r.write)) {
            throw ParseError(ln, t[5].column, std::string("unknown work symbol '") + r.write + "'");
        }
        r.d_in = parse_direction(t[6], ln);
        r.d_wk = parse_direction(t[7], ln);
        try {
            r.prob = parse_rational(t[9].text);
        } catch (const std::invalid_argument &e) {
            throw ParseError(ln, t[9].column, e.what());
        }
        if (r.prob < 0 || r.prob > 1) {
            throw ParseError(ln, t[9].column, "probability outside [0,1]");
        }
        if (spec.kind == MachineKind::ptm && r.prob != 0 && r.prob != Rational(1, 2) && r.prob != 1) {
            throw ParseError(ln, t[9].column, "probability not in {0,1/2,1}");
        }
        if (spec.kind == MachineKind::dtm && r.prob != 0 && r.prob != 1) {
            throw ParseError(ln, t[9].column, "probability not in {0,1}");
        }
        auto sig = std::make_pair(key, std::make_tuple(r.next, r.write, r.d_in, r.d_wk));
        auto [it, inserted] = seen.emplace(sig, Seen{ln, 1});
        if (!inserted) {
            // A second identical action is only legal as the two halves of a dummy coin split.
            const auto &existing = spec.delta.at(key);
            bool split_pair = it->second.copies == 1 && r.prob == Rational(1, 2);
            for (const auto &e : existing) {
                if (e.same_action(r) && e.prob != Rational(1, 2)) {
                    split_pair = false;
                }
            }
            if (!split_pair) {
                throw ParseError(ln, t[0].column, "duplicate rule (first given on line " +
                                                      std::to_string(it->second.line) + ")");
            }
            it->second.copies++;
        }
        spec.add_rule(key.state, key.in, key.wk, std::move(r));
    }

    bool initial_has_rules = false;
    for (const auto &[key, rules] : spec.delta) {
        initial_has_rules |= key.state == spec.initial && !rules.empty();
    }
    if (!initial_has_rules) {
        throw ParseError(delta_line == 0 ? 1 : delta_line, 1, "initial state has no outgoing rules");
    }
    return spec;
}

MachineSpec load_machine_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw PostlogError("cannot read machine file '" + path + "'");
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_machine_file(ss.str());
}

static std::string direction(int d) {
    return d > 0 ? "+1" : d < 0 ? "-1" : "0";
}

std::string format_machine_file(const MachineSpec &spec) {
    std::ostringstream out;
    out << "[machine]\n";
    out << "kind = " << kind_name(spec.kind) << "\n";
    out << "states =";
    for (const auto &s : spec.states) {
        out << " " << s;
    }
    out << "\n";
    out << "initial = " << spec.states.at(spec.initial) << "\n";
    out << "accept = " << spec.states.at(spec.accept) << "\n";
    out << "reject = " << spec.states.at(spec.reject) << "\n";
    if (spec.nonpost) {
        out << "nonpost = " << spec.states.at(*spec.nonpost) << "\n";
    }
    auto symbols = [&](const char *key, const std::string &alpha) {
        out << key << " =";
        for (char c : alpha) {
            out << " " << c;
        }
        out << "\n";
    };
    symbols("input_alphabet", spec.input_alphabet);
    symbols("work_alphabet", spec.work_alphabet);
    out << "[delta]\n";
    for (const auto &[key, rules] : spec.delta) {
        for (const auto &r : rules) {
            out << spec.states[key.state] << " " << key.in << " " << key.wk << " -> " << spec.states[r.next] << " "
                << r.write << " " << direction(r.d_in) << " " << direction(r.d_wk) << " @ "
                << format_rational(r.prob) << "\n";
        }
    }
    return out.str();
}

}  // namespace postlog
