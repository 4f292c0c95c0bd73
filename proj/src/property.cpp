/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "tempohorn/property.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace tempohorn::property {

using semantics::Fluent;
using semantics::FluentSet;

namespace {

struct Cursor {
    std::string_view s;
    std::size_t pos = 0;

    void skipWs() {
        while (pos < s.size()) {
            if (std::isspace(static_cast<unsigned char>(s[pos]))) {
                ++pos;
            } else if (s[pos] == '%') {
                while (pos < s.size() && s[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }
    char cur() {
        skipWs();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool eat(char c) {
        if (cur() != c) return false;
        ++pos;
        return true;
    }
    void expect(char c) {
        if (!eat(c))
            throw PropertyParseError(std::string("expected '") + c + "' in property at offset "
                                     + std::to_string(pos));
    }
    bool eatWord(std::string_view w) {
        skipWs();
        if (s.substr(pos, w.size()) != w) return false;
        std::size_t after = pos + w.size();
        if (after < s.size()
            && (std::isalnum(static_cast<unsigned char>(s[after])) || s[after] == '_'))
            return false;
        pos = after;
        return true;
    }
    std::string name(bool upper) {
        skipWs();
        if (pos >= s.size() || !std::isalpha(static_cast<unsigned char>(s[pos])))
            throw PropertyParseError("expected a name in property at offset " + std::to_string(pos));
        bool isUpper = std::isupper(static_cast<unsigned char>(s[pos])) != 0;
        if (isUpper != upper)
            throw PropertyParseError(std::string("expected ") + (upper ? "a variable" : "an identifier")
                                     + " at offset " + std::to_string(pos));
        std::string out;
        while (pos < s.size()
               && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            out += s[pos++];
        return out;
    }
    long long integer() {
        skipWs();
        bool neg = eat('-');
        skipWs();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            throw PropertyParseError("expected an integer at offset " + std::to_string(pos));
        long long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            v = v * 10 + (s[pos++] - '0');
        return neg ? -v : v;
    }
};

struct ReachAtom {
    FluentSet from, to;
    std::string fromVar, toVar;
};

Fluent parseFluent(Cursor & c) {
    std::string f = c.name(false);
    c.expect('(');
    std::string x = c.name(false);
    Fluent out;
    if (f == "begins") {
        out = Fluent::begins(x);
    } else if (f == "completes") {
        out = Fluent::completes(x);
    } else if (f == "enables") {
        c.expect(',');
        out = Fluent::enables(x, c.name(false));
    } else if (f == "enacting") {
        c.expect(',');
        out = Fluent::enacting(x, c.integer());
    } else {
        throw PropertyParseError("unknown fluent '" + f + "'");
    }
    c.expect(')');
    return out;
}

std::pair<FluentSet, std::string> parseStateTerm(Cursor & c) {
    if (!c.eatWord("s")) throw PropertyParseError("expected a state term s([...],T)");
    c.expect('(');
    c.expect('[');
    std::vector<Fluent> fs;
    if (c.cur() != ']') {
        for (;;) {
            fs.push_back(parseFluent(c));
            if (c.eat(',')) continue;
            break;
        }
    }
    c.expect(']');
    c.expect(',');
    std::string var = c.name(true);
    c.expect(')');
    return {semantics::makeFluentSet(std::move(fs)), var};
}

chc::LinearTerm parseLinear(Cursor & c, std::set<std::string> & varsSeen);

chc::LinearTerm parseLinearPrimary(Cursor & c, std::set<std::string> & varsSeen, bool neg) {
    c.skipWs();
    chc::Int sign = neg ? -1 : 1;
    if (c.pos < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.pos]))) {
        long long v = c.integer();
        if (c.cur() == '*') {
            c.expect('*');
            std::string var = c.name(true);
            varsSeen.insert(var);
            return chc::LinearTerm::var(var, sign * v);
        }
        return chc::LinearTerm(sign * v);
    }
    std::string var = c.name(true);
    varsSeen.insert(var);
    return chc::LinearTerm::var(var, sign);
}

chc::LinearTerm parseLinear(Cursor & c, std::set<std::string> & varsSeen) {
    bool neg = c.eat('-');
    chc::LinearTerm t = parseLinearPrimary(c, varsSeen, neg);
    for (;;) {
        if (c.eat('+')) {
            t = t + parseLinearPrimary(c, varsSeen, false);
        } else if (c.eat('-')) {
            t = t + parseLinearPrimary(c, varsSeen, true);
        } else {
            return t;
        }
    }
}

} // namespace

ParsedProperty parseProperty(std::string_view text) {
    Cursor c{text};
    if (!c.eatWord("false")) throw PropertyParseError("property must be a goal clause (head false)");
    if (!(c.eat(':') && c.eat('-'))) throw PropertyParseError("expected ':-' after false");

    std::vector<ReachAtom> reaches;
    chc::LinearConstraint constraint;
    std::set<std::string> constraintVars;

    for (;;) {
        if (c.eatWord("reach")) {
            c.expect('(');
            ReachAtom r;
            auto [from, fromVar] = parseStateTerm(c);
            c.expect(',');
            auto [to, toVar] = parseStateTerm(c);
            c.expect(')');
            r.from = std::move(from);
            r.to = std::move(to);
            r.fromVar = std::move(fromVar);
            r.toVar = std::move(toVar);
            reaches.push_back(std::move(r));
        } else {
            chc::LinearTerm lhs = parseLinear(c, constraintVars);
            chc::Rel rel;
            c.skipWs();
            auto & s = c.s;
            auto & p = c.pos;
            auto starts = [&](std::string_view op) {
                return s.substr(p, op.size()) == op;
            };
            if (starts("=<")) {
                rel = chc::Rel::Le;
                p += 2;
            } else if (starts(">=")) {
                rel = chc::Rel::Ge;
                p += 2;
            } else if (starts("=\\=")) {
                rel = chc::Rel::Neq;
                p += 3;
            } else if (starts("=")) {
                rel = chc::Rel::Eq;
                p += 1;
            } else if (starts("<")) {
                rel = chc::Rel::Lt;
                p += 1;
            } else if (starts(">")) {
                rel = chc::Rel::Gt;
                p += 1;
            } else {
                throw PropertyParseError("expected a relational operator at offset "
                                         + std::to_string(p));
            }
            chc::LinearTerm rhs = parseLinear(c, constraintVars);
            constraint.add({lhs, rel, rhs});
        }
        if (c.eat(',')) continue;
        c.expect('.');
        break;
    }
    c.skipWs();
    if (c.pos != c.s.size())
        throw PropertyParseError("trailing input after the property clause");

    if (reaches.empty()) throw PropertyParseError("property needs at least one reach atom");

    ParsedProperty out;
    out.source = reaches.front().from;
    out.spec.timeVars.push_back(reaches.front().fromVar);
    for (std::size_t i = 0; i < reaches.size(); ++i) {
        if (i > 0) {
            if (!(reaches[i].from == reaches[i - 1].to)
                || reaches[i].fromVar != reaches[i - 1].toVar)
                throw PropertyParseError(
                    "reach atoms must chain: source of atom " + std::to_string(i + 1)
                    + " must repeat the previous target state and time variable");
        }
        out.spec.waypoints.push_back(reaches[i].to);
        out.spec.timeVars.push_back(reaches[i].toVar);
    }
    std::set<std::string> timeVarSet(out.spec.timeVars.begin(), out.spec.timeVars.end());
    if (timeVarSet.size() != out.spec.timeVars.size())
        throw PropertyParseError("time variables along the reach chain must be distinct");
    for (auto const & v : constraintVars)
        if (!timeVarSet.count(v))
            throw PropertyParseError("constraint variable '" + v
                                     + "' is not a time variable of the reach chain");
    out.spec.violation = constraint.normalized();
    return out;
}

void validateAgainst(const ParsedProperty & prop, const model::BusinessProcessSpec & spec) {
    FluentSet init{Fluent::begins(spec.startId())};
    if (!(prop.source == init))
        throw PropertyParseError("property must start from the initial state "
                                 + semantics::printFluentSet(init));
    auto checkSet = [&](const FluentSet & fs) {
        for (auto const & f : fs) {
            if (!spec.has(f.a))
                throw PropertyParseError("property mentions unknown object '" + f.a + "'");
            if (f.kind == semantics::FluentKind::Enables) {
                auto const & succ = spec.successors(f.a);
                if (!std::binary_search(succ.begin(), succ.end(), f.b))
                    throw PropertyParseError("property mentions undeclared flow " + f.a + " -> "
                                             + f.b);
            }
            if (f.kind == semantics::FluentKind::Enacting && f.residual < 0)
                throw PropertyParseError("negative residual time in property waypoint");
        }
    };
    for (auto const & w : prop.spec.waypoints) checkSet(w);
}

std::string printProperty(const ParsedProperty & prop) {
    std::ostringstream os;
    os << "false :- " << chc::printConstraint(prop.spec.violation);
    const FluentSet * from = &prop.source;
    for (std::size_t i = 0; i < prop.spec.waypoints.size(); ++i) {
        os << ",\n    reach(s(" << semantics::printFluentSet(*from) << ","
           << prop.spec.timeVars[i] << "), s("
           << semantics::printFluentSet(prop.spec.waypoints[i]) << ","
           << prop.spec.timeVars[i + 1] << "))";
        from = &prop.spec.waypoints[i];
    }
    os << ".";
    return os.str();
}

} // namespace tempohorn::property
