/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "tempohorn/model.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace tempohorn::model {

const char * kindName(Kind k) {
    switch (k) {
        case Kind::Task: return "task";
        case Kind::StartEvent: return "start";
        case Kind::EndEvent: return "end";
        case Kind::ParBranch: return "par_branch";
        case Kind::ParMerge: return "par_merge";
        case Kind::ExcBranch: return "exc_branch";
        case Kind::ExcMerge: return "exc_merge";
    }
    return "?";
}

Kind BusinessProcessSpec::kind(const std::string & id) const {
    auto it = kinds_.find(id);
    if (it == kinds_.end()) throw ModelError("unknown flow object '" + id + "'");
    return it->second;
}

const std::vector<std::string> & BusinessProcessSpec::successors(const std::string & id) const {
    if (!has(id)) throw ModelError("unknown flow object '" + id + "'");
    static const std::vector<std::string> empty;
    auto it = succ_.find(id);
    return it == succ_.end() ? empty : it->second;
}

const std::vector<std::string> & BusinessProcessSpec::predecessors(const std::string & id) const {
    if (!has(id)) throw ModelError("unknown flow object '" + id + "'");
    static const std::vector<std::string> empty;
    auto it = pred_.find(id);
    return it == pred_.end() ? empty : it->second;
}

DurationBound BusinessProcessSpec::durationBounds(const std::string & id) const {
    Kind k = kind(id);
    if (k != Kind::Task) return {0, 0}; // events and gateways are instantaneous
    return durations_.at(id);
}

std::vector<std::string> BusinessProcessSpec::startIds() const {
    std::vector<std::string> out;
    for (auto const & o : objects_)
        if (o.kind == Kind::StartEvent) out.push_back(o.id);
    return out;
}

std::vector<std::string> BusinessProcessSpec::endIds() const {
    std::vector<std::string> out;
    for (auto const & o : objects_)
        if (o.kind == Kind::EndEvent) out.push_back(o.id);
    return out;
}

const std::string & BusinessProcessSpec::startId() const {
    const std::string * found = nullptr;
    for (auto const & o : objects_) {
        if (o.kind != Kind::StartEvent) continue;
        if (found) throw ModelError("process has more than one start event");
        found = &o.id;
    }
    if (!found) throw ModelError("process has no start event");
    return *found;
}

bool BusinessProcessSpec::isGateway(const std::string & id) const {
    switch (kind(id)) {
        case Kind::ParBranch:
        case Kind::ParMerge:
        case Kind::ExcBranch:
        case Kind::ExcMerge: return true;
        default: return false;
    }
}

void BusinessProcessSpec::finalize() {
    std::sort(objects_.begin(), objects_.end(),
              [](const FlowObject & a, const FlowObject & b) { return a.id < b.id; });
    std::sort(flows_.begin(), flows_.end());
    flows_.erase(std::unique(flows_.begin(), flows_.end()), flows_.end());

    for (auto const & [src, dst] : flows_) {
        if (!has(src)) throw ModelError("flow endpoint '" + src + "' is not declared");
        if (!has(dst)) throw ModelError("flow endpoint '" + dst + "' is not declared");
        succ_[src].push_back(dst);
        pred_[dst].push_back(src);
    }
    for (auto & [k, v] : succ_) std::sort(v.begin(), v.end());
    for (auto & [k, v] : pred_) std::sort(v.begin(), v.end());

    for (auto const & o : objects_) {
        auto it = durations_.find(o.id);
        if (o.kind == Kind::Task) {
            if (it == durations_.end())
                throw ModelError("task '" + o.id + "' has no duration clause");
            if (it->second.min < 1 || it->second.min > it->second.max)
                throw ModelError("task '" + o.id + "' has invalid duration bounds ["
                                 + std::to_string(it->second.min) + ","
                                 + std::to_string(it->second.max) + "]");
        } else if (it != durations_.end()) {
            if (it->second.min != 0 || it->second.max != 0)
                throw ModelError("'" + o.id + "' is not a task and must have duration 0");
            durations_.erase(it); // normalized away; non-tasks default to (0,0)
        }
    }
    for (auto const & [id, d] : durations_)
        if (!has(id)) throw ModelError("duration given for undeclared object '" + id + "'");
}

BusinessProcessSpec BusinessProcessSpec::fromFacts(
    const std::vector<FlowObject> & objects,
    const std::vector<std::pair<std::string, std::string>> & flows,
    const std::map<std::string, DurationBound> & durations) {
    BusinessProcessSpec spec;
    for (auto const & o : objects) {
        auto [it, fresh] = spec.kinds_.try_emplace(o.id, o.kind);
        if (!fresh)
            throw ModelError("object '" + o.id + "' declared as both "
                             + std::string(kindName(it->second)) + " and " + kindName(o.kind));
        spec.objects_.push_back(o);
    }
    spec.flows_ = flows;
    spec.durations_ = durations;
    spec.finalize();
    return spec;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Cursor {
    std::string_view s;
    std::size_t pos = 0;
    int line = 1, col = 1;

    char cur() const { return pos < s.size() ? s[pos] : '\0'; }
    bool done() const { return pos >= s.size(); }

    void bump() {
        if (cur() == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skipWs() {
        while (!done()) {
            if (std::isspace(static_cast<unsigned char>(cur()))) {
                bump();
            } else if (cur() == '%') {
                while (!done() && cur() != '\n') bump();
            } else {
                break;
            }
        }
    }
};

} // namespace

// The fact grammar, one fact per line terminated by '.':
//   start(id). end(id). task(id). par_branch(id). par_merge(id).
//   exc_branch(id). exc_merge(id). seq(id,id).
//   duration(id, D) :- D>=n, D=<m.        (tasks)
//   duration(id, D) :- D=0.               (events and gateways)
//   duration(X, D) :- not_task(X), D=0.   (catch-all default, accepted as a no-op)
BusinessProcessSpec BusinessProcessSpec::parse(std::string_view text) {
    Cursor c{text};
    std::vector<FlowObject> objects;
    std::vector<std::pair<std::string, std::string>> flows;
    std::map<std::string, DurationBound> durations;
    std::map<std::string, std::pair<int, int>> durationPos; // for duplicate reporting

    auto fail = [&](const std::string & msg) -> void { throw ModelError(msg, c.line, c.col); };

    auto ident = [&]() -> std::string {
        c.skipWs();
        if (!std::isalpha(static_cast<unsigned char>(c.cur())))
            fail("expected identifier");
        std::string id;
        bool lower = std::islower(static_cast<unsigned char>(c.cur()));
        while (std::isalnum(static_cast<unsigned char>(c.cur())) || c.cur() == '_') {
            id += c.cur();
            c.bump();
        }
        if (!lower) fail("identifiers must start with a lowercase letter: '" + id + "'");
        return id;
    };
    auto variable = [&]() -> std::string {
        c.skipWs();
        if (!std::isupper(static_cast<unsigned char>(c.cur()))) fail("expected variable");
        std::string v;
        while (std::isalnum(static_cast<unsigned char>(c.cur())) || c.cur() == '_') {
            v += c.cur();
            c.bump();
        }
        return v;
    };
    auto punct = [&](char ch) {
        c.skipWs();
        if (c.cur() != ch) fail(std::string("expected '") + ch + "'");
        c.bump();
    };
    auto integer = [&]() -> long long {
        c.skipWs();
        bool neg = false;
        if (c.cur() == '-') {
            neg = true;
            c.bump();
        }
        if (!std::isdigit(static_cast<unsigned char>(c.cur()))) fail("expected integer");
        long long v = 0;
        while (std::isdigit(static_cast<unsigned char>(c.cur()))) {
            v = v * 10 + (c.cur() - '0');
            c.bump();
        }
        return neg ? -v : v;
    };

    std::map<std::string, Kind> kindOf{
        {"task", Kind::Task},           {"start", Kind::StartEvent},
        {"end", Kind::EndEvent},        {"par_branch", Kind::ParBranch},
        {"par_merge", Kind::ParMerge},  {"exc_branch", Kind::ExcBranch},
        {"exc_merge", Kind::ExcMerge}};

    std::map<std::string, std::pair<Kind, std::pair<int, int>>> declared;

    while (true) {
        c.skipWs();
        if (c.done()) break;
        int factLine = c.line, factCol = c.col;
        std::string head = ident();
        if (auto it = kindOf.find(head); it != kindOf.end()) {
            punct('(');
            std::string id = ident();
            punct(')');
            punct('.');
            auto [prev, fresh] = declared.try_emplace(id, std::make_pair(it->second,
                                                                         std::make_pair(factLine, factCol)));
            if (!fresh)
                throw ModelError("object '" + id + "' already declared as "
                                     + kindName(prev->second.first),
                                 factLine, factCol);
            objects.push_back({id, it->second});
        } else if (head == "seq") {
            punct('(');
            std::string src = ident();
            punct(',');
            std::string dst = ident();
            punct(')');
            punct('.');
            flows.emplace_back(src, dst);
        } else if (head == "duration") {
            punct('(');
            c.skipWs();
            if (std::isupper(static_cast<unsigned char>(c.cur()))) {
                // catch-all `duration(X, D) :- not_task(X), D=0.`
                std::string x = variable();
                punct(',');
                std::string d = variable();
                punct(')');
                punct(':');
                punct('-');
                std::string nt = ident();
                if (nt != "not_task") fail("expected not_task in catch-all duration clause");
                punct('(');
                std::string x2 = variable();
                punct(')');
                if (x2 != x) fail("catch-all duration clause must reuse its head variable");
                punct(',');
                std::string d2 = variable();
                if (d2 != d) fail("catch-all duration clause must constrain its duration variable");
                punct('=');
                if (integer() != 0) fail("catch-all duration must be 0");
                punct('.');
                continue; // the (0,0) default for non-tasks is built in
            }
            std::string id = ident();
            punct(',');
            std::string dvar = variable();
            punct(')');
            punct(':');
            punct('-');
            // conjunction of bounds on the duration variable, in any order
            std::optional<long long> lo, hi;
            while (true) {
                c.skipWs();
                std::string v = variable();
                if (v != dvar) fail("unexpected variable '" + v + "' in duration clause");
                c.skipWs();
                if (c.cur() == '=' && c.pos + 1 < c.s.size() && c.s[c.pos + 1] == '<') {
                    c.bump();
                    c.bump();
                    long long n = integer();
                    hi = hi ? std::min(*hi, n) : n;
                } else if (c.cur() == '>' && c.pos + 1 < c.s.size() && c.s[c.pos + 1] == '=') {
                    c.bump();
                    c.bump();
                    long long n = integer();
                    lo = lo ? std::max(*lo, n) : n;
                } else if (c.cur() == '=') {
                    c.bump();
                    long long n = integer();
                    lo = lo ? std::max(*lo, n) : n;
                    hi = hi ? std::min(*hi, n) : n;
                } else {
                    fail("expected '>=', '=<' or '=' in duration clause");
                }
                c.skipWs();
                if (c.cur() == ',') {
                    c.bump();
                    continue;
                }
                punct('.');
                break;
            }
            if (!lo || !hi)
                throw ModelError("duration clause for '" + id + "' must bound the duration on both sides",
                                 factLine, factCol);
            if (durationPos.count(id))
                throw ModelError("duplicate duration clause for '" + id + "'", factLine, factCol);
            durationPos[id] = {factLine, factCol};
            if (*lo < 0 || *lo > *hi)
                throw ModelError("invalid duration bounds [" + std::to_string(*lo) + ","
                                     + std::to_string(*hi) + "] for '" + id + "'",
                                 factLine, factCol);
            durations[id] = {*lo, *hi};
        } else {
            throw ModelError("unknown fact '" + head + "'", factLine, factCol);
        }
    }

    return fromFacts(objects, flows, durations);
}

std::string BusinessProcessSpec::toText() const {
    std::ostringstream os;
    for (auto const & o : objects_) os << kindName(o.kind) << "(" << o.id << ").\n";
    for (auto const & [a, b] : flows_) os << "seq(" << a << "," << b << ").\n";
    for (auto const & o : objects_) {
        if (o.kind != Kind::Task) continue;
        auto d = durations_.at(o.id);
        os << "duration(" << o.id << ", D) :- D>=" << d.min << ", D=<" << d.max << ".\n";
    }
    return os.str();
}

} // namespace tempohorn::model
