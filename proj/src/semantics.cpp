/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "tempohorn/semantics.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_map>

namespace tempohorn::semantics {

using model::BusinessProcessSpec;
using model::Kind;

FluentSet makeFluentSet(std::vector<Fluent> fs) {
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    return fs;
}

FluentSet setErase(const FluentSet & s, const Fluent & f) {
    FluentSet out;
    out.reserve(s.size());
    for (auto const & g : s)
        if (!(g == f)) out.push_back(g);
    return out;
}

FluentSet setInsert(const FluentSet & s, const Fluent & f) {
    FluentSet out = s;
    out.insert(std::lower_bound(out.begin(), out.end(), f), f);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TimedState initial_state(const BusinessProcessSpec & spec) {
    return {{Fluent::begins(spec.startId())}, 0};
}

bool match_waypoint(const TimedState & s, const FluentSet & pattern) {
    return s.fluents == pattern;
}

namespace {

void checkFluent(const BusinessProcessSpec & spec, const Fluent & f) {
    if (!spec.has(f.a)) throw std::logic_error("fluent over unknown object " + f.a);
    if (f.kind == FluentKind::Enables) {
        auto const & succ = spec.successors(f.a);
        if (!std::binary_search(succ.begin(), succ.end(), f.b))
            throw std::logic_error("enables(" + f.a + "," + f.b + ") is not a declared flow");
    }
    if (f.kind == FluentKind::Enacting) {
        if (f.residual < 0) throw std::logic_error("negative residual time on " + f.a);
        if (f.residual > 0 && spec.kind(f.a) != Kind::Task)
            throw std::logic_error("non-task " + f.a + " with positive residual time");
    }
}

} // namespace

std::vector<Transition> step(const BusinessProcessSpec & spec, const TimedState & state) {
    TimedState s{makeFluentSet(state.fluents), state.time};
    std::vector<Transition> out;
    for (auto const & f : s.fluents) checkFluent(spec, f);

    for (auto const & f : s.fluents) {
        switch (f.kind) {
            case FluentKind::Begins: { // S1: begin enacting, one case per admissible duration
                auto d = spec.durationBounds(f.a);
                for (long long r = d.min; r <= d.max; ++r) {
                    FluentSet next = setInsert(setErase(s.fluents, f), Fluent::enacting(f.a, r));
                    out.push_back({Rule::S1, {std::move(next), s.time}});
                }
                break;
            }
            case FluentKind::Completes: {
                auto const & succ = spec.successors(f.a);
                if (spec.kind(f.a) == Kind::ParBranch) { // S2: enable all successors
                    FluentSet next = setErase(s.fluents, f);
                    for (auto const & y : succ) next = setInsert(next, Fluent::enables(f.a, y));
                    out.push_back({Rule::S2, {std::move(next), s.time}});
                } else { // S3: enable exactly one successor
                    for (auto const & y : succ) {
                        FluentSet next =
                            setInsert(setErase(s.fluents, f), Fluent::enables(f.a, y));
                        out.push_back({Rule::S3, {std::move(next), s.time}});
                    }
                }
                break;
            }
            case FluentKind::Enables: {
                if (spec.kind(f.b) != Kind::ParMerge) { // S5: begin on a single enabling
                    FluentSet next = setInsert(setErase(s.fluents, f), Fluent::begins(f.b));
                    out.push_back({Rule::S5, {std::move(next), s.time}});
                }
                break;
            }
            case FluentKind::Enacting: {
                if (f.residual == 0) { // S6
                    FluentSet next = setInsert(setErase(s.fluents, f), Fluent::completes(f.a));
                    out.push_back({Rule::S6, {std::move(next), s.time}});
                }
                break;
            }
        }
    }

    // S4: a parallel merge fires when every predecessor has enabled it
    for (auto const & o : spec.objects()) {
        if (o.kind != Kind::ParMerge) continue;
        auto const & preds = spec.predecessors(o.id);
        if (preds.empty()) continue;
        bool all = true;
        for (auto const & p : preds)
            if (!std::binary_search(s.fluents.begin(), s.fluents.end(), Fluent::enables(p, o.id))) {
                all = false;
                break;
            }
        if (!all) continue;
        FluentSet next = s.fluents;
        for (auto const & p : preds) next = setErase(next, Fluent::enables(p, o.id));
        next = setInsert(next, Fluent::begins(o.id));
        out.push_back({Rule::S4, {std::move(next), s.time}});
    }

    if (!out.empty()) return out;

    // S7: time advances by the least positive residual (no other rule applies,
    // so every enacting fluent has positive residual here)
    std::optional<long long> m;
    for (auto const & f : s.fluents)
        if (f.kind == FluentKind::Enacting && (!m || f.residual < *m)) m = f.residual;
    if (!m || *m <= 0) return out;
    FluentSet next;
    for (auto const & f : s.fluents)
        next.push_back(f.kind == FluentKind::Enacting ? Fluent::enacting(f.a, f.residual - *m) : f);
    out.push_back({Rule::S7, {makeFluentSet(std::move(next)), s.time + *m}});
    return out;
}

// ---------------------------------------------------------------------------
// Oracle exploration

namespace {

// Rewrites the violation constraint over the segment lengths d1..dn
// (di = Ti - T(i-1), T0 = 0). If every conjunct is sign-uniform in the di,
// all offsets greater than some bound S are indistinguishable, so exploration
// may clamp segment offsets at S without losing exactness.
std::optional<long long> derivedClamp(const PropertySpec & prop) {
    std::size_t n = prop.waypoints.size();
    long long maxAbs = 0;
    auto handle = [&](const chc::LinearTerm & poly) -> bool {
        std::vector<chc::Int> delta(n, 0);
        for (auto const & [v, k] : poly.coefficients()) {
            auto it = std::find(prop.timeVars.begin(), prop.timeVars.end(), v);
            if (it == prop.timeVars.end()) return false;
            std::size_t idx = static_cast<std::size_t>(it - prop.timeVars.begin());
            for (std::size_t j = 1; j <= idx; ++j) delta[j - 1] += k; // Ti = d1+..+di
        }
        bool pos = false, neg = false;
        for (auto c : delta) {
            pos |= c > 0;
            neg |= c < 0;
        }
        if (pos && neg) return false;
        maxAbs = std::max(maxAbs, poly.constant() < 0 ? -poly.constant() : poly.constant());
        return true;
    };
    chc::LinearConstraint norm = prop.violation.normalized();
    for (auto const & cj : norm.conjuncts())
        if (!handle(cj.poly)) return std::nullopt;
    for (auto const & d : norm.disequalities())
        if (!handle(d)) return std::nullopt;
    return maxAbs + 1;
}

struct Node {
    int segment; // waypoint currently searched for (0-based)
    FluentSet fluents;
    long long offset;               // time since the last matched waypoint
    std::vector<long long> prefix;  // real segment lengths d1..dsegment
    int parent;
    std::string label;
};

std::string nodeKey(const Node & n, long long clamp) {
    std::ostringstream os;
    os << n.segment << '|' << std::min(n.offset, clamp);
    for (auto d : n.prefix) os << ',' << std::min(d, clamp);
    os << '|';
    for (auto const & f : n.fluents)
        os << static_cast<int>(f.kind) << ':' << f.a << ':' << f.b << ':' << f.residual << ';';
    return os.str();
}

} // namespace

OracleVerdict explore(const BusinessProcessSpec & spec, const PropertySpec & prop,
                      const ExploreBounds & bounds) {
    if (prop.waypoints.empty()) throw std::logic_error("property needs at least one waypoint");
    if (prop.timeVars.size() != prop.waypoints.size() + 1)
        throw std::logic_error("property needs one time variable per waypoint plus T0");

    OracleVerdict verdict;
    auto derived = derivedClamp(prop);
    bool clampExact = derived && *derived <= bounds.maxSegmentOffset;
    long long clamp = clampExact ? *derived : bounds.maxSegmentOffset;
    bool clampTriggered = false;

    std::vector<Node> nodes;
    std::unordered_map<std::string, int> seen;
    std::deque<int> queue;

    auto push = [&](Node n) -> bool {
        if (n.offset > clamp) clampTriggered = true;
        std::string key = nodeKey(n, clamp);
        if (seen.count(key)) return true;
        if (nodes.size() >= bounds.maxStates) return false;
        seen.emplace(std::move(key), static_cast<int>(nodes.size()));
        queue.push_back(static_cast<int>(nodes.size()));
        nodes.push_back(std::move(n));
        return true;
    };

    auto buildTrace = [&](int idx) {
        std::vector<int> path;
        for (int i = idx; i >= 0; i = nodes[i].parent) path.push_back(i);
        std::reverse(path.begin(), path.end());
        std::vector<TraceStep> trace;
        for (int i : path) {
            long long abs = nodes[i].offset;
            for (auto d : nodes[i].prefix) abs += d;
            trace.push_back({abs, nodes[i].label, nodes[i].fluents});
        }
        return trace;
    };

    TimedState init = initial_state(spec);
    push({0, init.fluents, 0, {}, -1, "init"});

    bool statesExhausted = false;
    std::size_t n = prop.waypoints.size();
    while (!queue.empty()) {
        int idx = queue.front();
        queue.pop_front();
        ++verdict.statesVisited;
        // copy: nodes may reallocate while expanding
        Node cur = nodes[idx];

        if (cur.fluents == prop.waypoints[static_cast<std::size_t>(cur.segment)]) {
            std::vector<long long> deltas = cur.prefix;
            deltas.push_back(cur.offset);
            if (static_cast<std::size_t>(cur.segment) + 1 == n) {
                std::map<std::string, chc::Int> env;
                env[prop.timeVars[0]] = 0;
                long long acc = 0;
                for (std::size_t i = 0; i < deltas.size(); ++i) {
                    acc += deltas[i];
                    env[prop.timeVars[i + 1]] = acc;
                }
                if (prop.violation.evaluate(env)) {
                    verdict.outcome = OracleVerdict::Outcome::Violated;
                    verdict.trace = buildTrace(idx);
                    long long acc2 = 0;
                    for (auto d : deltas) verdict.waypointTimes.push_back(acc2 += d);
                    return verdict;
                }
            } else {
                Node adv{cur.segment + 1, cur.fluents, 0, deltas, idx,
                         "waypoint" + std::to_string(cur.segment + 1)};
                if (!push(std::move(adv))) {
                    statesExhausted = true;
                    break;
                }
            }
        }

        bool ok = true;
        for (auto const & tr : step(spec, {cur.fluents, cur.offset})) {
            Node next{cur.segment, tr.next.fluents, tr.next.time, cur.prefix, idx,
                      std::string("S") + std::to_string(static_cast<int>(tr.rule))};
            if (!push(std::move(next))) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            statesExhausted = true;
            break;
        }
    }

    verdict.outcome = OracleVerdict::Outcome::NoViolation;
    if (statesExhausted) {
        verdict.boundHit = "max-states";
    } else if (clampTriggered && !clampExact) {
        verdict.boundHit = "segment-offset";
    } else {
        verdict.exhaustive = true;
    }
    return verdict;
}

std::vector<TraceStep> simulate(const BusinessProcessSpec & spec, std::uint64_t seed,
                                std::size_t maxSteps) {
    std::mt19937_64 rng(seed);
    TimedState s = initial_state(spec);
    std::vector<TraceStep> trace{{0, "init", s.fluents}};
    for (std::size_t i = 0; i < maxSteps; ++i) {
        auto succ = step(spec, s);
        if (succ.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, succ.size() - 1);
        auto const & tr = succ[pick(rng)];
        s = tr.next;
        trace.push_back({s.time, std::string("S") + std::to_string(static_cast<int>(tr.rule)),
                         s.fluents});
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Rendering

std::string printFluent(const Fluent & f) {
    switch (f.kind) {
        case FluentKind::Begins: return "begins(" + f.a + ")";
        case FluentKind::Completes: return "completes(" + f.a + ")";
        case FluentKind::Enables: return "enables(" + f.a + "," + f.b + ")";
        case FluentKind::Enacting:
            return "enacting(" + f.a + "," + std::to_string(f.residual) + ")";
    }
    return "?";
}

std::string printFluentSet(const FluentSet & fs) {
    std::string s = "{";
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (i) s += ", ";
        s += printFluent(fs[i]);
    }
    return s + "}";
}

std::string renderTrace(const std::vector<TraceStep> & trace) {
    std::ostringstream os;
    for (auto const & t : trace)
        os << "t=" << t.time << " " << t.label << " " << printFluentSet(t.fluents) << "\n";
    return os.str();
}

} // namespace tempohorn::semantics
