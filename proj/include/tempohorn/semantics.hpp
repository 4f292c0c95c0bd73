/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "tempohorn/chc.hpp"
#include "tempohorn/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tempohorn::semantics {

enum class FluentKind { Begins, Completes, Enables, Enacting };

/// begins(x), completes(x), enables(x,y) or enacting(x,r).
struct Fluent {
    FluentKind kind;
    std::string a;
    std::string b;         // enables target
    long long residual = 0; // enacting only

    static Fluent begins(std::string x) { return {FluentKind::Begins, std::move(x), {}, 0}; }
    static Fluent completes(std::string x) { return {FluentKind::Completes, std::move(x), {}, 0}; }
    static Fluent enables(std::string x, std::string y) {
        return {FluentKind::Enables, std::move(x), std::move(y), 0};
    }
    static Fluent enacting(std::string x, long long r) {
        return {FluentKind::Enacting, std::move(x), {}, r};
    }

    bool operator==(const Fluent &) const = default;
    auto operator<=>(const Fluent &) const = default;
};

/// Sorted, duplicate-free fluent set.
using FluentSet = std::vector<Fluent>;

FluentSet makeFluentSet(std::vector<Fluent> fs);
FluentSet setErase(const FluentSet & s, const Fluent & f);
FluentSet setInsert(const FluentSet & s, const Fluent & f);

struct TimedState {
    FluentSet fluents;
    long long time = 0;

    bool operator==(const TimedState &) const = default;
};

enum class Rule { S1 = 1, S2, S3, S4, S5, S6, S7 };

struct Transition {
    Rule rule;
    TimedState next;
};

TimedState initial_state(const model::BusinessProcessSpec & spec);

/// All successor states of s under rules S1-S7, enumerating every source of
/// nondeterminism (duration choice, exclusive-branch choice, fluent choice).
std::vector<Transition> step(const model::BusinessProcessSpec & spec, const TimedState & s);

/// Exact set equality between the state's fluents and the pattern.
bool match_waypoint(const TimedState & s, const FluentSet & pattern);

/// A reachability property: the run must pass waypoints W1..Wn in order at
/// times T1..Tn; the violation constraint over {T0..Tn} (T0 = 0) describes the
/// forbidden timings.
struct PropertySpec {
    std::vector<FluentSet> waypoints;
    std::vector<std::string> timeVars; // T0, T1..Tn
    chc::LinearConstraint violation;
};

struct ExploreBounds {
    std::size_t maxStates = 1'000'000;
    long long maxSegmentOffset = 1'000'000; // cap on time progress inside one segment
};

struct TraceStep {
    long long time;
    std::string label; // init, S1..S7, or waypoint k
    FluentSet fluents;
};

struct OracleVerdict {
    enum class Outcome { Violated, NoViolation };
    Outcome outcome = Outcome::NoViolation;
    bool exhaustive = false; // definitive: the search closed without hitting a bound
    std::size_t statesVisited = 0;
    std::string boundHit;                 // which bound stopped the search, if any
    std::vector<TraceStep> trace;         // violating run, when found
    std::vector<long long> waypointTimes; // T1..Tn of the violating run
};

OracleVerdict explore(const model::BusinessProcessSpec & spec, const PropertySpec & prop,
                      const ExploreBounds & bounds = {});

/// One maximal run with seeded choices; stops at maxSteps.
std::vector<TraceStep> simulate(const model::BusinessProcessSpec & spec, std::uint64_t seed,
                                std::size_t maxSteps = 10000);

std::string printFluent(const Fluent & f);
std::string printFluentSet(const FluentSet & fs);
std::string renderTrace(const std::vector<TraceStep> & trace);

} // namespace tempohorn::semantics
