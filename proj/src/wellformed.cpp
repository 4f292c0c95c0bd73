/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "tempohorn/wellformed.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace tempohorn::wellformed {

using model::BusinessProcessSpec;
using model::Kind;

namespace {

// forward reachability over seq* from the given seeds
std::set<std::string> reach(const BusinessProcessSpec & spec, std::vector<std::string> seeds,
                            bool forward) {
    std::set<std::string> seen(seeds.begin(), seeds.end());
    while (!seeds.empty()) {
        std::string x = std::move(seeds.back());
        seeds.pop_back();
        auto const & next = forward ? spec.successors(x) : spec.predecessors(x);
        for (auto const & y : next)
            if (seen.insert(y).second) seeds.push_back(y);
    }
    return seen;
}

bool isBranch(Kind k) { return k == Kind::ParBranch || k == Kind::ExcBranch; }
bool isMerge(Kind k) { return k == Kind::ParMerge || k == Kind::ExcMerge; }

std::string joinIds(const std::vector<std::string> & ids, const char * sep = ", ") {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += sep;
        s += ids[i];
    }
    return s;
}

} // namespace

std::optional<std::vector<std::string>>
gateway_only_cycle(const BusinessProcessSpec & spec) {
    // depth-first search restricted to gateway nodes
    enum class Color { White, Grey, Black };
    std::map<std::string, Color> color;
    std::vector<std::string> gateways;
    for (auto const & o : spec.objects()) {
        if (spec.isGateway(o.id)) {
            gateways.push_back(o.id);
            color[o.id] = Color::White;
        }
    }
    std::vector<std::string> stack;
    std::optional<std::vector<std::string>> cycle;

    auto dfs = [&](auto && self, const std::string & x) -> bool {
        color[x] = Color::Grey;
        stack.push_back(x);
        for (auto const & y : spec.successors(x)) {
            if (!spec.isGateway(y)) continue;
            if (color[y] == Color::Grey) {
                auto it = std::find(stack.begin(), stack.end(), y);
                cycle = std::vector<std::string>(it, stack.end());
                cycle->push_back(y);
                return true;
            }
            if (color[y] == Color::White && self(self, y)) return true;
        }
        stack.pop_back();
        color[x] = Color::Black;
        return false;
    };
    for (auto const & g : gateways) {
        if (color[g] == Color::White && dfs(dfs, g)) return cycle;
    }
    return std::nullopt;
}

std::vector<Violation> check_well_formed(const BusinessProcessSpec & spec) {
    std::vector<Violation> out;

    // (1) unique start and end event
    auto starts = spec.startIds();
    auto ends = spec.endIds();
    if (starts.size() != 1)
        out.push_back({Condition::UniqueStartEnd, starts,
                       "process must have exactly one start event, found "
                           + std::to_string(starts.size())
                           + (starts.empty() ? "" : ": " + joinIds(starts))});
    if (ends.size() != 1)
        out.push_back({Condition::UniqueStartEnd, ends,
                       "process must have exactly one end event, found "
                           + std::to_string(ends.size())
                           + (ends.empty() ? "" : ": " + joinIds(ends))});

    // (2) every object on a start-to-end path (seq* is reflexive-transitive)
    auto fromStart = reach(spec, starts, true);
    auto toEnd = reach(spec, ends, false);
    for (auto const & o : spec.objects()) {
        bool ok1 = fromStart.count(o.id) > 0, ok2 = toEnd.count(o.id) > 0;
        if (ok1 && ok2) continue;
        std::string why = !ok1 && !ok2 ? "is unreachable from the start event and cannot reach the end event"
                          : !ok1       ? "is unreachable from the start event"
                                       : "cannot reach the end event";
        out.push_back({Condition::OnStartEndPath, {o.id}, "'" + o.id + "' " + why});
    }

    // (3) start events: exactly one successor, no predecessor
    for (auto const & s : starts) {
        auto ns = spec.successors(s).size(), np = spec.predecessors(s).size();
        if (ns != 1 || np != 0)
            out.push_back({Condition::StartDegree, {s},
                           "start event '" + s + "' must have one successor and no predecessor (has "
                               + std::to_string(ns) + " and " + std::to_string(np) + ")"});
    }

    // (4) end events: exactly one predecessor, no successor
    for (auto const & e : ends) {
        auto np = spec.predecessors(e).size(), ns = spec.successors(e).size();
        if (np != 1 || ns != 0)
            out.push_back({Condition::EndDegree, {e},
                           "end event '" + e + "' must have one predecessor and no successor (has "
                               + std::to_string(np) + " and " + std::to_string(ns) + ")"});
    }

    // (5) branch gateways: exactly one predecessor, at least one successor;
    //     merge gateways: exactly one successor, at least one predecessor
    for (auto const & o : spec.objects()) {
        auto np = spec.has(o.id) ? spec.predecessors(o.id).size() : 0;
        auto ns = spec.successors(o.id).size();
        if (isBranch(o.kind) && (np != 1 || ns < 1))
            out.push_back({Condition::GatewayDegree, {o.id},
                           "branch gateway '" + o.id
                               + "' must have one predecessor and at least one successor (has "
                               + std::to_string(np) + " and " + std::to_string(ns) + ")"});
        if (isMerge(o.kind) && (ns != 1 || np < 1))
            out.push_back({Condition::GatewayDegree, {o.id},
                           "merge gateway '" + o.id
                               + "' must have one successor and at least one predecessor (has "
                               + std::to_string(ns) + " and " + std::to_string(np) + ")"});
    }

    // (6) tasks: exactly one predecessor and one successor
    for (auto const & o : spec.objects()) {
        if (o.kind != Kind::Task) continue;
        auto np = spec.predecessors(o.id).size(), ns = spec.successors(o.id).size();
        if (np != 1 || ns != 1)
            out.push_back({Condition::TaskDegree, {o.id},
                           "task '" + o.id + "' must have one predecessor and one successor (has "
                               + std::to_string(np) + " and " + std::to_string(ns) + ")"});
    }

    // (7) no cycles through gateways only
    if (auto cycle = gateway_only_cycle(spec))
        out.push_back({Condition::GatewayOnlyCycle, *cycle,
                       "cycle through gateways only: " + joinIds(*cycle, " -> ")});

    return out;
}

std::string renderText(const std::vector<Violation> & vs) {
    if (vs.empty()) return "well-formed\n";
    std::ostringstream os;
    for (auto const & v : vs) {
        if (v.condition == Condition::Disjointness)
            os << "violation [disjointness] ";
        else
            os << "violation [condition " << static_cast<int>(v.condition) << "] ";
        os << v.message << "\n";
    }
    return os.str();
}

std::string renderJson(const std::vector<Violation> & vs) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto const & v : vs) {
        nlohmann::json rec;
        if (v.condition == Condition::Disjointness)
            rec["condition"] = "disjointness";
        else
            rec["condition"] = static_cast<int>(v.condition);
        rec["witness"] = v.witness;
        rec["message"] = v.message;
        arr.push_back(std::move(rec));
    }
    return arr.dump(2) + "\n";
}

} // namespace tempohorn::wellformed
