/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "tempohorn/specializer.hpp"

#include "tempohorn/wellformed.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <sstream>

namespace tempohorn::specializer {

using chc::Atom;
using chc::HornClause;
using chc::LinearConstraint;
using chc::LinearTerm;
using model::BusinessProcessSpec;
using model::Kind;
using semantics::FluentKind;

namespace {

constexpr std::size_t kClosureStepCap = 100000;

bool shapeLess(const SymbolicFluent & a, const SymbolicFluent & b) {
    return a.shapeKey() < b.shapeKey();
}

std::string shapeString(const SymbolicFluent & f) {
    switch (f.kind) {
        case FluentKind::Begins: return "begins(" + f.a + ")";
        case FluentKind::Completes: return "completes(" + f.a + ")";
        case FluentKind::Enables: return "enables(" + f.a + "," + f.b + ")";
        case FluentKind::Enacting: return "enacting(" + f.a + ",_)";
    }
    return "?";
}

chc::Arg termToArg(const LinearTerm & t) {
    if (t.isConstant()) return chc::Arg(t.constant());
    if (t.constant() == 0 && t.coefficients().size() == 1
        && t.coefficients().begin()->second == 1)
        return chc::Arg(t.coefficients().begin()->first);
    throw std::logic_error("residual term is neither a variable nor a constant");
}

} // namespace

void SymbolicState::sortFluents() {
    std::stable_sort(fluents.begin(), fluents.end(), shapeLess);
}

std::vector<const SymbolicFluent *> SymbolicState::enactingSlots() const {
    std::vector<const SymbolicFluent *> out;
    for (auto const & f : fluents)
        if (f.kind == FluentKind::Enacting) out.push_back(&f);
    return out;
}

// ---------------------------------------------------------------------------
// DefinitionTable

namespace {

std::string skeletonKey(const SymbolicState & s, int segment) {
    std::string key = std::to_string(segment) + "|";
    for (auto const & f : s.fluents) key += shapeString(f) + ";";
    return key;
}

} // namespace

chc::Atom DefinitionTable::fold(const SymbolicState & s, int segment,
                                const chc::LinearTerm & timeNow, const std::string & exitVar) {
    std::string key = skeletonKey(s, segment);
    auto it = byKey_.find(key);
    if (it == byKey_.end()) {
        Entry e;
        e.name = "new" + std::to_string(entries_.size() + 1);
        e.segment = segment;
        for (auto const & f : s.fluents) e.shape.push_back(shapeString(f));
        it = byKey_.emplace(std::move(key), entries_.size()).first;
        entries_.push_back(std::move(e));
    }
    Atom a;
    a.pred = entries_[it->second].name;
    for (auto const & f : s.fluents)
        if (f.kind == FluentKind::Enacting) a.args.push_back(termToArg(f.residual));
    a.args.push_back(termToArg(timeNow));
    a.args.emplace_back(exitVar);
    return a;
}

bool DefinitionTable::known(const SymbolicState & s, int segment) const {
    return byKey_.count(skeletonKey(s, segment)) > 0;
}

// ---------------------------------------------------------------------------
// Symbolic closure under the instantaneous rules

namespace {

struct Waypoint {
    std::vector<SymbolicFluent> shape;     // sorted; enacting residuals hold the
                                           // pattern constants
};

Waypoint makeWaypoint(const semantics::FluentSet & w) {
    Waypoint out;
    for (auto const & f : w) {
        SymbolicFluent sf{f.kind, f.a, f.b, LinearTerm(f.residual)};
        out.shape.push_back(std::move(sf));
    }
    std::stable_sort(out.shape.begin(), out.shape.end(), shapeLess);
    return out;
}

// Skeleton equality; on success appends the residual equalities to guard.
bool matchWaypoint(const SymbolicState & s, const Waypoint & w, LinearConstraint & guard) {
    if (s.fluents.size() != w.shape.size()) return false;
    for (std::size_t i = 0; i < s.fluents.size(); ++i)
        if (s.fluents[i].shapeKey() != w.shape[i].shapeKey()) return false;
    for (std::size_t i = 0; i < s.fluents.size(); ++i)
        if (s.fluents[i].kind == FluentKind::Enacting)
            guard.addEq(s.fluents[i].residual, w.shape[i].residual);
    return true;
}

struct ClosureOutcome {
    enum class Kind { Stable, Matched, DeadEnd };
    Kind kind;
    SymbolicState state;
};

std::string closureStateKey(const SymbolicState & s) {
    std::ostringstream os;
    auto term = [&](const LinearTerm & t) {
        for (auto const & [v, k] : t.coefficients()) os << v << '*' << k << '+';
        os << t.constant();
    };
    for (auto const & f : s.fluents) {
        os << static_cast<int>(f.kind) << ':' << f.a << ':' << f.b << ':';
        term(f.residual);
        os << ';';
    }
    os << '|';
    chc::LinearConstraint norm = s.guard.normalized();
    for (auto const & cj : norm.conjuncts()) {
        os << (cj.kind == chc::Conjunct::Kind::Eq0 ? "E" : "G");
        term(cj.poly);
        os << ';';
    }
    return os.str();
}

// Drives S1-S6 with a fixed rule order (S6, S2, S3, S4, S5, S1, least fluent
// first); only S3 branches. Every visited state is checked against the
// waypoint. States where no rule applies become Stable folds (or DeadEnds when
// nothing is enacting).
std::vector<ClosureOutcome> closureExplore(const BusinessProcessSpec & spec, SymbolicState start,
                                           const Waypoint * waypoint, chc::VarGen & gen) {
    std::vector<ClosureOutcome> out;
    std::deque<SymbolicState> queue;
    std::set<std::string> visited;
    start.sortFluents();
    queue.push_back(std::move(start));
    std::size_t steps = 0;

    while (!queue.empty()) {
        SymbolicState s = std::move(queue.front());
        queue.pop_front();
        if (!visited.insert(closureStateKey(s)).second) continue;
        if (++steps > kClosureStepCap)
            throw SpecializeError("instantaneous closure diverged (gateway-only cycle?)");

        if (waypoint) {
            LinearConstraint guard = s.guard;
            if (matchWaypoint(s, *waypoint, guard)) {
                SymbolicState matched = s;
                matched.guard = std::move(guard);
                out.push_back({ClosureOutcome::Kind::Matched, std::move(matched)});
            }
        }

        auto erased = [&](std::size_t idx) {
            SymbolicState t = s;
            t.fluents.erase(t.fluents.begin() + static_cast<std::ptrdiff_t>(idx));
            return t;
        };
        auto pushState = [&](SymbolicState t) {
            t.sortFluents();
            queue.push_back(std::move(t));
        };

        // S6: an enacting fluent whose residual is known to be zero completes
        std::optional<std::size_t> pick;
        for (std::size_t i = 0; i < s.fluents.size(); ++i) {
            auto const & f = s.fluents[i];
            if (f.kind == FluentKind::Enacting && f.residual.isConstant()
                && f.residual.constant() == 0) {
                pick = i;
                break;
            }
        }
        if (pick) {
            SymbolicState t = erased(*pick);
            t.fluents.push_back({FluentKind::Completes, s.fluents[*pick].a, "", LinearTerm()});
            pushState(std::move(t));
            continue;
        }

        // S2: a completed parallel branch enables all its successors
        for (std::size_t i = 0; i < s.fluents.size() && !pick; ++i) {
            auto const & f = s.fluents[i];
            if (f.kind == FluentKind::Completes && spec.kind(f.a) == Kind::ParBranch) pick = i;
        }
        if (pick) {
            SymbolicState t = erased(*pick);
            for (auto const & y : spec.successors(s.fluents[*pick].a))
                t.fluents.push_back({FluentKind::Enables, s.fluents[*pick].a, y, LinearTerm()});
            pushState(std::move(t));
            continue;
        }

        // S3: any other completed object enables exactly one successor (branch point)
        for (std::size_t i = 0; i < s.fluents.size() && !pick; ++i) {
            auto const & f = s.fluents[i];
            if (f.kind == FluentKind::Completes && spec.kind(f.a) != Kind::ParBranch
                && !spec.successors(f.a).empty())
                pick = i;
        }
        if (pick) {
            for (auto const & y : spec.successors(s.fluents[*pick].a)) {
                SymbolicState t = erased(*pick);
                t.fluents.push_back({FluentKind::Enables, s.fluents[*pick].a, y, LinearTerm()});
                pushState(std::move(t));
            }
            continue;
        }

        // S4: a parallel merge with every incoming flow enabled begins
        {
            std::optional<std::string> merge;
            for (auto const & o : spec.objects()) {
                if (o.kind != Kind::ParMerge) continue;
                auto const & preds = spec.predecessors(o.id);
                if (preds.empty()) continue;
                bool all = true;
                for (auto const & p : preds) {
                    bool found = false;
                    for (auto const & f : s.fluents)
                        if (f.kind == FluentKind::Enables && f.a == p && f.b == o.id) found = true;
                    if (!found) {
                        all = false;
                        break;
                    }
                }
                if (all) {
                    merge = o.id;
                    break;
                }
            }
            if (merge) {
                SymbolicState t = s;
                std::erase_if(t.fluents, [&](const SymbolicFluent & f) {
                    return f.kind == FluentKind::Enables && f.b == *merge;
                });
                t.fluents.push_back({FluentKind::Begins, *merge, "", LinearTerm()});
                pushState(std::move(t));
                continue;
            }
        }

        // S5: a single enabling starts any non-parallel-merge object
        for (std::size_t i = 0; i < s.fluents.size() && !pick; ++i) {
            auto const & f = s.fluents[i];
            if (f.kind == FluentKind::Enables && spec.kind(f.b) != Kind::ParMerge) pick = i;
        }
        if (pick) {
            SymbolicState t = erased(*pick);
            t.fluents.push_back({FluentKind::Begins, s.fluents[*pick].b, "", LinearTerm()});
            // a token joining an already-begun object collapses (set semantics)
            pushState(std::move(t));
            continue;
        }

        // S1: a begun object starts enacting; task durations stay symbolic
        for (std::size_t i = 0; i < s.fluents.size() && !pick; ++i)
            if (s.fluents[i].kind == FluentKind::Begins) pick = i;
        if (pick) {
            const std::string obj = s.fluents[*pick].a;
            SymbolicState t = erased(*pick);
            if (spec.kind(obj) == Kind::Task) {
                auto d = spec.durationBounds(obj);
                std::string dv = gen.fresh();
                t.guard.addGe(LinearTerm::var(dv), LinearTerm(d.min));
                t.guard.addLe(LinearTerm::var(dv), LinearTerm(d.max));
                t.fluents.push_back({FluentKind::Enacting, obj, "", LinearTerm::var(dv)});
            } else {
                t.fluents.push_back({FluentKind::Enacting, obj, "", LinearTerm()});
            }
            pushState(std::move(t));
            continue;
        }

        // no rule applies: a fold point if anything is enacting, a dead end otherwise
        bool anyEnacting = !s.enactingSlots().empty();
        out.push_back({anyEnacting ? ClosureOutcome::Kind::Stable : ClosureOutcome::Kind::DeadEnd,
                       std::move(s)});
    }
    return out;
}

} // namespace

std::vector<SymbolicState> instantaneous_closure(const BusinessProcessSpec & spec,
                                                 const SymbolicState & s, chc::VarGen & gen) {
    std::vector<SymbolicState> out;
    for (auto & o : closureExplore(spec, s, nullptr, gen))
        if (o.kind != ClosureOutcome::Kind::Matched) out.push_back(std::move(o.state));
    return out;
}

std::vector<TimeAdvance> advance_time(const SymbolicState & s, const LinearTerm & timeNow,
                                      chc::VarGen & gen) {
    auto slots = s.enactingSlots();
    if (slots.empty()) throw std::logic_error("advance_time: no enacting fluent");
    std::vector<TimeAdvance> out;
    for (std::size_t m = 0; m < slots.size(); ++m) {
        TimeAdvance adv;
        adv.constraint = s.guard;
        const LinearTerm & chosen = slots[m]->residual;
        adv.constraint.addGt(chosen, LinearTerm(0)); // m > 0
        for (std::size_t j = 0; j < slots.size(); ++j)
            if (j != m) adv.constraint.addLe(chosen, slots[j]->residual);

        SymbolicState next;
        std::vector<LinearTerm> newResiduals;
        for (std::size_t j = 0; j < slots.size(); ++j) {
            std::string v = gen.fresh();
            adv.constraint.addEq(LinearTerm::var(v), slots[j]->residual - chosen);
            newResiduals.push_back(LinearTerm::var(v));
        }
        std::size_t slotIdx = 0;
        for (auto const & f : s.fluents) {
            if (f.kind == FluentKind::Enacting) {
                next.fluents.push_back({f.kind, f.a, f.b, newResiduals[slotIdx++]});
            } else {
                next.fluents.push_back(f);
            }
        }
        next.guard = adv.constraint;

        std::string tv = gen.fresh();
        adv.constraint.addEq(LinearTerm::var(tv), timeNow + chosen);
        next.guard = adv.constraint;
        adv.advancedTime = LinearTerm::var(tv);
        adv.next = std::move(next);
        out.push_back(std::move(adv));
    }
    return out;
}

// ---------------------------------------------------------------------------
// specialize

namespace {

struct SpecializerState {
    explicit SpecializerState(const BusinessProcessSpec & s) : spec(s) {}

    const BusinessProcessSpec & spec;
    std::vector<Waypoint> waypoints;
    DefinitionTable table;
    chc::VarGen gen{"_v"};
    std::vector<std::vector<HornClause>> clausesByPredicate;
    std::deque<std::size_t> pending; // predicate indices awaiting definition
    std::vector<bool> segmentMatched;
    std::vector<SymbolicState> predicateStates;

    // fold() wrapper that schedules newly discovered predicates
    Atom foldState(const SymbolicState & s, int segment, const LinearTerm & timeNow,
                   const std::string & exitVar) {
        std::size_t before = table.entries().size();
        Atom a = table.fold(s, segment, timeNow, exitVar);
        if (table.entries().size() > before) {
            clausesByPredicate.emplace_back();
            pending.push_back(table.entries().size() - 1);
            predicateStates.push_back(headStateOf(s));
        }
        return a;
    }

    // the canonical head state for a predicate: the skeleton with fresh,
    // unconstrained residual variables X1..Xk
    static SymbolicState headStateOf(const SymbolicState & s) {
        SymbolicState head;
        int i = 0;
        for (auto const & f : s.fluents) {
            if (f.kind == FluentKind::Enacting) {
                head.fluents.push_back({f.kind, f.a, f.b,
                                        LinearTerm::var("X" + std::to_string(++i))});
            } else {
                head.fluents.push_back({f.kind, f.a, f.b, LinearTerm()});
            }
        }
        return head;
    }

    void definePredicate(std::size_t idx) {
        // copies: folding below may grow the table and clause vectors
        const std::string name = table.entries()[idx].name;
        const int segment = table.entries()[idx].segment;
        const Waypoint w = waypoints[static_cast<std::size_t>(segment)];
        SymbolicState head = predicateStates[idx];
        auto slots = head.enactingSlots();

        Atom headAtom;
        headAtom.pred = name;
        for (auto const * sl : slots) headAtom.args.push_back(termToArg(sl->residual));
        headAtom.args.emplace_back("T");
        headAtom.args.emplace_back("Tz");

        std::vector<HornClause> clauses;
        auto emit = [&](LinearConstraint constraint, std::vector<Atom> body) {
            HornClause cl;
            cl.head = headAtom;
            cl.constraint = std::move(constraint);
            cl.body = std::move(body);
            clauses.push_back(chc::normalize_clause(cl));
        };

        // the head state itself may be the waypoint (skeleton match)
        {
            LinearConstraint guard = head.guard;
            if (matchWaypoint(head, w, guard)) {
                guard.addEq(LinearTerm::var("Tz"), LinearTerm::var("T"));
                emit(std::move(guard), {});
                segmentMatched[static_cast<std::size_t>(segment)] = true;
            }
        }

        // zero cases: every nonempty subset of slots completes together
        std::size_t k = slots.size();
        for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
            SymbolicState start;
            start.guard = head.guard;
            std::size_t slotIdx = 0;
            for (auto const & f : head.fluents) {
                if (f.kind == FluentKind::Enacting) {
                    bool zero = (mask >> slotIdx) & 1;
                    ++slotIdx;
                    if (zero) {
                        start.guard.addEq(f.residual, LinearTerm(0));
                        start.fluents.push_back({FluentKind::Completes, f.a, "", LinearTerm()});
                        continue;
                    }
                }
                start.fluents.push_back(f);
            }
            for (auto & o : closureExplore(spec, std::move(start), &w, gen)) {
                if (o.kind == ClosureOutcome::Kind::Matched) {
                    LinearConstraint c = o.state.guard;
                    c.addEq(LinearTerm::var("Tz"), LinearTerm::var("T"));
                    emit(std::move(c), {});
                    segmentMatched[static_cast<std::size_t>(segment)] = true;
                } else if (o.kind == ClosureOutcome::Kind::Stable) {
                    Atom callee = foldState(o.state, segment, LinearTerm::var("T"), "Tz");
                    emit(o.state.guard, {std::move(callee)});
                } // dead ends contribute nothing: the relation below them is empty
            }
        }

        // time rule: one case per slot chosen as the minimum residual
        if (!slots.empty()) {
            for (auto & adv : advance_time(head, LinearTerm::var("T"), gen)) {
                Atom callee;
                callee.pred = name;
                for (auto const * sl : adv.next.enactingSlots())
                    callee.args.push_back(termToArg(sl->residual));
                callee.args.push_back(termToArg(adv.advancedTime));
                callee.args.emplace_back("Tz");
                emit(adv.constraint, {std::move(callee)});
            }
        }
        clausesByPredicate[idx] = std::move(clauses);
    }
};

} // namespace

SpecializeResult specialize(const BusinessProcessSpec & spec,
                            const semantics::PropertySpec & prop) {
    if (prop.waypoints.empty()) throw SpecializeError("property needs at least one waypoint");
    if (prop.timeVars.size() != prop.waypoints.size() + 1)
        throw SpecializeError("property needs one time variable per waypoint plus the initial one");
    {
        auto violations = wellformed::check_well_formed(spec);
        if (!violations.empty())
            throw SpecializeError("model is not well-formed:\n" + wellformed::renderText(violations));
    }
    for (auto const & w : prop.waypoints)
        for (auto const & f : w)
            if (!spec.has(f.a))
                throw SpecializeError("property mentions unknown object '" + f.a + "'");

    SpecializerState st(spec);
    for (auto const & w : prop.waypoints) st.waypoints.push_back(makeWaypoint(w));
    st.segmentMatched.assign(prop.waypoints.size(), false);

    // goal clauses: chain one generated predicate per waypoint segment,
    // enumerating the instantaneous alternatives at each segment entry
    struct ChainAlt {
        LinearConstraint constraint;
        std::vector<Atom> atoms;
    };
    std::vector<ChainAlt> chains{{LinearConstraint::top(), {}}};

    semantics::FluentSet entryFluents{semantics::Fluent::begins(spec.startId())};
    for (std::size_t i = 0; i < prop.waypoints.size(); ++i) {
        SymbolicState entry;
        for (auto const & f : entryFluents)
            entry.fluents.push_back({f.kind, f.a, f.b, LinearTerm(f.residual)});
        std::vector<ChainAlt> next;
        auto outcomes = closureExplore(spec, std::move(entry), &st.waypoints[i], st.gen);
        for (auto & o : outcomes) {
            for (auto const & base : chains) {
                if (o.kind == ClosureOutcome::Kind::Matched) {
                    ChainAlt alt = base;
                    alt.constraint = alt.constraint.conjoin(o.state.guard);
                    alt.constraint.addEq(LinearTerm::var(prop.timeVars[i + 1]),
                                         LinearTerm::var(prop.timeVars[i]));
                    next.push_back(std::move(alt));
                    st.segmentMatched[i] = true;
                } else if (o.kind == ClosureOutcome::Kind::Stable) {
                    ChainAlt alt = base;
                    alt.constraint = alt.constraint.conjoin(o.state.guard);
                    alt.atoms.push_back(st.foldState(o.state, static_cast<int>(i),
                                                     LinearTerm::var(prop.timeVars[i]),
                                                     prop.timeVars[i + 1]));
                    next.push_back(std::move(alt));
                }
            }
        }
        chains = std::move(next);
        entryFluents = prop.waypoints[i];
        if (chains.empty()) break; // every alternative dead-ends
    }

    // define every discovered predicate (folding may uncover more)
    while (!st.pending.empty()) {
        std::size_t idx = st.pending.front();
        st.pending.pop_front();
        st.definePredicate(idx);
    }

    SpecializeResult result;
    for (std::size_t i = 0; i < st.segmentMatched.size(); ++i)
        if (!st.segmentMatched[i])
            result.warnings.push_back("waypoint " + std::to_string(i + 1)
                                      + " is unreachable; the goal body is unsatisfiable");

    // productive predicates: some clause's body atoms are all productive
    std::size_t n = st.table.entries().size();
    std::vector<bool> productive(n, false);
    std::map<std::string, std::size_t> indexByName;
    for (std::size_t i = 0; i < n; ++i) indexByName[st.table.entries()[i].name] = i;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (productive[i]) continue;
            for (auto const & cl : st.clausesByPredicate[i]) {
                bool ok = true;
                for (auto const & a : cl.body)
                    if (!productive[indexByName.at(a.pred)]) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    productive[i] = true;
                    changed = true;
                    break;
                }
            }
        }
    }

    // assemble: defining clauses of productive predicates (dropping clauses
    // that call unproductive ones), then the goal clauses
    for (std::size_t i = 0; i < n; ++i) {
        if (!productive[i]) continue;
        for (auto const & cl : st.clausesByPredicate[i]) {
            bool keep = true;
            for (auto const & a : cl.body)
                if (!productive[indexByName.at(a.pred)]) keep = false;
            if (keep) result.clauses.clauses.push_back(cl);
        }
    }

    LinearConstraint violation = prop.violation;
    violation.addEq(LinearTerm::var(prop.timeVars[0]), LinearTerm(0));
    for (auto const & alt : chains) {
        HornClause goal;
        goal.constraint = violation.conjoin(alt.constraint);
        goal.body = alt.atoms;
        result.clauses.clauses.push_back(chc::normalize_clause(goal));
    }
    // declares every referenced predicate; those whose clauses were dropped as
    // unproductive stay declared with an empty definition (empty relation)
    result.clauses.collectDeclarations();
    return result;
}

} // namespace tempohorn::specializer
