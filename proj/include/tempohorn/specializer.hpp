/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "tempohorn/chc.hpp"
#include "tempohorn/model.hpp"
#include "tempohorn/semantics.hpp"

#include <map>
#include <string>
#include <vector>

namespace tempohorn::specializer {

/// One fluent of a symbolic state. Enacting residuals are linear terms (a
/// variable, a constant, or a defined expression); all other fluents are
/// concrete.
struct SymbolicFluent {
    semantics::FluentKind kind;
    std::string a, b;
    chc::LinearTerm residual; // enacting only

    auto shapeKey() const { return std::tuple(kind, a, b); }
};

/// A state whose fluent skeleton is concrete and whose enacting residuals are
/// symbolic, together with the constraint accumulated along its derivation.
struct SymbolicState {
    std::vector<SymbolicFluent> fluents; // sorted by shapeKey, stable among equals
    chc::LinearConstraint guard;

    void sortFluents();
    std::vector<const SymbolicFluent *> enactingSlots() const;
};

struct SpecializeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Names one generated predicate per (fluent skeleton, waypoint segment).
/// Argument convention: residual variables in skeleton order, then the
/// current-time variable, then the segment exit-time variable.
class DefinitionTable {
public:
    struct Entry {
        std::string name;
        std::vector<std::string> shape; // skeleton signature, for diagnostics
        int segment;
    };

    /// Returns the call atom for the state in the given segment, creating a
    /// fresh predicate on first sight.
    chc::Atom fold(const SymbolicState & s, int segment, const chc::LinearTerm & timeNow,
                   const std::string & exitVar);

    bool known(const SymbolicState & s, int segment) const;
    const std::vector<Entry> & entries() const { return entries_; }

private:
    std::map<std::string, std::size_t> byKey_;
    std::vector<Entry> entries_;
    friend struct SpecializerImpl;
};

/// All maximal descendants of s under the instantaneous rules S1-S6 only.
/// Duration variables introduced along the way are recorded in the guards.
std::vector<SymbolicState> instantaneous_closure(const model::BusinessProcessSpec & spec,
                                                 const SymbolicState & s, chc::VarGen & gen);

/// The time rule S7: one case per enacting slot chosen as the minimum.
/// Each case carries the choice constraint (with fresh-variable definitions for
/// the decremented residuals and the advanced time) and the successor state.
struct TimeAdvance {
    chc::LinearConstraint constraint;
    SymbolicState next;
    chc::LinearTerm advancedTime; // previous time plus the chosen residual
};
std::vector<TimeAdvance> advance_time(const SymbolicState & s, const chc::LinearTerm & timeNow,
                                      chc::VarGen & gen);

struct SpecializeResult {
    chc::ClauseSet clauses;
    std::vector<std::string> warnings;
};

/// Removal of the interpreter: compiles a well-formed model plus a property
/// into constrained Horn clauses over integers. The output mentions only
/// generated predicates and integer variables; its satisfiability is
/// equivalent to the property holding.
SpecializeResult specialize(const model::BusinessProcessSpec & spec,
                            const semantics::PropertySpec & prop);

} // namespace tempohorn::specializer
