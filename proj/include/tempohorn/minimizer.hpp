/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "tempohorn/chc.hpp"

#include <map>
#include <string>
#include <vector>

namespace tempohorn::minimizer {

/// A partition of the predicate symbols into equivalence classes, each with a
/// chosen representative.
struct Partition {
    std::vector<std::vector<std::string>> classes; // members sorted
    std::map<std::string, std::string> representative;

    const std::string & repOf(const std::string & pred) const { return representative.at(pred); }
};

struct MinimizerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The coarsest cp-equivalence on a pure-form clause set, computed by greatest
/// fixpoint refinement starting from one class per arity.
Partition coarsest_cp_equivalence(const chc::ClauseSet & cs);

/// True iff the body sets of p and q admit a bijection whose matched bodies
/// are equal after renaming with the partition's classes, aligning head
/// variables and atom argument positions, and canonical constraint comparison.
/// Approximate projections refuse the merge.
bool bodies_equivalent(const std::string & p, const std::string & q, const Partition & e,
                       const chc::ClauseSet & cs);

/// Drops clauses headed by non-representatives, renames every predicate to its
/// class representative, and deduplicates syntactically identical clauses.
/// Satisfiability is preserved.
chc::ClauseSet apply_renaming(const chc::ClauseSet & cs, const Partition & e);

std::string renderPartition(const Partition & e);

/// Natural comparison: digit runs compare numerically, so new10 orders after
/// new7. Used to pick class representatives deterministically.
bool naturalLess(const std::string & a, const std::string & b);

} // namespace tempohorn::minimizer
