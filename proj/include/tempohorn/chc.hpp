/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tempohorn::chc {

using Int = long long;

/// Linear polynomial with integer coefficients over named variables.
class LinearTerm {
public:
    LinearTerm() = default;
    explicit LinearTerm(Int c) : constant_(c) {}

    static LinearTerm var(const std::string & name, Int coeff = 1);

    const std::map<std::string, Int> & coefficients() const { return coeffs_; }
    Int constant() const { return constant_; }
    Int coefficient(const std::string & v) const;
    bool isConstant() const { return coeffs_.empty(); }

    LinearTerm operator+(const LinearTerm & o) const;
    LinearTerm operator-(const LinearTerm & o) const;
    LinearTerm operator-() const { return scaled(-1); }
    LinearTerm scaled(Int k) const;

    /// Replaces v by repl (v's coefficient distributes over repl).
    LinearTerm substituted(const std::string & v, const LinearTerm & repl) const;
    LinearTerm renamed(const std::map<std::string, std::string> & renaming) const;

    Int evaluate(const std::map<std::string, Int> & env) const;
    void collectVars(std::set<std::string> & out) const;

    bool operator==(const LinearTerm &) const = default;
    auto operator<=>(const LinearTerm &) const = default;

private:
    std::map<std::string, Int> coeffs_; // no zero entries
    Int constant_ = 0;
    void insert(const std::string & v, Int c);
    friend class LinearConstraint;
};

enum class Rel { Eq, Neq, Le, Ge, Lt, Gt };

struct AtomicConstraint {
    LinearTerm lhs;
    Rel rel;
    LinearTerm rhs;
};

/// Canonical conjunct: poly >= 0 or poly = 0 (strictness already tightened away).
struct Conjunct {
    enum class Kind { Ge0, Eq0 };
    Kind kind;
    LinearTerm poly;

    bool operator==(const Conjunct &) const = default;
    auto operator<=>(const Conjunct &) const = default;
};

/// Conjunction of atomic linear constraints over the integers.
///
/// After normalize() the convex part is held as canonical conjuncts
/// (gcd-reduced, integer-tightened, deduplicated, sorted). Disequalities
/// are kept separately; callers that need a convex constraint split on them.
class LinearConstraint {
public:
    static LinearConstraint top() { return LinearConstraint(); }
    static LinearConstraint falsum();

    void add(const AtomicConstraint & a);
    void addEq(const LinearTerm & l, const LinearTerm & r) { add({l, Rel::Eq, r}); }
    void addGe(const LinearTerm & l, const LinearTerm & r) { add({l, Rel::Ge, r}); }
    void addLe(const LinearTerm & l, const LinearTerm & r) { add({l, Rel::Le, r}); }
    void addGt(const LinearTerm & l, const LinearTerm & r) { add({l, Rel::Gt, r}); }
    void addLt(const LinearTerm & l, const LinearTerm & r) { add({l, Rel::Lt, r}); }
    void addConjunct(Conjunct c);

    LinearConstraint conjoin(const LinearConstraint & o) const;

    void normalize();
    LinearConstraint normalized() const;

    bool isTriviallyFalse() const;
    bool isTop() const { return conjuncts_.empty() && disequalities_.empty(); }

    const std::vector<Conjunct> & conjuncts() const { return conjuncts_; }
    const std::vector<LinearTerm> & disequalities() const { return disequalities_; }

    bool approximate() const { return approximate_; }
    void markApproximate() { approximate_ = true; }

    std::set<std::string> variables() const;
    bool evaluate(const std::map<std::string, Int> & env) const;

    LinearConstraint substituted(const std::string & v, const LinearTerm & repl) const;
    LinearConstraint renamed(const std::map<std::string, std::string> & renaming) const;

    bool operator==(const LinearConstraint & o) const {
        return conjuncts_ == o.conjuncts_ && disequalities_ == o.disequalities_;
    }

private:
    std::vector<Conjunct> conjuncts_;
    std::vector<LinearTerm> disequalities_; // poly != 0
    bool approximate_ = false;
};

/// Three-valued satisfiability answer. SatLikely means the decision procedure
/// left its exact fragment; callers must treat it as "do not prune".
enum class SatResult { UnsatExact, SatExact, SatLikely };

SatResult is_satisfiable(const LinearConstraint & c);

/// True only when a => b is certain (exact unsat subproofs throughout).
bool implies(const LinearConstraint & a, const LinearConstraint & b);
bool equivalent(const LinearConstraint & a, const LinearConstraint & b);

/// Existential elimination of all variables not in keep. The result is always
/// implied by the projection; it is exact unless flagged approximate.
LinearConstraint project(const LinearConstraint & c, const std::set<std::string> & keep);

/// Splits the disequalities into < / > cases; each returned case is convex.
std::vector<LinearConstraint> splitDisequalities(const LinearConstraint & c);

using Arg = std::variant<std::string, Int>; // variable name or integer constant

inline bool argIsVar(const Arg & a) { return std::holds_alternative<std::string>(a); }
inline const std::string & argVar(const Arg & a) { return std::get<std::string>(a); }
inline Int argInt(const Arg & a) { return std::get<Int>(a); }

struct Atom {
    std::string pred;
    std::vector<Arg> args;

    bool operator==(const Atom &) const = default;
};

struct HornClause {
    std::optional<Atom> head; // nullopt encodes a goal (head false)
    LinearConstraint constraint;
    std::vector<Atom> body;

    bool isGoal() const { return !head.has_value(); }
};

struct ClauseSet {
    std::vector<HornClause> clauses;
    /// Every predicate that occurs anywhere, with its arity. Predicates with
    /// no defining clause are treated as open (empty relation in the least model).
    std::map<std::string, int> declaredArity;

    void declare(const std::string & pred, int arity);
    /// Rebuilds declaredArity from the clauses, checking arity consistency.
    void collectDeclarations();
    std::vector<std::string> predicates() const;
};

/// Pure form: head arguments become distinct variables, equalities pushed into
/// the body; equality-defined locals are substituted away where exact; the
/// whole clause is renamed to canonical variable names.
HornClause normalize_clause(const HornClause & cl);

/// Normalizes every clause and splits clauses on disequalities.
void normalizeClauseSet(ClauseSet & cs);

/// Canonical comparison key (normalizes and resolves duplicate-atom orderings).
std::string canonicalKey(const HornClause & cl);

struct ClauseParseError : std::runtime_error {
    int line, col;
    ClauseParseError(const std::string & msg, int line_, int col_)
        : std::runtime_error(msg + " at line " + std::to_string(line_) + ", column "
                             + std::to_string(col_)),
          line(line_), col(col_) {}
};

/// Parses the textual clause syntax, e.g. `new10(A,B,C) :- A=0, B=C.`
/// Atom arguments are restricted to variables and integer constants.
ClauseSet parseClauses(std::string_view text);

std::string printClause(const HornClause & cl);
std::string printClauseSet(const ClauseSet & cs);
std::string printConstraint(const LinearConstraint & c);

/// Deterministic fresh-variable source.
class VarGen {
public:
    explicit VarGen(std::string prefix = "_v") : prefix_(std::move(prefix)) {}
    std::string fresh() { return prefix_ + std::to_string(n_++); }

private:
    std::string prefix_;
    int n_ = 0;
};

} // namespace tempohorn::chc
